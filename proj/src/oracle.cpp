#include "rtmot/oracle.hpp"

#include <algorithm>
#include <stdexcept>

namespace rtmot {

namespace {

void require_multiple(Duration value, Duration quantum, const char* what) {
    if (value % quantum != 0)
        throw std::invalid_argument(std::string("tick_simulate_min: ") + what +
                                    " is not a quantum multiple");
}

}  // namespace

TickSimReport tick_simulate_min(const TaskSet& tasks, const TickSimConfig& config) {
    if (tasks.empty()) throw std::invalid_argument("tick_simulate_min: empty task set");
    if (config.quantum <= 0) throw std::invalid_argument("tick_simulate_min: invalid quantum");
    if (!config.offsets.empty() && config.offsets.size() != tasks.size())
        throw std::invalid_argument("tick_simulate_min: offsets size mismatch");

    const Duration q = config.quantum;
    const std::size_t n = tasks.size();

    std::vector<Instant> offset(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        offset[i] = config.offsets.empty() ? tasks[i].phase : config.offsets[i];

    Instant max_offset = 0;
    for (std::size_t i = 0; i < n; ++i) {
        require_multiple(tasks[i].period, q, "period");
        require_multiple(offset[i], q, "offset");
        const WcetProfile& w = tasks[i].wcet;
        for (Duration c : {w.pre, w.infer_l, w.infer_h, w.as_l, w.as_h, w.post})
            require_multiple(c, q, "wcet component");
        max_offset = std::max(max_offset, offset[i]);
    }
    if (config.blocking) {
        require_multiple(config.blocking->release, q, "blocking release");
        require_multiple(config.blocking->cost, q, "blocking cost");
    }

    Duration horizon = config.horizon;
    if (horizon == 0) {
        Duration max_period = 0;
        for (const TaskSpec& t : tasks) max_period = std::max(max_period, t.period);
        horizon = 2 * hyperperiod(tasks) + max_period + max_offset;
    }
    require_multiple(horizon, q, "horizon");

    const long ticks = horizon / q;
    std::vector<long> period_ticks(n), cost_ticks(n), offset_ticks(n), next_release(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        period_ticks[i] = tasks[i].period / q;
        cost_ticks[i] = wcet_of(tasks[i].wcet, PairChoice::LL) / q;
        offset_ticks[i] = offset[i] / q;
    }

    struct PendingJob {
        std::size_t task;
        long index;
        long deadline_tick;
    };
    std::vector<std::vector<PendingJob>> pending(n);  // FIFO per task

    bool blocker_pending = false;
    long blocker_release = 0, blocker_cost = 0;
    if (config.blocking && config.blocking->cost > 0) {
        blocker_pending = true;
        blocker_release = config.blocking->release / q;
        blocker_cost = config.blocking->cost / q;
    }

    struct Running {
        bool blocker;
        std::size_t task;
        long index;
        long deadline_tick;
        long remaining;
    };
    std::optional<Running> running;

    TickSimReport report;
    report.horizon = horizon;

    auto record_miss = [&](std::size_t task, long index, long finish_tick, long deadline_tick) {
        report.misses.push_back(
            {tasks[task].id, index, (finish_tick - deadline_tick) * q});
    };

    for (long tick = 0; tick < ticks; ++tick) {
        if (running && running->remaining == 0) {
            if (!running->blocker && tick > running->deadline_tick)
                record_miss(running->task, running->index, tick, running->deadline_tick);
            running.reset();
        }
        for (std::size_t i = 0; i < n; ++i) {
            while (offset_ticks[i] + next_release[i] * period_ticks[i] <= tick) {
                const long rel = offset_ticks[i] + next_release[i] * period_ticks[i];
                pending[i].push_back({i, next_release[i], rel + period_ticks[i]});
                ++next_release[i];
            }
        }
        if (!running) {
            // Real tasks by rank first; the synthetic blocker sits below all.
            std::optional<std::size_t> best;
            for (std::size_t i = 0; i < n; ++i) {
                if (pending[i].empty()) continue;
                if (!best || tasks[i].priority < tasks[*best].priority) best = i;
            }
            if (best) {
                const PendingJob job = pending[*best].front();
                pending[*best].erase(pending[*best].begin());
                if (cost_ticks[*best] == 0) {
                    if (tick > job.deadline_tick)
                        record_miss(job.task, job.index, tick, job.deadline_tick);
                } else {
                    running = Running{false, job.task, job.index, job.deadline_tick,
                                      cost_ticks[*best]};
                }
            } else if (blocker_pending && blocker_release <= tick) {
                blocker_pending = false;
                running = Running{true, 0, 0, 0, blocker_cost};
            }
        }
        if (running) --running->remaining;
    }

    // Finish bookkeeping at the horizon: a still-running late job and any
    // pending job whose deadline has passed both count as misses.
    if (running && running->remaining == 0 && !running->blocker &&
        ticks > running->deadline_tick)
        record_miss(running->task, running->index, ticks, running->deadline_tick);
    else if (running && running->remaining > 0 && !running->blocker &&
             ticks + running->remaining > running->deadline_tick)
        record_miss(running->task, running->index, ticks + running->remaining,
                    running->deadline_tick);
    for (std::size_t i = 0; i < n; ++i)
        for (const PendingJob& job : pending[i])
            if (job.deadline_tick < ticks || (job.deadline_tick == ticks && cost_ticks[i] > 0))
                record_miss(job.task, job.index,
                            ticks + std::max<long>(cost_ticks[i], 1), job.deadline_tick);

    return report;
}

bool exhaustive_future_check(const TaskSet& tasks, const SchedulerSnapshot& snap,
                             std::size_t task_k, Duration c_k, Duration horizon_cap) {
    if (snap.tasks.size() != tasks.size())
        throw std::invalid_argument("exhaustive_future_check: snapshot size mismatch");
    if (task_k >= tasks.size() || !snap.tasks[task_k].active)
        throw std::invalid_argument("exhaustive_future_check: task k must be active");

    const std::size_t n = tasks.size();
    const Instant t0 = snap.now;
    const Duration h = hyperperiod(tasks);
    Duration max_period = 0;
    for (const TaskSpec& t : tasks) max_period = std::max(max_period, t.period);
    const Instant hard_cap =
        horizon_cap > 0 ? t0 + horizon_cap : t0 + 3 * h + max_period;

    struct FutureJob {
        Instant release;
        Instant deadline;
    };
    // One queue per task; the head is the active/earliest job.
    std::vector<std::vector<FutureJob>> pending(n);
    std::vector<Instant> next_release(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (snap.tasks[i].active) {
            // r_i doubles as the active job's absolute deadline.
            pending[i].push_back({snap.tasks[i].next_event - tasks[i].period,
                                  snap.tasks[i].next_event});
            next_release[i] = snap.tasks[i].next_event;
        } else {
            next_release[i] = snap.tasks[i].next_event;
        }
    }

    auto release_due = [&](Instant t) {
        for (std::size_t i = 0; i < n; ++i)
            while (next_release[i] <= t) {
                pending[i].push_back({next_release[i], next_release[i] + tasks[i].period});
                next_release[i] += tasks[i].period;
            }
    };

    std::optional<Instant> idle_seen;
    Instant t = t0;

    // The grant under test runs first.
    {
        const FutureJob job = pending[task_k].front();
        pending[task_k].erase(pending[task_k].begin());
        t = t0 + c_k;
        if (t > job.deadline) return false;
    }

    while (t < hard_cap) {
        if (idle_seen && t >= *idle_seen + h) break;
        release_due(t);

        std::optional<std::size_t> best;
        for (std::size_t i = 0; i < n; ++i) {
            if (pending[i].empty()) continue;
            if (!best || tasks[i].priority < tasks[*best].priority) best = i;
        }
        if (!best) {
            if (!idle_seen) idle_seen = t;
            Instant nr = next_release[0];
            for (std::size_t i = 1; i < n; ++i) nr = std::min(nr, next_release[i]);
            t = nr;
            continue;
        }
        const FutureJob job = pending[*best].front();
        pending[*best].erase(pending[*best].begin());
        t += wcet_of(tasks[*best].wcet, PairChoice::LL);
        if (t > job.deadline) return false;
    }
    return true;
}

}  // namespace rtmot
