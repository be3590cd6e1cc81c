#include "rtmot/analysis.hpp"

#include <stdexcept>

namespace rtmot {

namespace {

void require_ranks(const TaskSet& tasks) {
    if (tasks.empty()) throw std::invalid_argument("analysis: empty task set");
    std::vector<bool> seen(tasks.size(), false);
    for (const TaskSpec& t : tasks) {
        if (t.priority < 0 || static_cast<std::size_t>(t.priority) >= tasks.size() ||
            seen[static_cast<std::size_t>(t.priority)])
            throw std::invalid_argument("analysis: priority ranks must form a permutation");
        seen[static_cast<std::size_t>(t.priority)] = true;
    }
}

RtaResult rta_with_costs(const TaskSet& tasks, const std::vector<Duration>& cost) {
    require_ranks(tasks);
    RtaResult result;
    result.tasks.resize(tasks.size());
    result.schedulable = true;

    for (std::size_t i = 0; i < tasks.size(); ++i) {
        Duration blocking = 0;
        for (std::size_t j = 0; j < tasks.size(); ++j)
            if (tasks[j].priority > tasks[i].priority)
                blocking = std::max(blocking, cost[j]);

        Duration r = cost[i] + blocking;
        int iterations = 0;
        bool ok = r <= tasks[i].period;
        while (ok) {
            ++iterations;
            Duration next = cost[i] + blocking;
            for (std::size_t h = 0; h < tasks.size(); ++h)
                if (tasks[h].priority < tasks[i].priority)
                    next += ceil_div(r, tasks[h].period) * cost[h];
            if (next > tasks[i].period) {
                r = next;
                ok = false;
                break;
            }
            if (next == r) break;
            r = next;
        }

        result.tasks[i] = {tasks[i].id, r, ok, iterations};
        result.schedulable = result.schedulable && ok;
    }
    return result;
}

}  // namespace

const RtaTaskResult& RtaResult::for_task(int task_id) const {
    for (const RtaTaskResult& t : tasks)
        if (t.task_id == task_id) return t;
    throw std::invalid_argument("RtaResult: unknown task id");
}

RtaResult rta_min(const TaskSet& tasks) {
    return rta_fixed_pair(tasks, PairChoice::LL);
}

RtaResult rta_fixed_pair(const TaskSet& tasks, PairChoice pair) {
    std::vector<Duration> cost(tasks.size());
    for (std::size_t i = 0; i < tasks.size(); ++i) cost[i] = wcet_of(tasks[i].wcet, pair);
    return rta_with_costs(tasks, cost);
}

namespace {

void require_index(const SchedulerSnapshot& snap, const TaskSet& tasks, std::size_t i) {
    if (i >= tasks.size() || snap.tasks.size() != tasks.size())
        throw std::logic_error("analysis: snapshot/task index mismatch");
}

Duration min_cost(const TaskSpec& t) { return wcet_of(t.wcet, PairChoice::LL); }

// Shared body of the two online guards: deadline window ends at `window_end`
// for the guarded job of task j.
bool check_window(std::size_t j, std::size_t k, Duration c_k, Instant window_end,
                  const SchedulerSnapshot& snap, const TaskSet& tasks) {
    Duration lhs = min_cost(tasks[j]) + c_k;
    for (std::size_t h = 0; h < tasks.size(); ++h) {
        if (tasks[h].priority >= tasks[j].priority) continue;  // HP(j) only
        if (h != k && snap.tasks[h].active) lhs += min_cost(tasks[h]);
        const Instant r_h = snap.tasks[h].next_event;
        if (r_h < window_end)
            lhs += ceil_div(window_end - r_h, tasks[h].period) * min_cost(tasks[h]);
    }
    return lhs <= window_end - snap.now;
}

}  // namespace

bool check_self(Duration c_k, const SchedulerSnapshot& snap, const TaskSet& tasks,
                std::size_t k) {
    require_index(snap, tasks, k);
    if (!snap.tasks[k].active) throw std::logic_error("check_self: task k has no active job");
    return c_k <= snap.tasks[k].next_event - snap.now;
}

bool check_active(std::size_t j, std::size_t k, Duration c_k,
                  const SchedulerSnapshot& snap, const TaskSet& tasks) {
    require_index(snap, tasks, j);
    require_index(snap, tasks, k);
    if (!snap.tasks[j].active) throw std::logic_error("check_active: task j has no active job");
    // For j == k the guarded job is tau_k's next release (the earliest job of
    // tau_k executed after J_k; J_k itself is covered by check_self), so the
    // deadline window ends one period later.
    const Instant window_end =
        snap.tasks[j].next_event + (j == k ? tasks[j].period : 0);
    return check_window(j, k, c_k, window_end, snap, tasks);
}

bool check_inactive(std::size_t j, std::size_t k, Duration c_k,
                    const SchedulerSnapshot& snap, const TaskSet& tasks) {
    require_index(snap, tasks, j);
    require_index(snap, tasks, k);
    if (snap.tasks[j].active) throw std::logic_error("check_inactive: task j has an active job");
    if (j == k) throw std::logic_error("check_inactive: j cannot be k");
    return check_window(j, k, c_k, snap.tasks[j].next_event + tasks[j].period, snap, tasks);
}

std::vector<FeasibleAssignment> feasible_assignments(
    const SchedulerSnapshot& snap, const TaskSet& tasks, std::size_t only_task,
    long* lemma_eval_counter) {
    if (snap.tasks.size() != tasks.size())
        throw std::logic_error("feasible_assignments: snapshot/task size mismatch");

    std::vector<FeasibleAssignment> out;
    for (std::size_t k = 0; k < tasks.size(); ++k) {
        if (!snap.tasks[k].active) continue;
        if (only_task != kAnyTask && k != only_task) continue;
        for (PairChoice pair : kAllPairs) {
            const Duration c_k = wcet_of(tasks[k].wcet, pair);
            if (!check_self(c_k, snap, tasks, k)) continue;
            bool ok = true;
            for (std::size_t j = 0; j < tasks.size() && ok; ++j) {
                if (snap.tasks[j].active) {
                    if (lemma_eval_counter) ++*lemma_eval_counter;
                    ok = check_active(j, k, c_k, snap, tasks);
                } else {
                    if (lemma_eval_counter) ++*lemma_eval_counter;
                    ok = check_inactive(j, k, c_k, snap, tasks);
                }
            }
            if (ok) out.push_back({k, pair, c_k, 0.0});
        }
    }
    return out;
}

}  // namespace rtmot
