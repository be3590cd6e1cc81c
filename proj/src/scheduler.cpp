#include "rtmot/scheduler.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "rtmot/rng.hpp"

namespace rtmot {

const char* to_string(Policy p) {
    switch (p) {
        case Policy::npfp_min: return "min";
        case Policy::npfp_flex: return "flex";
        case Policy::npfp_flex_npi: return "flex-npi";
        case Policy::static_ll: return "static-LL";
        case Policy::static_lh: return "static-LH";
        case Policy::static_hl: return "static-HL";
        case Policy::static_hh: return "static-HH";
    }
    return "??";
}

std::optional<Policy> policy_from_string(std::string_view s) {
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "min") return Policy::npfp_min;
    if (lower == "flex") return Policy::npfp_flex;
    if (lower == "flex-npi") return Policy::npfp_flex_npi;
    if (lower == "static-ll") return Policy::static_ll;
    if (lower == "static-lh") return Policy::static_lh;
    if (lower == "static-hl") return Policy::static_hl;
    if (lower == "static-hh") return Policy::static_hh;
    return std::nullopt;
}

bool policy_is_static(Policy p) {
    return p == Policy::static_ll || p == Policy::static_lh || p == Policy::static_hl ||
           p == Policy::static_hh;
}

PairChoice analysis_pair(Policy p) {
    switch (p) {
        case Policy::static_lh: return PairChoice::LH;
        case Policy::static_hl: return PairChoice::HL;
        case Policy::static_hh: return PairChoice::HH;
        default: return PairChoice::LL;
    }
}

Duration ExecutionTimeModel::sample(int task_id, long job_index, Duration wcet) const {
    if (wcet <= 0) return 0;
    Duration actual = wcet;
    switch (mode) {
        case Mode::wcet_exact:
            break;
        case Mode::scaled:
            actual = static_cast<Duration>(std::llround(scale * static_cast<double>(wcet)));
            break;
        case Mode::stochastic: {
            const double u = to_unit_double(mix64(seed, static_cast<std::uint64_t>(task_id) + 1,
                                                  static_cast<std::uint64_t>(job_index) + 1));
            const double lo = low_fraction * static_cast<double>(wcet);
            actual = static_cast<Duration>(
                std::llround(lo + u * (static_cast<double>(wcet) - lo)));
            break;
        }
    }
    return std::clamp<Duration>(actual, 1, wcet);
}

std::optional<ExecutionTimeModel> ExecutionTimeModel::parse(std::string_view s) {
    ExecutionTimeModel m;
    if (s == "wcet") {
        m.mode = Mode::wcet_exact;
        return m;
    }
    auto parse_fraction = [](std::string_view text, double& out) {
        const char* end = text.data() + text.size();
        auto [p, ec] = std::from_chars(text.data(), end, out);
        return ec == std::errc() && p == end && out >= 0.0 && out <= 1.0;
    };
    if (s.starts_with("scaled:")) {
        m.mode = Mode::scaled;
        if (!parse_fraction(s.substr(7), m.scale)) return std::nullopt;
        return m;
    }
    if (s.starts_with("stochastic:")) {
        m.mode = Mode::stochastic;
        if (!parse_fraction(s.substr(11), m.low_fraction)) return std::nullopt;
        return m;
    }
    return std::nullopt;
}

std::string ExecutionTimeModel::format() const {
    switch (mode) {
        case Mode::wcet_exact: return "wcet";
        case Mode::scaled: return "scaled:" + std::to_string(scale);
        case Mode::stochastic: return "stochastic:" + std::to_string(low_fraction);
    }
    return "wcet";
}

namespace {

std::optional<std::size_t> highest_priority_active(const SchedulerSnapshot& snap,
                                                   const TaskSet& tasks) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (!snap.tasks[i].active) continue;
        if (!best || tasks[i].priority < tasks[*best].priority) best = i;
    }
    return best;
}

std::optional<Decision> fixed_pair_decide(const SchedulerSnapshot& snap, const TaskSet& tasks,
                                          PairChoice pair) {
    const auto k = highest_priority_active(snap, tasks);
    if (!k) return std::nullopt;
    return Decision{*k, pair, wcet_of(tasks[*k].wcet, pair), 0.0};
}

// Argmax of expected gain over gate-passing assignments. The NPFP^min
// default wins unless some admitted assignment strictly improves on the
// default's own expected gain; with the whole default task locked out by a
// conservative guard, a merely-equal alternative would otherwise become a
// zero-gain priority inversion.
std::optional<Decision> flex_core(const SchedulerSnapshot& snap, const TaskSet& tasks,
                                  const ConfidenceOracle& oracle, std::size_t only_task,
                                  long* lemma_eval_counter,
                                  std::vector<FeasibleAssignment>* admitted_out) {
    const auto hp = highest_priority_active(snap, tasks);
    if (!hp) return std::nullopt;

    std::vector<FeasibleAssignment> admitted =
        feasible_assignments(snap, tasks, only_task, lemma_eval_counter);
    for (FeasibleAssignment& a : admitted)
        a.delta_confidence = oracle ? oracle(a.task_index, a.pair) : 0.0;

    const FeasibleAssignment* best = nullptr;
    for (const FeasibleAssignment& a : admitted) {
        if (!best) {
            best = &a;
            continue;
        }
        if (a.delta_confidence != best->delta_confidence) {
            if (a.delta_confidence > best->delta_confidence) best = &a;
            continue;
        }
        const int ra = tasks[a.task_index].priority, rb = tasks[best->task_index].priority;
        if (ra != rb) {
            if (ra < rb) best = &a;
            continue;
        }
        if (a.budget != best->budget) {
            if (a.budget < best->budget) best = &a;
            continue;
        }
        // same task, same budget: keep the earlier pair in LL<LH<HL<HH order
    }

    Decision fallback = *fixed_pair_decide(snap, tasks, PairChoice::LL);
    fallback.delta_confidence = oracle ? oracle(fallback.task_index, fallback.pair) : 0.0;

    std::optional<Decision> result;
    const bool best_is_default = best && best->task_index == *hp;
    if (best && (best_is_default || best->delta_confidence > fallback.delta_confidence))
        result = Decision{best->task_index, best->pair, best->budget, best->delta_confidence};
    else
        result = fallback;
    if (admitted_out) *admitted_out = std::move(admitted);
    return result;
}

}  // namespace

std::optional<Decision> npfp_min_decide(const SchedulerSnapshot& snap, const TaskSet& tasks) {
    return fixed_pair_decide(snap, tasks, PairChoice::LL);
}

std::optional<Decision> npfp_flex_decide(const SchedulerSnapshot& snap, const TaskSet& tasks,
                                         const ConfidenceOracle& oracle,
                                         long* lemma_eval_counter) {
    return flex_core(snap, tasks, oracle, kAnyTask, lemma_eval_counter, nullptr);
}

std::optional<Decision> flex_npi_decide(const SchedulerSnapshot& snap, const TaskSet& tasks,
                                        const ConfidenceOracle& oracle,
                                        long* lemma_eval_counter) {
    const auto hp = highest_priority_active(snap, tasks);
    if (!hp) return std::nullopt;
    return flex_core(snap, tasks, oracle, *hp, lemma_eval_counter, nullptr);
}

namespace {

struct RunningJob {
    Job job;
    double delta{0};
    bool inverted{false};
};

class SimulationKernel {
public:
    SimulationKernel(const TaskSet& tasks, const SimOptions& options)
        : tasks_(tasks), options_(options) {
        if (options.horizon <= 0) throw std::invalid_argument("simulate: invalid horizon");
        std::vector<bool> seen(tasks.size(), false);
        for (const TaskSpec& t : tasks) {
            if (t.priority < 0 || static_cast<std::size_t>(t.priority) >= tasks.size() ||
                seen[static_cast<std::size_t>(t.priority)])
                throw std::invalid_argument("simulate: priority ranks must form a permutation");
            seen[static_cast<std::size_t>(t.priority)] = true;
        }
        if (options.scenario && options.scenario->task_objects.size() < tasks.size())
            throw std::invalid_argument("simulate: scenario does not cover all tasks");
        next_release_index_.assign(tasks.size(), 0);
        pending_.resize(tasks.size());
        tracklets_.resize(tasks.size());
        if (options.scenario)
            for (std::size_t i = 0; i < tasks.size(); ++i)
                tracklets_[i] = initial_tracklets(*options.scenario, i);
    }

    Trace run() {
        Instant t = 0;
        std::optional<Instant> idle_since = 0;

        while (true) {
            if (running_) {
                const Instant finish = running_->job.finish.value();
                release_due(finish);
                t = finish;
                complete_running(t);
                if (has_pending()) {
                    decide(t, DecisionInstant::Cause::job_completion);
                } else {
                    idle_since = t;
                }
                continue;
            }
            const auto nr = next_release();
            if (!nr) break;
            t = std::max(t, *nr);
            release_due(t);
            if (idle_since && t > *idle_since) trace_.idle.push_back({*idle_since, t});
            idle_since.reset();
            decide(t, DecisionInstant::Cause::release_into_idle);
        }

        if (idle_since && options_.horizon > *idle_since)
            trace_.idle.push_back({*idle_since, options_.horizon});
        return std::move(trace_);
    }

private:
    bool has_pending() const {
        return std::any_of(pending_.begin(), pending_.end(),
                           [](const std::deque<Job>& q) { return !q.empty(); });
    }

    std::optional<Instant> next_release() const {
        std::optional<Instant> next;
        for (std::size_t i = 0; i < tasks_.size(); ++i) {
            const Instant r = tasks_[i].phase + next_release_index_[i] * tasks_[i].period;
            if (r >= options_.horizon) continue;
            if (!next || r < *next) next = r;
        }
        return next;
    }

    void release_due(Instant t) {
        for (std::size_t i = 0; i < tasks_.size(); ++i) {
            while (true) {
                const Instant r = tasks_[i].phase + next_release_index_[i] * tasks_[i].period;
                if (r > t || r >= options_.horizon) break;
                pending_[i].push_back(release_job(tasks_[i], next_release_index_[i]));
                ++next_release_index_[i];
            }
        }
    }

    SchedulerSnapshot snapshot(Instant t) const {
        SchedulerSnapshot snap;
        snap.now = t;
        snap.tasks.resize(tasks_.size());
        for (std::size_t i = 0; i < tasks_.size(); ++i) {
            if (!pending_[i].empty()) {
                snap.tasks[i] = {true, pending_[i].front().abs_deadline};
            } else {
                snap.tasks[i] = {false,
                                 tasks_[i].phase + next_release_index_[i] * tasks_[i].period};
            }
        }
        return snap;
    }

    double decision_delta(std::size_t task_index, PairChoice pair) const {
        if (!options_.scenario) return 0.0;
        const TrackletSet& set = tracklets_[task_index];
        if (set.empty()) return 0.0;
        const RoiWindow roi = select_roi(set, options_.scenario->geometry);
        return delta_expected(set, pair, roi_membership(set, roi));
    }

    void decide(Instant t, DecisionInstant::Cause cause) {
        trace_.decisions.push_back({t, cause});
        const SchedulerSnapshot snap = snapshot(t);
        std::vector<FeasibleAssignment> admitted;
        std::optional<Decision> decision;
        long evals = 0;

        switch (options_.policy) {
            case Policy::npfp_min:
                decision = npfp_min_decide(snap, tasks_);
                break;
            case Policy::static_ll:
            case Policy::static_lh:
            case Policy::static_hl:
            case Policy::static_hh:
                decision = fixed_pair_decide(snap, tasks_, analysis_pair(options_.policy));
                break;
            case Policy::npfp_flex:
            case Policy::npfp_flex_npi: {
                std::size_t only = kAnyTask;
                if (options_.policy == Policy::npfp_flex_npi)
                    only = *highest_priority_active(snap, tasks_);
                const ConfidenceOracle oracle = [this](std::size_t k, PairChoice p) {
                    return decision_delta(k, p);
                };
                decision = flex_core(snap, tasks_, oracle, only, &evals, &admitted);
                if (options_.instrument_work) trace_.work.push_back({t, evals});
                break;
            }
        }

        if (options_.observer) options_.observer(snap, admitted);
        grant(*decision, snap, t);
    }

    void grant(const Decision& d, const SchedulerSnapshot& snap, Instant t) {
        Job job = pending_[d.task_index].front();
        pending_[d.task_index].pop_front();

        bool inverted = false;
        for (std::size_t i = 0; i < tasks_.size(); ++i)
            if (i != d.task_index && snap.tasks[i].active &&
                tasks_[i].priority < tasks_[d.task_index].priority)
                inverted = true;

        job.state = JobState::running;
        job.granted_pair = d.pair;
        job.granted_budget = d.budget;
        job.start = t;
        const Duration actual = options_.exec.sample(job.task_id, job.index, d.budget);
        job.finish = t + actual;
        running_ = RunningJob{job, d.delta_confidence, inverted};
    }

    void complete_running(Instant t) {
        Job& job = running_->job;
        const bool miss = t > job.abs_deadline;
        job.state = miss ? JobState::missed : JobState::finished;

        trace_.records.push_back({job.start.value(), t, job.task_id, job.index,
                                  job.granted_pair.value(), job.granted_budget.value(),
                                  t - job.start.value(), running_->inverted, miss,
                                  running_->delta});
        if (miss)
            trace_.misses.push_back(
                {job.task_id, job.index, job.abs_deadline, t, t - job.abs_deadline});

        if (options_.scenario) run_pipeline(job);
        running_.reset();
    }

    void run_pipeline(const Job& job) {
        const Scenario& scenario = *options_.scenario;
        const long frame = job.index;
        if (frame >= scenario.horizon_frames) return;

        std::size_t task_index = 0;
        for (std::size_t i = 0; i < tasks_.size(); ++i)
            if (tasks_[i].id == job.task_id) task_index = i;

        TrackletSet& set = tracklets_[task_index];
        const FrameOutcome outcome =
            execute_pipeline(task_index, job.granted_pair.value(), frame, scenario, set);
        apply_frame(set, outcome.updates, outcome.spawns, frame);

        ConfidenceSample sample;
        sample.task_id = job.task_id;
        sample.frame = frame;
        sample.tracklet_count = set.size();
        sample.measured = measured_confidence(set);
        const RoiWindow roi = select_roi(set, scenario.geometry);
        const std::vector<bool> in_roi = roi_membership(set, roi);
        for (PairChoice pair : kAllPairs)
            sample.predicted[pair_index(pair)] = predict_pair(set, pair, in_roi);
        sample.granted = job.granted_pair.value();
        trace_.confidence.push_back(sample);
    }

    const TaskSet& tasks_;
    const SimOptions& options_;
    std::vector<long> next_release_index_;
    std::vector<std::deque<Job>> pending_;
    std::vector<TrackletSet> tracklets_;
    std::optional<RunningJob> running_;
    Trace trace_;
};

}  // namespace

Trace simulate(const TaskSet& tasks, const SimOptions& options) {
    if (tasks.empty()) throw std::invalid_argument("simulate: empty task set");
    SimulationKernel kernel(tasks, options);
    return kernel.run();
}

const std::vector<WorkCount>& scheduler_work_counter(const Trace& trace) {
    return trace.work;
}

}  // namespace rtmot
