#pragma once

#include <optional>
#include <vector>

#include "rtmot/analysis.hpp"
#include "rtmot/task_model.hpp"

namespace rtmot {

// One-shot synthetic job used to realize the critical-instant blocking of
// Lemma 1's proof. Always scheduled below every real task.
struct BlockingJob {
    Instant release{0};
    Duration cost{0};
};

struct TickSimConfig {
    Duration quantum{100};
    std::vector<Instant> offsets;  // per task; empty -> task phases
    std::optional<BlockingJob> blocking;
    Duration horizon{0};  // 0 -> 2*hyperperiod + max period + max offset
};

struct TickMiss {
    int task_id{0};
    long job_index{0};
    Duration lateness{0};
};

struct TickSimReport {
    std::vector<TickMiss> misses;
    Duration horizon{0};
};

// Exact NPFP^min schedule at quantum resolution. Every duration in play
// (periods, offsets, minimum WCETs, blocking) must be a quantum multiple;
// anything else is rejected.
TickSimReport tick_simulate_min(const TaskSet& tasks, const TickSimConfig& config);

// Simulates granting task k's active job a budget of c_k at snap.now, with
// every later job scheduled by NPFP^min at its minimum WCET. True iff no
// deadline is missed up to the first fully-idle instant plus one
// hyperperiod (hard cap: now + 3*hyperperiod + max period, for never-idle
// sets). horizon_cap, when positive, overrides the cap.
bool exhaustive_future_check(const TaskSet& tasks, const SchedulerSnapshot& snap,
                             std::size_t task_k, Duration c_k, Duration horizon_cap = 0);

}  // namespace rtmot
