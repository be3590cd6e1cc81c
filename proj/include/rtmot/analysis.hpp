#pragma once

#include <cstddef>
#include <vector>

#include "rtmot/task_model.hpp"

namespace rtmot {

struct RtaTaskResult {
    int task_id{0};
    Duration response_time{0};  // last fixpoint candidate when unschedulable
    bool schedulable{false};
    int iterations{0};
};

struct RtaResult {
    std::vector<RtaTaskResult> tasks;  // aligned with the input task set
    bool schedulable{false};
    const RtaTaskResult& for_task(int task_id) const;
};

// Worst-case response times under non-preemptive fixed priority with every
// job running its minimum (LL) budget. Iterates
//   R(x+1) = C_i + max_{LP(i)} C_j + sum_{h in HP(i)} ceil(R(x)/T_h) * C_h
// from R(0) = C_i + max_{LP(i)} C_j and aborts once the candidate exceeds
// T_i. Requires assigned priority ranks; throws on an empty set.
RtaResult rta_min(const TaskSet& tasks);

// Same analysis with every job pinned to a fixed pair's WCET; used for the
// static baselines.
RtaResult rta_fixed_pair(const TaskSet& tasks, PairChoice pair);

// Per-task view of the system at a decision instant t0.
//
// For an active task, next_event is the active job's absolute deadline
// (equivalently its release + T, the next release). For an inactive task it
// is the next scheduled release, strictly after t0 at decision instants.
struct TaskSnapshot {
    bool active{false};      // Z_i(t0)
    Instant next_event{0};   // r_i(t0)
};

struct SchedulerSnapshot {
    Instant now{0};
    std::vector<TaskSnapshot> tasks;  // aligned with the task set
};

// Lemma guards. Indices address tasks by position in the task set; C_k is
// the candidate budget for task k's active job. All three throw
// std::logic_error on violated preconditions.

// J_k itself meets its deadline when granted C_k at t0: C_k <= r_k(t0) - t0.
// Requires Z_k(t0) = T.
bool check_self(Duration c_k, const SchedulerSnapshot& snap, const TaskSet& tasks,
                std::size_t k);

// The earliest job of active task j executed after J_k stays schedulable
// under a pure minimum-budget future. Requires Z_j(t0) = T; j may equal k,
// in which case the guarded job is tau_k's next release and the deadline
// window extends one period past r_k(t0).
bool check_active(std::size_t j, std::size_t k, Duration c_k,
                  const SchedulerSnapshot& snap, const TaskSet& tasks);

// Same guard for a task with no active job at t0 (deadline window ends at
// r_j(t0) + T_j). Requires Z_j(t0) = F and j != k.
bool check_inactive(std::size_t j, std::size_t k, Duration c_k,
                    const SchedulerSnapshot& snap, const TaskSet& tasks);

struct FeasibleAssignment {
    std::size_t task_index{0};
    PairChoice pair{PairChoice::LL};
    Duration budget{0};
    double delta_confidence{0.0};  // filled in by the scheduler
};

constexpr std::size_t kAnyTask = static_cast<std::size_t>(-1);

// All (active job, pair) combinations that pass the full gate: check_self,
// check_active for every active task (including k itself), check_inactive
// for every inactive task. Restricting only_task limits the enumeration to
// one candidate job (used by the no-priority-inversion policy variant).
//
// lemma_eval_counter, when given, is incremented once per guarded-task
// evaluation of check_active/check_inactive (the O(n)-cost checks).
std::vector<FeasibleAssignment> feasible_assignments(
    const SchedulerSnapshot& snap, const TaskSet& tasks,
    std::size_t only_task = kAnyTask, long* lemma_eval_counter = nullptr);

}  // namespace rtmot
