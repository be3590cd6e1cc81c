#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "rtmot/analysis.hpp"
#include "rtmot/task_model.hpp"
#include "rtmot/workload.hpp"

namespace rtmot {

enum class Policy : std::uint8_t {
    npfp_min,
    npfp_flex,
    npfp_flex_npi,
    static_ll,
    static_lh,
    static_hl,
    static_hh,
};

const char* to_string(Policy p);
std::optional<Policy> policy_from_string(std::string_view s);
bool policy_is_static(Policy p);

// WCET the offline analysis charges per job under this policy: the fixed
// pair for static baselines, LL for min/flex (Lemma 1 covers flex).
PairChoice analysis_pair(Policy p);

// How long a granted job actually runs. Sampling is a pure function of
// (seed, task, job index), so traces do not depend on evaluation order.
struct ExecutionTimeModel {
    enum class Mode : std::uint8_t { wcet_exact, scaled, stochastic };

    Mode mode{Mode::wcet_exact};
    double scale{1.0};         // scaled: actual = round(scale * wcet)
    double low_fraction{0.5};  // stochastic: uniform in [low_fraction*wcet, wcet]
    std::uint64_t seed{0};

    Duration sample(int task_id, long job_index, Duration wcet) const;

    // "wcet" | "scaled:<f>" | "stochastic:<lo>"
    static std::optional<ExecutionTimeModel> parse(std::string_view s);
    std::string format() const;
};

struct DecisionInstant {
    Instant time{0};
    enum class Cause : std::uint8_t { release_into_idle, job_completion } cause{};
};

struct TraceRecord {
    Instant start{0};
    Instant finish{0};
    int task_id{0};
    long job_index{0};
    PairChoice pair{PairChoice::LL};
    Duration budget{0};
    Duration actual{0};
    bool priority_inverted{false};
    bool deadline_miss{false};
    double delta_confidence{0.0};  // expected gain at grant time
};

struct MissRecord {
    int task_id{0};
    long job_index{0};
    Instant abs_deadline{0};
    Instant finish{0};
    Duration lateness{0};
};

struct IdleInterval {
    Instant begin{0};
    Instant end{0};
};

struct WorkCount {
    Instant time{0};
    long lemma_evaluations{0};
};

struct ConfidenceSample {
    int task_id{0};
    long frame{0};
    std::size_t tracklet_count{0};
    double measured{0};
    std::array<double, 4> predicted{};  // indexed by pair_index
    PairChoice granted{PairChoice::LL};
};

struct Trace {
    std::vector<DecisionInstant> decisions;
    std::vector<TraceRecord> records;
    std::vector<MissRecord> misses;
    std::vector<IdleInterval> idle;
    std::vector<WorkCount> work;  // one entry per decision under flex policies
    std::vector<ConfidenceSample> confidence;
};

// Expected confidence gain for granting (task, pair) now.
using ConfidenceOracle = std::function<double(std::size_t task_index, PairChoice pair)>;

struct Decision {
    std::size_t task_index{0};
    PairChoice pair{PairChoice::LL};
    Duration budget{0};
    double delta_confidence{0.0};
};

// Highest-priority active job at its minimum budget; nullopt when idle.
std::optional<Decision> npfp_min_decide(const SchedulerSnapshot& snap, const TaskSet& tasks);

// Feasibility-gated argmax of expected confidence gain over all active jobs
// and pairs; falls back to npfp_min_decide when nothing passes the gate.
// Ties break toward the higher-priority job, then the cheaper budget, then
// pair order LL < LH < HL < HH.
std::optional<Decision> npfp_flex_decide(const SchedulerSnapshot& snap, const TaskSet& tasks,
                                         const ConfidenceOracle& oracle,
                                         long* lemma_eval_counter = nullptr);

// As npfp_flex_decide, but only the highest-priority active job is gated.
std::optional<Decision> flex_npi_decide(const SchedulerSnapshot& snap, const TaskSet& tasks,
                                        const ConfidenceOracle& oracle,
                                        long* lemma_eval_counter = nullptr);

// Observer invoked at every decision instant of a simulation, before the
// policy commits. Admitted lists the gate-passing assignments (empty for
// non-flex policies).
using DecisionObserver = std::function<void(const SchedulerSnapshot& snap,
                                            const std::vector<FeasibleAssignment>& admitted)>;

struct SimOptions {
    Policy policy{Policy::npfp_min};
    Duration horizon{0};  // releases generated for release < horizon
    ExecutionTimeModel exec{};
    const Scenario* scenario{nullptr};  // enables the tracking pipeline
    bool instrument_work{false};
    DecisionObserver observer{};
};

// Event-driven non-preemptive uniprocessor simulation. Deterministic for
// identical (tasks, options, scenario). Jobs released before the horizon run
// to completion; a job finishing past its deadline is flagged, not aborted.
Trace simulate(const TaskSet& tasks, const SimOptions& options);

// Per-decision-instant lemma evaluation counts captured during a flex run.
const std::vector<WorkCount>& scheduler_work_counter(const Trace& trace);

}  // namespace rtmot
