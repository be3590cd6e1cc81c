#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rtmot/taskgen.hpp"
#include "rtmot/workload.hpp"

namespace rtmot {

// Cross-validation suites pitting the analytical results against the
// brute-force oracles. Both return a report; any entry in `failures` is a
// disagreement between analysis and oracle, i.e. a bug in one of the two.

struct RtaVsTickOptions {
    int sets{1000};
    std::uint64_t seed{1};
    TaskGenParams gen{};
};

struct RtaVsTickReport {
    int sets_tested{0};
    int schedulable_sets{0};
    long tick_runs{0};
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

// For every set rta_min declares schedulable, runs the tick oracle under a
// plain synchronous release and under each task's critical-instant pattern
// (synchronous release one quantum after a maximal lower-priority blocking
// job). In blocking runs only tasks at or above the analyzed priority are
// asserted miss-free.
RtaVsTickReport verify_rta_vs_tick(const RtaVsTickOptions& options);

struct GateVsOracleOptions {
    long min_grants{10000};
    std::uint64_t seed{1};
    TaskGenParams gen{};
    bool with_scenario{true};
};

struct GateVsOracleReport {
    long grants_checked{0};
    long decision_instants{0};
    int sets_used{0};
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

// Runs NPFP^flex on random offline-schedulable sets with a stochastic
// execution model; every (job, pair) the online gate admits at any decision
// instant must pass exhaustive_future_check.
GateVsOracleReport verify_gate_vs_oracle(const GateVsOracleOptions& options);

}  // namespace rtmot
