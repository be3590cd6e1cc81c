#pragma once

#include <cstdint>

#include "rtmot/task_model.hpp"

namespace rtmot {

// Random task sets for the verification and fuzz suites. Periods come from a
// small-LCM pool and every duration is a quantum multiple, so the tick
// oracle accepts them and hyperperiod-bounded runs stay short.
struct TaskGenParams {
    int n_min{2};
    int n_max{5};
    double util_min{0.3};
    double util_max{1.2};
    Duration quantum{100};
    std::vector<Duration> period_pool{20000, 25000, 40000, 50000, 100000, 200000};
};

// Deterministic per seed; ranks already assigned.
TaskSet random_taskset(std::uint64_t seed, const TaskGenParams& params);

}  // namespace rtmot
