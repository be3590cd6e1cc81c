#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rtmot/scheduler.hpp"
#include "rtmot/task_model.hpp"
#include "rtmot/workload.hpp"

namespace rtmot {

// Thrown for malformed configuration; the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exact decimal-milliseconds to integer microseconds; rejects sub-microsecond
// precision.
Duration ms_to_us(double ms);

// period = round(1e6 / fps) microseconds.
Duration fps_to_period(double fps);

struct ExperimentConfig {
    TaskSet tasks;  // RM ranks assigned
    std::vector<Policy> policies{Policy::npfp_min};
    std::uint64_t seed{1};
    Duration horizon{0};  // 0 -> 3 * hyperperiod
    ExecutionTimeModel exec{};
    std::optional<ScenarioParams> scenario_params;
    std::optional<Scenario> scenario;  // replay file, wins over params
    std::filesystem::path output_dir{"."};

    // sweep grid
    std::vector<std::vector<double>> fps_sets;
    std::optional<WcetProfile> sweep_wcet;  // shared profile for sweep cells
    int sweep_seeds{1};

    Duration effective_horizon() const;
};

// Parses the JSON config; environment variable RTMOT_SEED, when set,
// overrides the seed. Throws ConfigError.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& text);

WcetProfile wcet_profile_from_ms(double pre, double infer_l, double infer_h, double as_l,
                                 double as_h, double post);

// Task set for one sweep cell: FPS list with a shared WCET profile, ids 1..n.
TaskSet taskset_from_fps(const std::vector<double>& fps, const WcetProfile& wcet);

}  // namespace rtmot
