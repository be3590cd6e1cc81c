#pragma once

#include <iosfwd>

#include "rtmot/config.hpp"
#include "rtmot/trace_io.hpp"

namespace rtmot {

struct SweepCell {
    std::vector<double> fps;
    Policy policy{Policy::npfp_min};
    bool schedulable{false};
    int seeds_run{0};
    double confidence_mean{0};
    double confidence_min{0};
    double confidence_max{0};
    std::array<long, 4> pair_histogram{};  // summed over seeds
    long miss_count{0};
};

// Cartesian product of fps_sets x policies x seeds; unschedulable cells are
// analyzed but not simulated. Cells run in a worker pool and merge in grid
// order, so the output is deterministic for a given config.
std::vector<SweepCell> run_sweep(const ExperimentConfig& config, int threads = 0);

// Columns: fps_set,policy,schedulable,seeds,conf_mean,conf_min,conf_max,
//          sel_ll,sel_lh,sel_hl,sel_hh,misses
void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells);

}  // namespace rtmot
