#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <string>

#include "rtmot/scheduler.hpp"

namespace rtmot {

struct RunMetrics {
    long miss_count{0};
    std::array<long, 4> pair_histogram{};  // indexed by pair_index
    std::map<int, double> mean_confidence;  // task id -> time-averaged measured score
    double confidence_proxy{0};  // mean of per-task means; 0 without a scenario
    long records{0};
    long decision_instants{0};
};

RunMetrics compute_metrics(const Trace& trace);

// Columns: t_us,task,job_idx,pair,budget_us,actual_us,inverted,miss
void write_trace_csv(std::ostream& out, const Trace& trace);

// Columns: task,frame,tracklets,measured,pred_ll,pred_lh,pred_hl,pred_hh,granted
void write_confidence_csv(std::ostream& out, const Trace& trace);

std::string metrics_to_json(const RunMetrics& metrics, Policy policy, std::uint64_t seed);

}  // namespace rtmot
