#include "rtmot/trace_io.hpp"

#include <map>
#include <ostream>

#include <json.hpp>

namespace rtmot {

RunMetrics compute_metrics(const Trace& trace) {
    RunMetrics m;
    m.miss_count = static_cast<long>(trace.misses.size());
    m.records = static_cast<long>(trace.records.size());
    m.decision_instants = static_cast<long>(trace.decisions.size());
    for (const TraceRecord& r : trace.records) ++m.pair_histogram[pair_index(r.pair)];

    std::map<int, std::pair<double, long>> acc;  // task -> (sum, frames)
    for (const ConfidenceSample& s : trace.confidence) {
        auto& [sum, count] = acc[s.task_id];
        sum += s.measured;
        ++count;
    }
    double proxy = 0;
    for (const auto& [task, sc] : acc) {
        const double mean = sc.second ? sc.first / static_cast<double>(sc.second) : 0.0;
        m.mean_confidence[task] = mean;
        proxy += mean;
    }
    if (!acc.empty()) m.confidence_proxy = proxy / static_cast<double>(acc.size());
    return m;
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
    out << "t_us,task,job_idx,pair,budget_us,actual_us,inverted,miss\n";
    for (const TraceRecord& r : trace.records) {
        out << r.start << ',' << r.task_id << ',' << r.job_index << ',' << to_string(r.pair)
            << ',' << r.budget << ',' << r.actual << ',' << (r.priority_inverted ? 1 : 0) << ','
            << (r.deadline_miss ? 1 : 0) << '\n';
    }
}

void write_confidence_csv(std::ostream& out, const Trace& trace) {
    out << "task,frame,tracklets,measured,pred_ll,pred_lh,pred_hl,pred_hh,granted\n";
    for (const ConfidenceSample& s : trace.confidence) {
        out << s.task_id << ',' << s.frame << ',' << s.tracklet_count << ',' << s.measured;
        for (PairChoice pair : kAllPairs) out << ',' << s.predicted[pair_index(pair)];
        out << ',' << to_string(s.granted) << '\n';
    }
}

std::string metrics_to_json(const RunMetrics& m, Policy policy, std::uint64_t seed) {
    nlohmann::json j;
    j["policy"] = to_string(policy);
    j["seed"] = seed;
    j["miss_count"] = m.miss_count;
    j["records"] = m.records;
    j["decision_instants"] = m.decision_instants;
    nlohmann::json hist;
    for (PairChoice pair : kAllPairs) hist[to_string(pair)] = m.pair_histogram[pair_index(pair)];
    j["pair_histogram"] = hist;
    nlohmann::json conf;
    for (const auto& [task, mean] : m.mean_confidence) conf[std::to_string(task)] = mean;
    j["mean_confidence_per_task"] = conf;
    j["confidence_proxy"] = m.confidence_proxy;
    return j.dump(2);
}

}  // namespace rtmot
