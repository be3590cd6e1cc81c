#include "rtmot/task_model.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace rtmot {

const char* to_string(PairChoice p) {
    switch (p) {
        case PairChoice::LL: return "LL";
        case PairChoice::LH: return "LH";
        case PairChoice::HL: return "HL";
        case PairChoice::HH: return "HH";
    }
    return "??";
}

std::optional<PairChoice> pair_from_string(std::string_view s) {
    if (s == "LL" || s == "ll") return PairChoice::LL;
    if (s == "LH" || s == "lh") return PairChoice::LH;
    if (s == "HL" || s == "hl") return PairChoice::HL;
    if (s == "HH" || s == "hh") return PairChoice::HH;
    return std::nullopt;
}

void WcetProfile::validate() const {
    for (Duration c : {pre, infer_l, infer_h, as_l, as_h, post}) {
        if (c < 0) throw std::invalid_argument("wcet component must be non-negative");
    }
    if (!(as_l < as_h)) throw std::invalid_argument("wcet requires as_l < as_h");
    if (infer_l > infer_h) throw std::invalid_argument("wcet requires infer_l <= infer_h");
}

Duration wcet_of(const WcetProfile& profile, PairChoice pair) {
    return profile.detection_cost(detection_level(pair)) +
           profile.association_cost(association_level(pair));
}

TaskSet rm_assign(TaskSet tasks) {
    if (tasks.empty()) throw std::invalid_argument("rm_assign: empty task set");
    std::set<int> ids;
    for (const TaskSpec& t : tasks) {
        if (t.period <= 0) throw std::invalid_argument("rm_assign: period must be positive");
        if (t.phase < 0) throw std::invalid_argument("rm_assign: phase must be non-negative");
        if (!ids.insert(t.id).second)
            throw std::invalid_argument("rm_assign: duplicate task id " + std::to_string(t.id));
    }
    std::vector<std::size_t> order(tasks.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (tasks[a].period != tasks[b].period) return tasks[a].period < tasks[b].period;
        return tasks[a].id < tasks[b].id;
    });
    for (std::size_t rank = 0; rank < order.size(); ++rank)
        tasks[order[rank]].priority = static_cast<int>(rank);
    return tasks;
}

Duration hyperperiod(const TaskSet& tasks) {
    if (tasks.empty()) throw std::invalid_argument("hyperperiod: empty task set");
    Duration h = 1;
    for (const TaskSpec& t : tasks) {
        const Duration g = std::gcd(h, t.period);
        const Duration q = t.period / g;
        if (h > std::numeric_limits<Duration>::max() / q)
            throw std::overflow_error("hyperperiod overflow");
        h *= q;
    }
    return h;
}

Job release_job(const TaskSpec& task, long k) {
    if (k < 0) throw std::invalid_argument("release_job: negative index");
    Job job;
    job.task_id = task.id;
    job.index = k;
    job.release = task.phase + static_cast<Instant>(k) * task.period;
    job.abs_deadline = job.release + task.period;
    return job;
}

}  // namespace rtmot
