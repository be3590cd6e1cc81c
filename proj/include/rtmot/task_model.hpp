#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rtmot/time.hpp"

namespace rtmot {

enum class Level : std::uint8_t { L, H };

// Per-frame choice of detection and association model. First letter is the
// detection level, second the association level.
enum class PairChoice : std::uint8_t { LL, LH, HL, HH };

inline constexpr std::array<PairChoice, 4> kAllPairs = {
    PairChoice::LL, PairChoice::LH, PairChoice::HL, PairChoice::HH};

constexpr Level detection_level(PairChoice p) {
    return (p == PairChoice::HL || p == PairChoice::HH) ? Level::H : Level::L;
}

constexpr Level association_level(PairChoice p) {
    return (p == PairChoice::LH || p == PairChoice::HH) ? Level::H : Level::L;
}

constexpr std::size_t pair_index(PairChoice p) {
    return static_cast<std::size_t>(p);
}

const char* to_string(PairChoice p);
std::optional<PairChoice> pair_from_string(std::string_view s);

// Decomposed worst-case execution times of one task's pipeline stages.
struct WcetProfile {
    Duration pre{0};      // RoI identification + cropping
    Duration infer_l{0};  // detector inference, low-confidence input
    Duration infer_h{0};  // detector inference, high-confidence input
    Duration as_l{0};     // IoU-only association
    Duration as_h{0};     // feature cascade + IoU association
    Duration post{0};     // tracklet confidence update

    Duration detection_cost(Level x) const {
        return pre + (x == Level::H ? infer_h : infer_l);
    }
    Duration association_cost(Level y) const {
        return (y == Level::H ? as_h : as_l) + post;
    }

    // Throws std::invalid_argument on a violated invariant
    // (negative component, as_l >= as_h, or infer_l > infer_h).
    void validate() const;

    bool operator==(const WcetProfile&) const = default;
};

Duration wcet_of(const WcetProfile& profile, PairChoice pair);

struct TaskSpec {
    int id{0};
    Duration period{0};  // implicit deadline = period
    Duration phase{0};   // release offset of job 0
    WcetProfile wcet{};
    int priority{-1};    // rank assigned by rm_assign; lower rank = higher priority
};

using TaskSet = std::vector<TaskSpec>;

// Rate-monotonic ranks: strictly shorter period means strictly higher
// priority; equal periods are ordered by ascending id. Throws on an empty
// set or duplicate ids.
TaskSet rm_assign(TaskSet tasks);

// Least common multiple of all periods. Throws std::overflow_error if it
// does not fit a Duration.
Duration hyperperiod(const TaskSet& tasks);

enum class JobState : std::uint8_t { pending, running, finished, missed };

struct Job {
    int task_id{0};
    long index{0};
    Instant release{0};
    Instant abs_deadline{0};
    JobState state{JobState::pending};
    std::optional<PairChoice> granted_pair;
    std::optional<Duration> granted_budget;
    std::optional<Instant> start;
    std::optional<Instant> finish;
};

// k-th release of the task: release = phase + k*T, deadline = release + T.
Job release_job(const TaskSpec& task, long k);

}  // namespace rtmot
