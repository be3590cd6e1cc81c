#include "rtmot/confidence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace rtmot {

namespace {

constexpr double kSaturation = 1e3;  // sigmoid argument for a degenerate velocity ratio

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// (prev - cur) / (prev + cur) with the degenerate zero-sum cases resolved:
// both zero -> 0, otherwise a saturating value carrying the sign of the
// difference.
double velocity_ratio(double prev, double cur) {
    const double sum = prev + cur;
    if (sum == 0.0) {
        if (prev == cur) return 0.0;
        return prev > cur ? kSaturation : -kSaturation;
    }
    return (prev - cur) / sum;
}

}  // namespace

double lambda_size(const MotionState& prev, const MotionState& cur) {
    if (prev.w <= 0 || prev.h <= 0 || cur.w <= 0 || cur.h <= 0)
        throw std::invalid_argument("lambda_size: sizes must be positive");
    const double hr = (prev.h - cur.h) / (prev.h + cur.h);
    const double wr = (prev.w - cur.w) / (prev.w + cur.w);
    return clamp01(-0.25 * (hr + wr) + 0.5);
}

double lambda_velocity(const MotionState& prev, const MotionState& cur) {
    const double z = velocity_ratio(prev.vx, cur.vx) + velocity_ratio(prev.vy, cur.vy);
    return clamp01(1.0 - 2.0 * std::abs(sigmoid(z) - 0.5));
}

double lambda_appearance(const AppearanceState& prev, const AppearanceState& cur) {
    if (prev.size() != cur.size() || prev.empty())
        throw std::invalid_argument("lambda_appearance: dimension mismatch");
    double dot = 0, np = 0, nc = 0;
    for (std::size_t i = 0; i < prev.size(); ++i) {
        dot += prev[i] * cur[i];
        np += prev[i] * prev[i];
        nc += cur[i] * cur[i];
    }
    if (np == 0 || nc == 0)
        throw std::invalid_argument("lambda_appearance: zero-norm feature vector");
    return clamp01(dot / (std::sqrt(np) * std::sqrt(nc)));
}

double Tracklet::motion_decay() const {
    return lambda_size(motion_ref, motion) * lambda_velocity(motion_ref, motion);
}

double Tracklet::appearance_decay() const {
    return lambda_appearance(appearance_ref, appearance);
}

void update_tracklet(Tracklet& t, MatchCategory category, long frame,
                     const MotionState* motion, const AppearanceState* appearance) {
    switch (category) {
        case MatchCategory::CG1:
            if (!motion || !appearance)
                throw std::invalid_argument("update_tracklet: CG1 requires motion and appearance");
            t.motion_confidence = 1.0;
            t.appearance_confidence = 1.0;
            t.motion_ref = t.motion;
            t.motion_ref_frame = t.motion_obs_frame;
            t.motion = *motion;
            t.motion_obs_frame = frame;
            t.appearance_ref = t.appearance;
            t.appearance_ref_frame = t.appearance_obs_frame;
            t.appearance = *appearance;
            t.appearance_obs_frame = frame;
            t.last_seen_frame = frame;
            break;
        case MatchCategory::CG2: {
            if (!motion) throw std::invalid_argument("update_tracklet: CG2 requires motion");
            // Appearance decays at the drift rate between the two most recent
            // feature extractions; the IoU match refreshes motion only.
            const double da = t.appearance_decay();
            t.appearance_confidence = std::max(t.appearance_confidence * da, 0.0);
            t.motion_confidence = 1.0;
            t.motion_ref = t.motion;
            t.motion_ref_frame = t.motion_obs_frame;
            t.motion = *motion;
            t.motion_obs_frame = frame;
            t.last_seen_frame = frame;
            break;
        }
        case MatchCategory::CG3: {
            const double dm = t.motion_decay();
            const double da = t.appearance_decay();
            t.motion_confidence = std::max(t.motion_confidence * dm, 0.0);
            t.appearance_confidence = std::max(t.appearance_confidence * da, 0.0);
            // Coast the position estimate; size, velocity and appearance keep
            // their last known values.
            t.motion.x += t.motion.vx;
            t.motion.y += t.motion.vy;
            break;
        }
    }
}

double measured_confidence(const TrackletSet& set) {
    if (set.empty()) return 0.0;
    double sum = 0;
    for (const Tracklet& t : set) sum += t.confidence();
    return sum / static_cast<double>(set.size());
}

double predicted_tracklet_confidence(const Tracklet& t, MatchCategory category) {
    switch (category) {
        case MatchCategory::CG1:
            return 1.0;
        case MatchCategory::CG2:
            return std::max(t.appearance_confidence * t.appearance_decay(), 0.0);
        case MatchCategory::CG3:
            return std::max(t.motion_confidence * t.motion_decay(), 0.0) *
                   std::max(t.appearance_confidence * t.appearance_decay(), 0.0);
    }
    return 0.0;
}

double predict_pair(const TrackletSet& set, PairChoice pair, const std::vector<bool>& in_roi) {
    if (set.empty()) return 0.0;
    const bool partial = detection_level(pair) == Level::L;
    if (partial && in_roi.size() != set.size())
        throw std::invalid_argument("predict_pair: RoI membership must cover the tracklet set");
    const MatchCategory matched_cat =
        association_level(pair) == Level::H ? MatchCategory::CG1 : MatchCategory::CG2;

    double sum = 0;
    for (std::size_t i = 0; i < set.size(); ++i) {
        const MatchCategory cat =
            (partial && !in_roi[i]) ? MatchCategory::CG3 : matched_cat;
        sum += predicted_tracklet_confidence(set[i], cat);
    }
    return sum / static_cast<double>(set.size());
}

double delta_expected(const TrackletSet& set, PairChoice pair, const std::vector<bool>& in_roi) {
    return predict_pair(set, pair, in_roi) - measured_confidence(set);
}

MatchCategory classify_outcome(const AssociationResult& result) {
    if (!result.matched) return MatchCategory::CG3;
    return result.level == Level::H ? MatchCategory::CG1 : MatchCategory::CG2;
}

void apply_frame(TrackletSet& set, std::span<const TrackletUpdate> updates,
                 std::span<const TrackletSpawn> spawns, long frame) {
    auto find = [&](int id) -> Tracklet* {
        for (Tracklet& t : set)
            if (t.id == id) return &t;
        return nullptr;
    };

    std::unordered_set<int> touched;
    for (const TrackletUpdate& u : updates) {
        Tracklet* t = find(u.tracklet_id);
        if (!t) throw std::invalid_argument("apply_frame: update for unknown tracklet");
        if (!touched.insert(u.tracklet_id).second)
            throw std::invalid_argument("apply_frame: duplicate update for tracklet");
        update_tracklet(*t, u.category,
                        frame,
                        u.motion ? &*u.motion : nullptr,
                        u.appearance ? &*u.appearance : nullptr);
    }

    for (const TrackletSpawn& s : spawns) {
        if (find(s.id)) throw std::invalid_argument("apply_frame: spawn id already live");
        Tracklet t;
        t.id = s.id;
        t.start_frame = frame;
        t.last_seen_frame = frame;
        t.motion = s.motion;
        t.appearance = s.appearance;
        t.motion_ref = s.motion;
        t.appearance_ref = s.appearance;
        t.motion_obs_frame = frame;
        t.appearance_obs_frame = frame;
        t.motion_ref_frame = frame;
        t.appearance_ref_frame = frame;
        set.push_back(std::move(t));
    }

    for (Tracklet& t : set)
        t.low_confidence_streak = t.confidence() < kRetireConfidence
                                      ? t.low_confidence_streak + 1
                                      : 0;
    std::erase_if(set, [](const Tracklet& t) {
        return t.low_confidence_streak >= kRetireFrames;
    });
}

}  // namespace rtmot
