#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rtmot/task_model.hpp"

namespace rtmot {

// Motion state of one tracked object: position and size in pixels, velocity
// in pixels per frame.
struct MotionState {
    double x{0}, y{0};
    double w{0}, h{0};
    double vx{0}, vy{0};
    double vw{0}, vh{0};
};

using AppearanceState = std::vector<double>;

enum class MatchCategory : std::uint8_t { CG1, CG2, CG3 };

// Size-variation score in [0,1]; 0.5 when sizes are unchanged, toward 0 for
// shrinking, toward 1 for growing. Throws on non-positive sizes.
double lambda_size(const MotionState& prev, const MotionState& cur);

// Velocity-variation score in [0,1]; 1 when velocities are unchanged, toward
// 0 under strong acceleration or deceleration. A zero-sum denominator with
// equal velocities contributes 0; with differing velocities it saturates the
// sigmoid.
double lambda_velocity(const MotionState& prev, const MotionState& cur);

// Cosine similarity clamped to [0,1]. Throws on a zero-norm vector.
double lambda_appearance(const AppearanceState& prev, const AppearanceState& cur);

struct Tracklet {
    int id{0};
    long start_frame{0};
    long last_seen_frame{0};  // last frame with a matched detection

    double motion_confidence{1.0};
    double appearance_confidence{1.0};

    // Latest observed states. Unmatched frames coast the position by the
    // stored velocity; size, velocity and appearance keep their last values.
    MotionState motion{};
    AppearanceState appearance{};

    // The observation before the latest one (strictly older: the decay
    // factors measure the variation between the two most recent
    // observations). Motion refreshes on CG1 and CG2, appearance on CG1.
    MotionState motion_ref{};
    AppearanceState appearance_ref{};

    long motion_obs_frame{0};       // frame of the latest motion observation
    long appearance_obs_frame{0};
    long motion_ref_frame{0};       // frame of the previous observation
    long appearance_ref_frame{0};

    int low_confidence_streak{0};

    double confidence() const { return motion_confidence * appearance_confidence; }

    // Decay factors a CG2/CG3 update at the next frame would apply, from the
    // current and reference states.
    double motion_decay() const;
    double appearance_decay() const;
};

using TrackletSet = std::vector<Tracklet>;

// Tracklets whose confidence stays below kRetireConfidence for
// kRetireFrames consecutive frames are dropped.
inline constexpr double kRetireConfidence = 0.01;
inline constexpr int kRetireFrames = 30;

// Applies the per-category confidence update for frame t. CG1 needs motion
// and appearance observations, CG2 needs motion; both throw without one.
void update_tracklet(Tracklet& t, MatchCategory category, long frame,
                     const MotionState* motion, const AppearanceState* appearance);

// Mean of motion*appearance confidence over the set; 0 when empty.
double measured_confidence(const TrackletSet& set);

// Hypothetical confidence of one tracklet after an update of the given
// category, without mutating it.
double predicted_tracklet_confidence(const Tracklet& t, MatchCategory category);

// Expected set confidence one frame ahead for a pair choice. in_roi must
// align with the set when the detection level is L (ignored for H):
//   (H,*): every tracklet matched -> CG1 under A^H, CG2 under A^L;
//   (L,*): in-RoI tracklets matched, the rest CG3.
double predict_pair(const TrackletSet& set, PairChoice pair, const std::vector<bool>& in_roi);

// predict_pair minus measured_confidence; may be negative.
double delta_expected(const TrackletSet& set, PairChoice pair, const std::vector<bool>& in_roi);

struct AssociationResult {
    bool matched{false};
    Level level{Level::L};  // association level that produced the match
};

// CG1 for feature-cascade matches, CG2 for IoU-only matches, CG3 otherwise.
MatchCategory classify_outcome(const AssociationResult& result);

// One tracklet's outcome for a frame, as produced by the workload pipeline.
struct TrackletUpdate {
    int tracklet_id{0};
    MatchCategory category{MatchCategory::CG3};
    std::optional<MotionState> motion;
    std::optional<AppearanceState> appearance;
};

struct TrackletSpawn {
    int id{0};
    MotionState motion{};
    AppearanceState appearance{};
};

// Applies a frame's updates and spawns, then retires stale tracklets.
// Updates must reference existing ids; spawns must not collide with live ids.
void apply_frame(TrackletSet& set, std::span<const TrackletUpdate> updates,
                 std::span<const TrackletSpawn> spawns, long frame);

}  // namespace rtmot
