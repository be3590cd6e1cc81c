#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rtmot/confidence.hpp"

namespace rtmot {

struct FrameGeometry {
    int frame_w{1280};
    int frame_h{768};
    int roi_w{256};
    int roi_h{256};
};

struct RoiWindow {
    double x{0}, y{0};
    double w{0}, h{0};
    bool contains(double px, double py) const {
        return px >= x && px < x + w && py >= y && py < y + h;
    }
};

// Ground-truth object in the synthetic world. Trajectories are
// piecewise-linear segments in px/frame; sizes breathe sinusoidally; the
// appearance feature rotates in a fixed 2-plane so cosine similarity decays
// smoothly with frame distance.
struct TrajectorySegment {
    long start_frame{0};
    double x{0}, y{0};
    double vx{0}, vy{0};
};

struct SizeTrack {
    double w0{40}, h0{80};
    double amplitude{0};      // relative, in [0, 1)
    double period_frames{120};
    double phase{0};
};

struct FeatureTrack {
    std::vector<double> axis_u;
    std::vector<double> axis_v;
    double theta_per_frame{0};  // radians
};

struct ObjectTrack {
    int id{0};
    long appear_frame{0};
    std::vector<TrajectorySegment> segments;  // ascending start_frame, first at appear_frame
    SizeTrack size{};
    FeatureTrack feature{};
    std::vector<std::pair<long, long>> occlusions;  // [begin, end) frame ranges

    bool present_at(long frame) const { return frame >= appear_frame; }
    bool occluded_at(long frame) const;
    MotionState motion_at(long frame) const;
    AppearanceState appearance_at(long frame) const;
};

struct Scenario {
    FrameGeometry geometry{};
    long horizon_frames{0};
    std::uint64_t seed{0};
    int feature_dim{16};
    double detection_miss_rate{0};  // per-object miss probability under L detection
    std::vector<std::vector<ObjectTrack>> task_objects;  // one object list per task

    void validate() const;  // throws on inconsistent geometry or intervals
};

struct ScenarioParams {
    int n_tasks{1};
    int n_objects{6};
    long horizon_frames{600};
    double occlusion_rate{0.05};   // expected fraction of occluded frames per object
    double speed_min{0.5};         // px/frame
    double speed_max{6.0};
    int feature_dim{16};
    double feature_drift{0.15};    // radians/frame
    double detection_miss_rate{0};
    FrameGeometry geometry{};
};

// Deterministic per seed: identical (seed, params) yields identical bytes.
Scenario generate_scenario(std::uint64_t seed, const ScenarioParams& params);

// Candidate windows tile the frame with stride equal to the RoI size. Picks
// the window with the lowest mean confidence over the tracklets positioned
// inside it; ties by smallest (x, y); tracklet-free windows never win.
// Returns the origin window when no window holds a tracklet.
RoiWindow select_roi(const TrackletSet& set, const FrameGeometry& geometry);

std::vector<bool> roi_membership(const TrackletSet& set, const RoiWindow& roi);

struct FrameOutcome {
    long frame{0};
    RoiWindow roi{};  // full frame under H detection
    std::vector<TrackletUpdate> updates;
    std::vector<TrackletSpawn> spawns;
};

// One tracking-by-detection step for a task's frame: detection covers the
// whole frame under D^H, only the selected RoI under D^L; a covered,
// non-occluded object is matched (CG1 under A^H, CG2 under A^L) and anything
// else decays as CG3. Covered new objects spawn tracklets.
FrameOutcome execute_pipeline(std::size_t task_index, PairChoice pair, long frame,
                              const Scenario& scenario, const TrackletSet& set);

// Tracks for the objects already on screen when the simulation window
// starts. The scenario is an excerpt of a running tracker, so these begin
// fully confident; objects appearing later go through the spawn path.
TrackletSet initial_tracklets(const Scenario& scenario, std::size_t task_index);

std::string scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const std::string& text);

}  // namespace rtmot
