#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "rtmot/workload.hpp"

using namespace rtmot;

namespace {

ScenarioParams small_params(int n_tasks = 1, int n_objects = 5) {
    ScenarioParams p;
    p.n_tasks = n_tasks;
    p.n_objects = n_objects;
    p.horizon_frames = 200;
    p.occlusion_rate = 0.0;
    p.feature_dim = 8;
    return p;
}

Tracklet tracklet_at(int id, double x, double y, double conf = 1.0) {
    Tracklet t;
    t.id = id;
    t.motion.x = x;
    t.motion.y = y;
    t.motion.w = 40;
    t.motion.h = 80;
    t.motion_confidence = conf;
    t.appearance_confidence = 1.0;
    t.motion_ref = t.motion;
    t.appearance = {1, 0};
    t.appearance_ref = {1, 0};
    return t;
}

// Drives the pipeline plus confidence updates for a number of frames.
void step_frames(const Scenario& scenario, std::size_t task, PairChoice pair, long frames,
                 TrackletSet& set) {
    for (long f = 0; f < frames; ++f) {
        const FrameOutcome out = execute_pipeline(task, pair, f, scenario, set);
        apply_frame(set, out.updates, out.spawns, f);
    }
}

}  // namespace

TEST_CASE("select_roi picks the lowest-confidence window") {
    FrameGeometry g;  // 1280x768 with 256x256 windows -> 5x3 grid
    TrackletSet set;
    set.push_back(tracklet_at(1, 100, 100, 0.9));
    set.push_back(tracklet_at(2, 600, 300, 0.4));
    const RoiWindow roi = select_roi(set, g);
    CHECK(roi.x == 512);
    CHECK(roi.y == 256);

    // All tracklets in one window.
    TrackletSet clustered;
    clustered.push_back(tracklet_at(1, 300, 600, 0.8));
    clustered.push_back(tracklet_at(2, 310, 610, 0.7));
    const RoiWindow only = select_roi(clustered, g);
    CHECK(only.x == 256);
    CHECK(only.y == 512);

    CHECK(select_roi(TrackletSet{}, g).x == 0);
    CHECK(select_roi(TrackletSet{}, g).y == 0);
}

TEST_CASE("select_roi breaks ties toward the smallest coordinates") {
    FrameGeometry g;
    TrackletSet set;
    set.push_back(tracklet_at(1, 300, 100, 0.5));   // window (1,0)
    set.push_back(tracklet_at(2, 1000, 700, 0.5));  // window (3,2)
    const RoiWindow roi = select_roi(set, g);
    CHECK(roi.x == 256);
    CHECK(roi.y == 0);
}

TEST_CASE("generated scenarios are deterministic per seed") {
    const ScenarioParams p = small_params(2, 4);
    const Scenario a = generate_scenario(99, p);
    const Scenario b = generate_scenario(99, p);
    const Scenario c = generate_scenario(100, p);
    CHECK(scenario_to_json(a) == scenario_to_json(b));
    CHECK(scenario_to_json(a) != scenario_to_json(c));
}

TEST_CASE("scenario JSON round trip") {
    ScenarioParams p = small_params(2, 3);
    p.occlusion_rate = 0.1;
    const Scenario a = generate_scenario(7, p);
    const Scenario b = scenario_from_json(scenario_to_json(a));
    CHECK(scenario_to_json(a) == scenario_to_json(b));
}

TEST_CASE("pair HH with no occlusion matches every tracklet as CG1") {
    const Scenario s = generate_scenario(3, small_params());
    TrackletSet set;
    step_frames(s, 0, PairChoice::HH, 1, set);  // spawn everything visible
    const FrameOutcome out = execute_pipeline(0, PairChoice::HH, 1, s, set);
    CHECK(!out.updates.empty());
    for (const TrackletUpdate& u : out.updates) CHECK(u.category == MatchCategory::CG1);
}

TEST_CASE("HH with no occlusion keeps measured confidence at 1") {
    const Scenario s = generate_scenario(12, small_params(1, 6));
    TrackletSet set;
    for (long f = 0; f < 150; ++f) {
        const FrameOutcome out = execute_pipeline(0, PairChoice::HH, f, s, set);
        apply_frame(set, out.updates, out.spawns, f);
        if (!set.empty()) CHECK(measured_confidence(set) == doctest::Approx(1.0));
    }
    CHECK(set.size() == 6);
}

TEST_CASE("low detection never matches outside the RoI") {
    const Scenario s = generate_scenario(21, small_params(1, 8));
    TrackletSet set;
    for (long f = 0; f < 120; ++f) {
        const FrameOutcome out = execute_pipeline(0, PairChoice::LL, f, s, set);
        for (const TrackletUpdate& u : out.updates) {
            if (u.category == MatchCategory::CG3) continue;
            REQUIRE(u.motion.has_value());
            CHECK(out.roi.contains(u.motion->x, u.motion->y));
        }
        for (const TrackletSpawn& sp : out.spawns)
            CHECK(out.roi.contains(sp.motion.x, sp.motion.y));
        apply_frame(set, out.updates, out.spawns, f);
    }
}

TEST_CASE("out-of-RoI tracklets decay as CG3 under low detection") {
    const Scenario s = generate_scenario(8, small_params(1, 6));
    TrackletSet set;
    step_frames(s, 0, PairChoice::HH, 2, set);  // establish tracklets everywhere
    REQUIRE(set.size() >= 2);
    const FrameOutcome out = execute_pipeline(0, PairChoice::LL, 2, s, set);
    bool saw_cg3 = false;
    for (const TrackletUpdate& u : out.updates)
        if (u.category == MatchCategory::CG3) saw_cg3 = true;
    CHECK(saw_cg3);  // six objects spread over a 5x3 grid cannot share one window
}

TEST_CASE("occluded objects are never matched regardless of pair") {
    ScenarioParams p = small_params(1, 4);
    p.occlusion_rate = 0.5;
    const Scenario s = generate_scenario(5, p);

    // Pick an object and one of its occlusion intervals.
    const ObjectTrack* occluded = nullptr;
    for (const ObjectTrack& o : s.task_objects[0])
        if (!o.occlusions.empty() && o.appear_frame == 0) occluded = &o;
    REQUIRE(occluded != nullptr);
    const long frame = occluded->occlusions.front().first;

    TrackletSet set;
    step_frames(s, 0, PairChoice::HH, 1, set);
    for (PairChoice pair : kAllPairs) {
        const FrameOutcome out = execute_pipeline(0, pair, frame, s, set);
        for (const TrackletUpdate& u : out.updates)
            if (u.tracklet_id == occluded->id) CHECK(u.category == MatchCategory::CG3);
        for (const TrackletSpawn& sp : out.spawns) CHECK(sp.id != occluded->id);
    }
}

TEST_CASE("empty object list produces empty outcomes") {
    const Scenario s = generate_scenario(4, small_params(1, 0));
    TrackletSet set;
    const FrameOutcome out = execute_pipeline(0, PairChoice::HH, 0, s, set);
    CHECK(out.updates.empty());
    CHECK(out.spawns.empty());
}

TEST_CASE("deterministic replay of outcomes") {
    const Scenario s = generate_scenario(31, small_params(1, 5));
    TrackletSet a, b;
    for (long f = 0; f < 60; ++f) {
        const PairChoice pair = (f % 3 == 0) ? PairChoice::LL : PairChoice::HH;
        const FrameOutcome oa = execute_pipeline(0, pair, f, s, a);
        const FrameOutcome ob = execute_pipeline(0, pair, f, s, b);
        REQUIRE(oa.updates.size() == ob.updates.size());
        for (std::size_t i = 0; i < oa.updates.size(); ++i) {
            CHECK(oa.updates[i].tracklet_id == ob.updates[i].tracklet_id);
            CHECK(oa.updates[i].category == ob.updates[i].category);
        }
        REQUIRE(oa.spawns.size() == ob.spawns.size());
        apply_frame(a, oa.updates, oa.spawns, f);
        apply_frame(b, ob.updates, ob.spawns, f);
    }
}

TEST_CASE("scenario validation rejects bad geometry and intervals") {
    Scenario s = generate_scenario(2, small_params());
    s.geometry.roi_w = 300;  // does not tile 1280
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);

    Scenario s2 = generate_scenario(2, small_params());
    REQUIRE(!s2.task_objects[0].empty());
    s2.task_objects[0][0].occlusions.push_back({-1, 5});
    CHECK_THROWS_AS(s2.validate(), std::invalid_argument);

    ScenarioParams bad;
    bad.n_tasks = 0;
    CHECK_THROWS_AS(generate_scenario(1, bad), std::invalid_argument);
}

TEST_CASE("detection miss noise only affects low detection") {
    ScenarioParams p = small_params(1, 6);
    p.detection_miss_rate = 0.5;
    const Scenario s = generate_scenario(17, p);
    TrackletSet set;
    step_frames(s, 0, PairChoice::HH, 2, set);
    REQUIRE(set.size() >= 4);

    // Under H detection everything present is still matched.
    const FrameOutcome high = execute_pipeline(0, PairChoice::HH, 2, s, set);
    for (const TrackletUpdate& u : high.updates) CHECK(u.category == MatchCategory::CG1);

    // Under L detection some in-RoI objects drop out across frames.
    bool saw_noise_miss = false;
    for (long f = 2; f < 40 && !saw_noise_miss; ++f) {
        const FrameOutcome low = execute_pipeline(0, PairChoice::LH, f, s, set);
        for (const TrackletUpdate& u : low.updates) {
            if (u.category != MatchCategory::CG3) continue;
            const ObjectTrack* o = nullptr;
            for (const ObjectTrack& cand : s.task_objects[0])
                if (cand.id == u.tracklet_id) o = &cand;
            REQUIRE(o != nullptr);
            const MotionState m = o->motion_at(f);
            if (low.roi.contains(m.x, m.y) && !o->occluded_at(f)) saw_noise_miss = true;
        }
    }
    CHECK(saw_noise_miss);
}
