#include "rtmot/workload.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rtmot/rng.hpp"

#include <json.hpp>

namespace rtmot {

namespace {

constexpr double kBoundaryMargin = 40.0;
constexpr long kSegmentMin = 30;
constexpr long kSegmentMax = 80;
constexpr double kOcclusionMeanLen = 5.0;

}  // namespace

bool ObjectTrack::occluded_at(long frame) const {
    for (const auto& [begin, end] : occlusions)
        if (frame >= begin && frame < end) return true;
    return false;
}

MotionState ObjectTrack::motion_at(long frame) const {
    if (segments.empty()) throw std::logic_error("ObjectTrack: no trajectory segments");
    const TrajectorySegment* seg = &segments.front();
    for (const TrajectorySegment& s : segments) {
        if (s.start_frame > frame) break;
        seg = &s;
    }
    const double dt = static_cast<double>(frame - seg->start_frame);

    auto size_at = [this](long f) {
        const double arg = 2.0 * std::numbers::pi * static_cast<double>(f) / size.period_frames +
                           size.phase;
        const double scale = 1.0 + size.amplitude * std::sin(arg);
        return std::pair{size.w0 * scale, size.h0 * scale};
    };
    const auto [w, h] = size_at(frame);
    const auto [wp, hp] = size_at(frame - 1);

    MotionState m;
    m.x = seg->x + seg->vx * dt;
    m.y = seg->y + seg->vy * dt;
    m.w = w;
    m.h = h;
    m.vx = seg->vx;
    m.vy = seg->vy;
    m.vw = w - wp;
    m.vh = h - hp;
    return m;
}

AppearanceState ObjectTrack::appearance_at(long frame) const {
    const double theta = feature.theta_per_frame * static_cast<double>(frame);
    const double c = std::cos(theta), s = std::sin(theta);
    AppearanceState a(feature.axis_u.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] = c * feature.axis_u[i] + s * feature.axis_v[i];
    return a;
}

void Scenario::validate() const {
    if (geometry.frame_w <= 0 || geometry.frame_h <= 0 || geometry.roi_w <= 0 ||
        geometry.roi_h <= 0)
        throw std::invalid_argument("scenario: geometry must be positive");
    if (geometry.frame_w % geometry.roi_w != 0 || geometry.frame_h % geometry.roi_h != 0)
        throw std::invalid_argument("scenario: RoI size must tile the frame");
    if (horizon_frames <= 0) throw std::invalid_argument("scenario: horizon must be positive");
    if (feature_dim < 2) throw std::invalid_argument("scenario: feature_dim must be >= 2");
    if (detection_miss_rate < 0 || detection_miss_rate >= 1)
        throw std::invalid_argument("scenario: detection_miss_rate must be in [0, 1)");
    for (const auto& objects : task_objects) {
        for (const ObjectTrack& o : objects) {
            if (o.segments.empty() || o.segments.front().start_frame != o.appear_frame)
                throw std::invalid_argument("scenario: object needs segments from appear_frame");
            if (o.size.w0 <= 0 || o.size.h0 <= 0 || o.size.amplitude < 0 ||
                o.size.amplitude >= 1 || o.size.period_frames <= 0)
                throw std::invalid_argument("scenario: invalid size track");
            if (o.feature.axis_u.size() != static_cast<std::size_t>(feature_dim) ||
                o.feature.axis_v.size() != static_cast<std::size_t>(feature_dim))
                throw std::invalid_argument("scenario: feature axes must match feature_dim");
            for (const auto& [begin, end] : o.occlusions)
                if (begin < 0 || begin >= end || end > horizon_frames)
                    throw std::invalid_argument("scenario: occlusion interval out of range");
        }
    }
}

namespace {

std::vector<double> random_unit_vector(Rng& rng, int dim) {
    std::vector<double> v(dim);
    double norm2 = 0;
    do {
        norm2 = 0;
        for (double& x : v) {
            x = rng.uniform(-1.0, 1.0);
            norm2 += x * x;
        }
    } while (norm2 < 1e-6);
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& x : v) x *= inv;
    return v;
}

FeatureTrack random_feature_track(Rng& rng, int dim, double drift) {
    FeatureTrack f;
    f.axis_u = random_unit_vector(rng, dim);
    while (true) {
        f.axis_v = random_unit_vector(rng, dim);
        double dot = 0;
        for (int i = 0; i < dim; ++i) dot += f.axis_u[i] * f.axis_v[i];
        for (int i = 0; i < dim; ++i) f.axis_v[i] -= dot * f.axis_u[i];
        double norm2 = 0;
        for (double x : f.axis_v) norm2 += x * x;
        if (norm2 > 1e-6) {
            const double inv = 1.0 / std::sqrt(norm2);
            for (double& x : f.axis_v) x *= inv;
            break;
        }
    }
    f.theta_per_frame = drift * rng.uniform(0.5, 1.5);
    return f;
}

std::vector<TrajectorySegment> random_trajectory(Rng& rng, const ScenarioParams& p,
                                                 long appear_frame) {
    const double xmin = kBoundaryMargin, xmax = p.geometry.frame_w - kBoundaryMargin;
    const double ymin = kBoundaryMargin, ymax = p.geometry.frame_h - kBoundaryMargin;

    std::vector<TrajectorySegment> segments;
    double x = rng.uniform(xmin, xmax);
    double y = rng.uniform(ymin, ymax);
    long frame = appear_frame;
    while (frame < p.horizon_frames) {
        const long len = rng.uniform_int(kSegmentMin, kSegmentMax);
        const double speed = rng.uniform(p.speed_min, p.speed_max);
        const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
        double vx = speed * std::cos(angle);
        double vy = speed * std::sin(angle);
        // Flip a component when the segment would leave the play area.
        if (x + vx * static_cast<double>(len) < xmin || x + vx * static_cast<double>(len) > xmax)
            vx = -vx;
        if (y + vy * static_cast<double>(len) < ymin || y + vy * static_cast<double>(len) > ymax)
            vy = -vy;
        segments.push_back({frame, x, y, vx, vy});
        x += vx * static_cast<double>(len);
        y += vy * static_cast<double>(len);
        x = std::clamp(x, xmin, xmax);
        y = std::clamp(y, ymin, ymax);
        frame += len;
    }
    return segments;
}

std::vector<std::pair<long, long>> random_occlusions(Rng& rng, const ScenarioParams& p,
                                                     long appear_frame) {
    std::vector<std::pair<long, long>> out;
    if (p.occlusion_rate <= 0) return out;
    const double p_start = p.occlusion_rate / kOcclusionMeanLen;
    long frame = appear_frame + 1;
    while (frame < p.horizon_frames) {
        if (rng.chance(p_start)) {
            const long len = rng.uniform_int(2, 8);
            const long end = std::min(frame + len, p.horizon_frames);
            out.emplace_back(frame, end);
            frame = end + 1;
        } else {
            ++frame;
        }
    }
    return out;
}

}  // namespace

Scenario generate_scenario(std::uint64_t seed, const ScenarioParams& params) {
    if (params.n_tasks <= 0 || params.n_objects < 0 || params.horizon_frames <= 0)
        throw std::invalid_argument("generate_scenario: invalid params");
    if (params.speed_min < 0 || params.speed_max < params.speed_min)
        throw std::invalid_argument("generate_scenario: invalid speed range");
    if (params.speed_max * static_cast<double>(kSegmentMax) >
        std::min(params.geometry.frame_w, params.geometry.frame_h) - 2.0 * kBoundaryMargin)
        throw std::invalid_argument("generate_scenario: speed range too fast for the frame");

    Scenario s;
    s.geometry = params.geometry;
    s.horizon_frames = params.horizon_frames;
    s.seed = seed;
    s.feature_dim = params.feature_dim;
    s.detection_miss_rate = params.detection_miss_rate;
    s.task_objects.resize(params.n_tasks);

    for (int ti = 0; ti < params.n_tasks; ++ti) {
        auto& objects = s.task_objects[ti];
        for (int oi = 0; oi < params.n_objects; ++oi) {
            Rng rng(mix64(seed, static_cast<std::uint64_t>(ti) + 1,
                          static_cast<std::uint64_t>(oi) + 1));
            ObjectTrack o;
            o.id = oi + 1;
            // A few objects enter the scene later to exercise spawning.
            o.appear_frame = rng.chance(0.2)
                                 ? rng.uniform_int(1, std::max<long>(1, params.horizon_frames / 3))
                                 : 0;
            o.segments = random_trajectory(rng, params, o.appear_frame);
            o.size.w0 = rng.uniform(24.0, 60.0);
            o.size.h0 = rng.uniform(48.0, 120.0);
            o.size.amplitude = rng.uniform(0.0, 0.25);
            o.size.period_frames = rng.uniform(60.0, 240.0);
            o.size.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
            o.feature = random_feature_track(rng, params.feature_dim, params.feature_drift);
            o.occlusions = random_occlusions(rng, params, o.appear_frame);
            objects.push_back(std::move(o));
        }
    }
    s.validate();
    return s;
}

RoiWindow select_roi(const TrackletSet& set, const FrameGeometry& geometry) {
    const int nx = geometry.frame_w / geometry.roi_w;
    const int ny = geometry.frame_h / geometry.roi_h;
    const RoiWindow origin{0, 0, static_cast<double>(geometry.roi_w),
                           static_cast<double>(geometry.roi_h)};
    if (set.empty() || nx <= 0 || ny <= 0) return origin;

    std::vector<double> sum(static_cast<std::size_t>(nx) * ny, 0.0);
    std::vector<int> count(static_cast<std::size_t>(nx) * ny, 0);
    for (const Tracklet& t : set) {
        const double px = t.motion.x, py = t.motion.y;
        if (px < 0 || py < 0 || px >= geometry.frame_w || py >= geometry.frame_h) continue;
        const int cx = std::min(static_cast<int>(px / geometry.roi_w), nx - 1);
        const int cy = std::min(static_cast<int>(py / geometry.roi_h), ny - 1);
        sum[static_cast<std::size_t>(cy) * nx + cx] += t.confidence();
        count[static_cast<std::size_t>(cy) * nx + cx] += 1;
    }

    bool found = false;
    double best_mean = 0;
    int bx = 0, by = 0;
    for (int cx = 0; cx < nx; ++cx) {
        for (int cy = 0; cy < ny; ++cy) {
            const std::size_t idx = static_cast<std::size_t>(cy) * nx + cx;
            if (count[idx] == 0) continue;
            const double mean = sum[idx] / count[idx];
            if (!found || mean < best_mean ||
                (mean == best_mean && (cx < bx || (cx == bx && cy < by)))) {
                found = true;
                best_mean = mean;
                bx = cx;
                by = cy;
            }
        }
    }
    if (!found) return origin;  // every tracklet coasted out of the frame
    return {static_cast<double>(bx) * geometry.roi_w, static_cast<double>(by) * geometry.roi_h,
            static_cast<double>(geometry.roi_w), static_cast<double>(geometry.roi_h)};
}

std::vector<bool> roi_membership(const TrackletSet& set, const RoiWindow& roi) {
    std::vector<bool> in(set.size());
    for (std::size_t i = 0; i < set.size(); ++i)
        in[i] = roi.contains(set[i].motion.x, set[i].motion.y);
    return in;
}

FrameOutcome execute_pipeline(std::size_t task_index, PairChoice pair, long frame,
                              const Scenario& scenario, const TrackletSet& set) {
    if (task_index >= scenario.task_objects.size())
        throw std::invalid_argument("execute_pipeline: task index out of range");
    if (frame < 0 || frame >= scenario.horizon_frames)
        throw std::invalid_argument("execute_pipeline: frame outside horizon");

    const auto& objects = scenario.task_objects[task_index];
    const bool partial = detection_level(pair) == Level::L;
    const Level assoc = association_level(pair);

    FrameOutcome out;
    out.frame = frame;
    out.roi = partial ? select_roi(set, scenario.geometry)
                      : RoiWindow{0, 0, static_cast<double>(scenario.geometry.frame_w),
                                  static_cast<double>(scenario.geometry.frame_h)};

    auto detected = [&](const ObjectTrack& o) {
        if (!o.present_at(frame) || o.occluded_at(frame)) return false;
        const MotionState m = o.motion_at(frame);
        if (!out.roi.contains(m.x, m.y)) return false;
        if (partial && scenario.detection_miss_rate > 0) {
            const double roll = to_unit_double(
                mix64(scenario.seed ^ 0x6d1d6c0f9a3bULL, (task_index << 20) ^ static_cast<std::uint64_t>(o.id),
                      static_cast<std::uint64_t>(frame)));
            if (roll < scenario.detection_miss_rate) return false;
        }
        return true;
    };

    auto object_by_id = [&](int id) -> const ObjectTrack* {
        for (const ObjectTrack& o : objects)
            if (o.id == id) return &o;
        return nullptr;
    };

    for (const Tracklet& t : set) {
        TrackletUpdate u;
        u.tracklet_id = t.id;
        const ObjectTrack* o = object_by_id(t.id);
        if (o && detected(*o)) {
            u.category = classify_outcome({true, assoc});
            u.motion = o->motion_at(frame);
            if (u.category == MatchCategory::CG1) u.appearance = o->appearance_at(frame);
        } else {
            u.category = MatchCategory::CG3;
        }
        out.updates.push_back(std::move(u));
    }

    for (const ObjectTrack& o : objects) {
        const bool tracked = std::any_of(set.begin(), set.end(),
                                         [&](const Tracklet& t) { return t.id == o.id; });
        if (!tracked && detected(o))
            out.spawns.push_back({o.id, o.motion_at(frame), o.appearance_at(frame)});
    }
    return out;
}

TrackletSet initial_tracklets(const Scenario& scenario, std::size_t task_index) {
    if (task_index >= scenario.task_objects.size())
        throw std::invalid_argument("initial_tracklets: task index out of range");
    TrackletSet set;
    for (const ObjectTrack& o : scenario.task_objects[task_index]) {
        if (o.appear_frame != 0) continue;
        Tracklet t;
        t.id = o.id;
        // The tracker ran before this excerpt: the state is what frame -1
        // left behind, with the observation before it seeding the decay
        // references, so observed drift rates are live from the first
        // decision.
        t.motion = o.motion_at(-1);
        t.appearance = o.appearance_at(-1);
        t.motion_obs_frame = -1;
        t.appearance_obs_frame = -1;
        t.motion_ref = o.motion_at(-2);
        t.appearance_ref = o.appearance_at(-2);
        t.motion_ref_frame = -2;
        t.appearance_ref_frame = -2;
        t.start_frame = -1;
        t.last_seen_frame = -1;
        set.push_back(std::move(t));
    }
    return set;
}

namespace {

using nlohmann::json;

json occlusions_json(const std::vector<std::pair<long, long>>& occ) {
    json a = json::array();
    for (const auto& [b, e] : occ) a.push_back(json::array({b, e}));
    return a;
}

}  // namespace

std::string scenario_to_json(const Scenario& s) {
    json j;
    j["frame"] = {{"w", s.geometry.frame_w}, {"h", s.geometry.frame_h}};
    j["roi"] = {{"w", s.geometry.roi_w}, {"h", s.geometry.roi_h}};
    j["horizon_frames"] = s.horizon_frames;
    j["seed"] = s.seed;
    j["feature_dim"] = s.feature_dim;
    j["detection_miss_rate"] = s.detection_miss_rate;
    json tasks = json::array();
    for (const auto& objects : s.task_objects) {
        json objs = json::array();
        for (const ObjectTrack& o : objects) {
            json jo;
            jo["id"] = o.id;
            jo["appear_frame"] = o.appear_frame;
            json segs = json::array();
            for (const TrajectorySegment& g : o.segments)
                segs.push_back({{"start_frame", g.start_frame},
                                {"x", g.x},
                                {"y", g.y},
                                {"vx", g.vx},
                                {"vy", g.vy}});
            jo["segments"] = std::move(segs);
            jo["size"] = {{"w0", o.size.w0},
                          {"h0", o.size.h0},
                          {"amplitude", o.size.amplitude},
                          {"period_frames", o.size.period_frames},
                          {"phase", o.size.phase}};
            jo["feature"] = {{"axis_u", o.feature.axis_u},
                             {"axis_v", o.feature.axis_v},
                             {"theta_per_frame", o.feature.theta_per_frame}};
            jo["occlusions"] = occlusions_json(o.occlusions);
            objs.push_back(std::move(jo));
        }
        tasks.push_back(std::move(objs));
    }
    j["tasks"] = std::move(tasks);
    return j.dump(2);
}

Scenario scenario_from_json(const std::string& text) {
    const json j = json::parse(text);
    Scenario s;
    s.geometry.frame_w = j.at("frame").at("w").get<int>();
    s.geometry.frame_h = j.at("frame").at("h").get<int>();
    s.geometry.roi_w = j.at("roi").at("w").get<int>();
    s.geometry.roi_h = j.at("roi").at("h").get<int>();
    s.horizon_frames = j.at("horizon_frames").get<long>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.feature_dim = j.at("feature_dim").get<int>();
    s.detection_miss_rate = j.value("detection_miss_rate", 0.0);
    for (const json& objs : j.at("tasks")) {
        std::vector<ObjectTrack> objects;
        for (const json& jo : objs) {
            ObjectTrack o;
            o.id = jo.at("id").get<int>();
            o.appear_frame = jo.at("appear_frame").get<long>();
            for (const json& g : jo.at("segments"))
                o.segments.push_back({g.at("start_frame").get<long>(), g.at("x").get<double>(),
                                      g.at("y").get<double>(), g.at("vx").get<double>(),
                                      g.at("vy").get<double>()});
            const json& sz = jo.at("size");
            o.size = {sz.at("w0").get<double>(), sz.at("h0").get<double>(),
                      sz.at("amplitude").get<double>(), sz.at("period_frames").get<double>(),
                      sz.at("phase").get<double>()};
            const json& f = jo.at("feature");
            o.feature.axis_u = f.at("axis_u").get<std::vector<double>>();
            o.feature.axis_v = f.at("axis_v").get<std::vector<double>>();
            o.feature.theta_per_frame = f.at("theta_per_frame").get<double>();
            for (const json& occ : jo.at("occlusions"))
                o.occlusions.emplace_back(occ.at(0).get<long>(), occ.at(1).get<long>());
            objects.push_back(std::move(o));
        }
        s.task_objects.push_back(std::move(objects));
    }
    s.validate();
    return s;
}

}  // namespace rtmot
