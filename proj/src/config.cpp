#include "rtmot/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rtmot {

using nlohmann::json;

Duration ms_to_us(double ms) {
    if (!std::isfinite(ms) || ms < 0) throw ConfigError("milliseconds value must be finite and non-negative");
    const double us = ms * 1000.0;
    const Duration rounded = static_cast<Duration>(std::llround(us));
    if (std::abs(us - static_cast<double>(rounded)) > 1e-6)
        throw ConfigError("sub-microsecond precision rejected: " + std::to_string(ms) + " ms");
    return rounded;
}

Duration fps_to_period(double fps) {
    if (!std::isfinite(fps) || fps <= 0) throw ConfigError("fps must be positive");
    return static_cast<Duration>(std::llround(1e6 / fps));
}

WcetProfile wcet_profile_from_ms(double pre, double infer_l, double infer_h, double as_l,
                                 double as_h, double post) {
    WcetProfile w;
    w.pre = ms_to_us(pre);
    w.infer_l = ms_to_us(infer_l);
    w.infer_h = ms_to_us(infer_h);
    w.as_l = ms_to_us(as_l);
    w.as_h = ms_to_us(as_h);
    w.post = ms_to_us(post);
    try {
        w.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return w;
}

TaskSet taskset_from_fps(const std::vector<double>& fps, const WcetProfile& wcet) {
    TaskSet tasks;
    for (std::size_t i = 0; i < fps.size(); ++i) {
        TaskSpec t;
        t.id = static_cast<int>(i) + 1;
        t.period = fps_to_period(fps[i]);
        t.wcet = wcet;
        tasks.push_back(t);
    }
    return rm_assign(std::move(tasks));
}

namespace {

WcetProfile parse_wcet_ms(const json& j) {
    for (const char* key : {"pre", "infer_l", "infer_h", "as_l", "as_h", "post"})
        if (!j.contains(key)) throw ConfigError(std::string("wcet_ms missing key: ") + key);
    return wcet_profile_from_ms(j.at("pre").get<double>(), j.at("infer_l").get<double>(),
                                j.at("infer_h").get<double>(), j.at("as_l").get<double>(),
                                j.at("as_h").get<double>(), j.at("post").get<double>());
}

TaskSet parse_tasks(const json& j) {
    if (!j.is_array() || j.empty()) throw ConfigError("tasks must be a non-empty array");
    TaskSet tasks;
    for (const json& jt : j) {
        TaskSpec t;
        if (!jt.contains("id")) throw ConfigError("task missing id");
        t.id = jt.at("id").get<int>();
        if (jt.contains("fps") == jt.contains("period_ms"))
            throw ConfigError("task needs exactly one of fps or period_ms");
        t.period = jt.contains("fps") ? fps_to_period(jt.at("fps").get<double>())
                                      : ms_to_us(jt.at("period_ms").get<double>());
        if (jt.contains("phase_ms")) t.phase = ms_to_us(jt.at("phase_ms").get<double>());
        if (!jt.contains("wcet_ms")) throw ConfigError("task missing wcet_ms");
        t.wcet = parse_wcet_ms(jt.at("wcet_ms"));
        tasks.push_back(t);
    }
    try {
        return rm_assign(std::move(tasks));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

ScenarioParams parse_scenario_params(const json& j, int n_tasks) {
    ScenarioParams p;
    p.n_tasks = n_tasks;
    p.n_objects = j.value("n_objects", p.n_objects);
    p.horizon_frames = j.value("horizon_frames", p.horizon_frames);
    p.occlusion_rate = j.value("occlusion_rate", p.occlusion_rate);
    p.speed_min = j.value("speed_min", p.speed_min);
    p.speed_max = j.value("speed_max", p.speed_max);
    p.feature_dim = j.value("feature_dim", p.feature_dim);
    p.feature_drift = j.value("feature_drift", p.feature_drift);
    p.detection_miss_rate = j.value("detection_miss_rate", p.detection_miss_rate);
    if (j.contains("frame")) {
        p.geometry.frame_w = j.at("frame").at("w").get<int>();
        p.geometry.frame_h = j.at("frame").at("h").get<int>();
    }
    if (j.contains("roi")) {
        p.geometry.roi_w = j.at("roi").at("w").get<int>();
        p.geometry.roi_h = j.at("roi").at("h").get<int>();
    }
    return p;
}

}  // namespace

Duration ExperimentConfig::effective_horizon() const {
    if (horizon > 0) return horizon;
    // FPS-derived periods are frequently near-coprime, so cap the default.
    constexpr Duration kCap = 10'000'000;
    try {
        const Duration h = hyperperiod(tasks);
        if (h >= kCap / 3) return kCap;
        return 3 * h;
    } catch (const std::overflow_error&) {
        return kCap;
    }
}

ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }

    ExperimentConfig cfg;
    try {
        if (j.contains("tasks")) cfg.tasks = parse_tasks(j.at("tasks"));

        if (j.contains("policies")) {
            cfg.policies.clear();
            for (const json& jp : j.at("policies")) {
                const auto p = policy_from_string(jp.get<std::string>());
                if (!p) throw ConfigError("unknown policy: " + jp.get<std::string>());
                cfg.policies.push_back(*p);
            }
        } else if (j.contains("policy")) {
            const auto p = policy_from_string(j.at("policy").get<std::string>());
            if (!p) throw ConfigError("unknown policy: " + j.at("policy").get<std::string>());
            cfg.policies = {*p};
        }

        cfg.seed = j.value("seed", cfg.seed);
        if (j.contains("horizon_ms")) cfg.horizon = ms_to_us(j.at("horizon_ms").get<double>());
        if (j.contains("exec_model")) {
            const auto m = ExecutionTimeModel::parse(j.at("exec_model").get<std::string>());
            if (!m) throw ConfigError("unknown exec_model: " + j.at("exec_model").get<std::string>());
            cfg.exec = *m;
        }
        if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();

        if (j.contains("scenario_file")) {
            std::ifstream in(j.at("scenario_file").get<std::string>());
            if (!in) throw ConfigError("cannot open scenario_file");
            std::stringstream ss;
            ss << in.rdbuf();
            cfg.scenario = scenario_from_json(ss.str());
        } else if (j.contains("scenario")) {
            cfg.scenario_params =
                parse_scenario_params(j.at("scenario"), static_cast<int>(cfg.tasks.size()));
        }

        if (j.contains("sweep")) {
            const json& sw = j.at("sweep");
            for (const json& cell : sw.at("fps_sets"))
                cfg.fps_sets.push_back(cell.get<std::vector<double>>());
            if (sw.contains("wcet_ms")) cfg.sweep_wcet = parse_wcet_ms(sw.at("wcet_ms"));
            cfg.sweep_seeds = sw.value("seeds", 1);
            if (cfg.scenario_params && !cfg.fps_sets.empty())
                cfg.scenario_params->n_tasks = static_cast<int>(cfg.fps_sets.front().size());
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    if (const char* env = std::getenv("RTMOT_SEED")) {
        try {
            cfg.seed = std::stoull(env);
        } catch (const std::exception&) {
            throw ConfigError("RTMOT_SEED must be an unsigned integer");
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace rtmot
