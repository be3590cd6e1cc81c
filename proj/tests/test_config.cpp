#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "rtmot/config.hpp"
#include "rtmot/sweep.hpp"
#include "rtmot/trace_io.hpp"

using namespace rtmot;

TEST_CASE("decimal milliseconds convert exactly to microseconds") {
    CHECK(ms_to_us(166.7) == 166700);
    CHECK(ms_to_us(250.0) == 250000);
    CHECK(ms_to_us(0.9) == 900);
    CHECK(ms_to_us(0.0) == 0);
    CHECK_THROWS_AS(ms_to_us(0.0005), ConfigError);   // half a microsecond
    CHECK_THROWS_AS(ms_to_us(1.00000049), ConfigError);
    CHECK_THROWS_AS(ms_to_us(-1.0), ConfigError);
}

TEST_CASE("fps conversion rounds to the nearest microsecond") {
    CHECK(fps_to_period(6) == 166667);
    CHECK(fps_to_period(4) == 250000);
    CHECK(fps_to_period(10) == 100000);
    CHECK_THROWS_AS(fps_to_period(0), ConfigError);
}

namespace {

const char* kMinimalConfig = R"({
  "tasks": [
    {"id": 1, "fps": 6,
     "wcet_ms": {"pre": 0.9, "infer_l": 17.6, "infer_h": 23.2, "as_l": 9.6, "as_h": 32.7, "post": 0.9}},
    {"id": 2, "period_ms": 250, "phase_ms": 10,
     "wcet_ms": {"pre": 0.9, "infer_l": 17.6, "infer_h": 23.2, "as_l": 9.6, "as_h": 32.7, "post": 0.9}}
  ],
  "policy": "flex",
  "seed": 3,
  "horizon_ms": 1000,
  "exec_model": "stochastic:0.5"
})";

}  // namespace

TEST_CASE("config parsing maps tasks, policy and model") {
    const ExperimentConfig cfg = parse_config(kMinimalConfig);
    REQUIRE(cfg.tasks.size() == 2);
    CHECK(cfg.tasks[0].period == 166667);
    CHECK(cfg.tasks[1].period == 250000);
    CHECK(cfg.tasks[1].phase == 10000);
    CHECK(cfg.tasks[0].priority == 0);
    CHECK(wcet_of(cfg.tasks[0].wcet, PairChoice::LL) == 29000);
    REQUIRE(cfg.policies.size() == 1);
    CHECK(cfg.policies[0] == Policy::npfp_flex);
    CHECK(cfg.seed == 3);
    CHECK(cfg.horizon == 1000000);
    CHECK(cfg.exec.mode == ExecutionTimeModel::Mode::stochastic);
}

TEST_CASE("config errors are rejected") {
    CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"tasks": []})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"tasks": [{"id": 1}]})"), ConfigError);
    // fps and period_ms together are ambiguous.
    CHECK_THROWS_AS(parse_config(R"({"tasks": [{"id": 1, "fps": 5, "period_ms": 200,
        "wcet_ms": {"pre":0,"infer_l":1,"infer_h":1,"as_l":0,"as_h":1,"post":0}}]})"),
                    ConfigError);
    // duplicate ids
    CHECK_THROWS_AS(parse_config(R"({"tasks": [
        {"id": 1, "fps": 5, "wcet_ms": {"pre":0,"infer_l":1,"infer_h":1,"as_l":0,"as_h":1,"post":0}},
        {"id": 1, "fps": 4, "wcet_ms": {"pre":0,"infer_l":1,"infer_h":1,"as_l":0,"as_h":1,"post":0}}
    ]})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"tasks": [{"id": 1, "fps": 5,
        "wcet_ms": {"pre":0,"infer_l":1,"infer_h":1,"as_l":0,"as_h":1,"post":0}}], "policy": "bogus"})"),
                    ConfigError);
}

TEST_CASE("RTMOT_SEED environment variable overrides the config seed") {
    setenv("RTMOT_SEED", "77", 1);
    const ExperimentConfig cfg = parse_config(kMinimalConfig);
    unsetenv("RTMOT_SEED");
    CHECK(cfg.seed == 77);
}

TEST_CASE("trace CSV schema is stable") {
    Trace trace;
    trace.records.push_back({0, 29000, 1, 0, PairChoice::LL, 29000, 29000, false, false, 0.0});
    trace.records.push_back(
        {29000, 86700, 2, 0, PairChoice::HH, 57700, 57700, true, false, 0.25});
    std::ostringstream out;
    write_trace_csv(out, trace);
    CHECK(out.str() ==
          "t_us,task,job_idx,pair,budget_us,actual_us,inverted,miss\n"
          "0,1,0,LL,29000,29000,0,0\n"
          "29000,2,0,HH,57700,57700,1,0\n");
}

TEST_CASE("metrics aggregate misses, pairs and confidence") {
    Trace trace;
    trace.records.push_back({0, 1, 1, 0, PairChoice::LL, 1, 1, false, false, 0.0});
    trace.records.push_back({1, 2, 1, 1, PairChoice::HH, 1, 1, false, true, 0.0});
    trace.misses.push_back({1, 1, 1, 2, 1});
    trace.confidence.push_back({1, 0, 3, 0.5, {0, 0, 0, 0}, PairChoice::LL});
    trace.confidence.push_back({1, 1, 3, 1.0, {0, 0, 0, 0}, PairChoice::HH});
    const RunMetrics m = compute_metrics(trace);
    CHECK(m.miss_count == 1);
    CHECK(m.pair_histogram[pair_index(PairChoice::LL)] == 1);
    CHECK(m.pair_histogram[pair_index(PairChoice::HH)] == 1);
    CHECK(m.mean_confidence.at(1) == doctest::Approx(0.75));
    CHECK(m.confidence_proxy == doctest::Approx(0.75));

    const std::string json = metrics_to_json(m, Policy::npfp_flex, 5);
    CHECK(json.find("\"miss_count\": 1") != std::string::npos);
    CHECK(json.find("\"policy\": \"flex\"") != std::string::npos);
}

TEST_CASE("sweep over an empty grid is a no-op") {
    ExperimentConfig cfg;
    CHECK(run_sweep(cfg, 1).empty());
}

TEST_CASE("small sweep marks static-HH unschedulable where flex is fine") {
    ExperimentConfig cfg;
    cfg.policies = {Policy::npfp_flex, Policy::static_hh};
    cfg.fps_sets = {{6, 4}, {9, 7}};
    cfg.sweep_wcet = wcet_profile_from_ms(0.9, 17.6, 23.2, 9.6, 32.7, 0.9);
    cfg.horizon = 1000000;
    cfg.sweep_seeds = 1;
    const auto cells = run_sweep(cfg, 2);
    REQUIRE(cells.size() == 4);

    auto find_cell = [&](double fps0, Policy p) -> const SweepCell& {
        for (const SweepCell& c : cells)
            if (c.fps[0] == fps0 && c.policy == p) return c;
        throw std::runtime_error("cell not found");
    };
    CHECK(find_cell(6, Policy::npfp_flex).schedulable);
    CHECK(find_cell(6, Policy::static_hh).schedulable);
    CHECK(find_cell(9, Policy::npfp_flex).schedulable);
    CHECK(!find_cell(9, Policy::static_hh).schedulable);  // R = 115.4ms > 111.1ms
    CHECK(find_cell(9, Policy::static_hh).seeds_run == 0);
    CHECK(find_cell(9, Policy::npfp_flex).miss_count == 0);

    std::ostringstream out;
    write_sweep_csv(out, cells);
    CHECK(out.str().find("fps_set,policy") != std::string::npos);
    CHECK(out.str().find("9/7,static-HH,0") != std::string::npos);
}
