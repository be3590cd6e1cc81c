#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rtmot/analysis.hpp"
#include "rtmot/config.hpp"
#include "rtmot/oracle.hpp"
#include "rtmot/scheduler.hpp"
#include "rtmot/sweep.hpp"
#include "rtmot/trace_io.hpp"
#include "rtmot/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUnschedulable = 1;  // also verification failure
constexpr int kExitConfigError = 2;

using namespace rtmot;

struct CommonArgs {
    std::string config_path;
    std::string policy;
    double horizon_ms{0};
    std::uint64_t seed{0};
    bool seed_set{false};
    std::string exec_model;
    std::string output_dir;
};

ExperimentConfig load_with_overrides(const CommonArgs& args) {
    ExperimentConfig cfg = load_config(args.config_path);
    if (!args.policy.empty()) {
        const auto p = policy_from_string(args.policy);
        if (!p) throw ConfigError("unknown policy: " + args.policy);
        cfg.policies = {*p};
    }
    if (args.horizon_ms > 0) cfg.horizon = ms_to_us(args.horizon_ms);
    if (args.seed_set && !std::getenv("RTMOT_SEED")) cfg.seed = args.seed;
    if (!args.exec_model.empty()) {
        const auto m = ExecutionTimeModel::parse(args.exec_model);
        if (!m) throw ConfigError("unknown exec model: " + args.exec_model);
        cfg.exec = *m;
    }
    if (!args.output_dir.empty()) cfg.output_dir = args.output_dir;
    return cfg;
}

int cmd_analyze(const CommonArgs& args) {
    const ExperimentConfig cfg = load_with_overrides(args);
    if (cfg.tasks.empty()) throw ConfigError("analyze: config has no tasks");

    nlohmann::json out;
    bool all_ok = true;
    for (Policy policy : cfg.policies) {
        const RtaResult rta = rta_fixed_pair(cfg.tasks, analysis_pair(policy));
        nlohmann::json jp;
        jp["schedulable"] = rta.schedulable;
        nlohmann::json jt = nlohmann::json::array();
        for (const RtaTaskResult& t : rta.tasks)
            jt.push_back({{"id", t.task_id},
                          {"R_us", t.response_time},
                          {"schedulable", t.schedulable}});
        jp["tasks"] = std::move(jt);
        out[to_string(policy)] = std::move(jp);
        all_ok = all_ok && rta.schedulable;
    }
    std::cout << out.dump(2) << "\n";
    return all_ok ? kExitOk : kExitUnschedulable;
}

int cmd_simulate(const CommonArgs& args, bool force) {
    const ExperimentConfig cfg = load_with_overrides(args);
    if (cfg.tasks.empty()) throw ConfigError("simulate: config has no tasks");
    if (cfg.policies.size() != 1)
        throw ConfigError("simulate: pick exactly one policy (config or --policy)");
    const Policy policy = cfg.policies.front();

    const RtaResult rta = rta_fixed_pair(cfg.tasks, analysis_pair(policy));
    if (!rta.schedulable && !force) {
        std::cerr << "task set not schedulable under " << to_string(policy)
                  << " (rerun with --force to simulate anyway)\n";
        return kExitUnschedulable;
    }

    Scenario scenario;
    const Scenario* scenario_ptr = nullptr;
    if (cfg.scenario) {
        scenario_ptr = &*cfg.scenario;
    } else if (cfg.scenario_params) {
        scenario = generate_scenario(cfg.seed, *cfg.scenario_params);
        scenario_ptr = &scenario;
    }

    SimOptions sim;
    sim.policy = policy;
    sim.horizon = cfg.effective_horizon();
    sim.exec = cfg.exec;
    if (sim.exec.seed == 0) sim.exec.seed = cfg.seed;
    sim.scenario = scenario_ptr;
    const Trace trace = simulate(cfg.tasks, sim);

    std::filesystem::create_directories(cfg.output_dir);
    const auto trace_path = cfg.output_dir / "trace.csv";
    const auto metrics_path = cfg.output_dir / "metrics.json";
    {
        std::ofstream out(trace_path);
        if (!out) throw ConfigError("cannot write " + trace_path.string());
        write_trace_csv(out, trace);
    }
    const RunMetrics metrics = compute_metrics(trace);
    {
        std::ofstream out(metrics_path);
        if (!out) throw ConfigError("cannot write " + metrics_path.string());
        out << metrics_to_json(metrics, policy, cfg.seed) << "\n";
    }
    if (scenario_ptr) {
        std::ofstream out(cfg.output_dir / "confidence.csv");
        write_confidence_csv(out, trace);
    }
    std::cout << "trace: " << trace_path.string() << "\n"
              << "metrics: " << metrics_path.string() << "\n"
              << "records=" << metrics.records << " misses=" << metrics.miss_count
              << " confidence_proxy=" << metrics.confidence_proxy << "\n";
    return kExitOk;
}

int cmd_sweep(const CommonArgs& args, int threads) {
    const ExperimentConfig cfg = load_with_overrides(args);
    const std::vector<SweepCell> cells = run_sweep(cfg, threads);
    if (cells.empty()) {
        std::cerr << "warning: empty sweep grid, nothing to do\n";
        return kExitOk;
    }
    std::filesystem::create_directories(cfg.output_dir);
    const auto path = cfg.output_dir / "sweep.csv";
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    write_sweep_csv(out, cells);
    write_sweep_csv(std::cout, cells);
    std::cout << "sweep: " << path.string() << "\n";
    return kExitOk;
}

int cmd_verify(int rta_sets, long gate_grants, std::uint64_t seed) {
    int rc = kExitOk;

    RtaVsTickOptions rta_opts;
    rta_opts.sets = rta_sets;
    rta_opts.seed = seed;
    const RtaVsTickReport rta = verify_rta_vs_tick(rta_opts);
    std::cout << "rta-vs-tick: sets=" << rta.sets_tested
              << " schedulable=" << rta.schedulable_sets << " tick_runs=" << rta.tick_runs
              << " disagreements=" << rta.failures.size() << "\n";
    for (const std::string& f : rta.failures) std::cout << "  " << f << "\n";
    if (!rta.ok()) rc = kExitUnschedulable;

    GateVsOracleOptions gate_opts;
    gate_opts.min_grants = gate_grants;
    gate_opts.seed = seed;
    const GateVsOracleReport gate = verify_gate_vs_oracle(gate_opts);
    std::cout << "gate-vs-exhaustive: grants=" << gate.grants_checked
              << " instants=" << gate.decision_instants << " sets=" << gate.sets_used
              << " violations=" << gate.failures.size() << "\n";
    for (const std::string& f : gate.failures) std::cout << "  " << f << "\n";
    if (!gate.ok()) rc = kExitUnschedulable;

    std::cout << (rc == kExitOk ? "verify: OK" : "verify: FAILED") << "\n";
    return rc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RT-MOT scheduling framework: offline analysis and online "
                 "flexible scheduling for multi-object-tracking task sets"};
    app.require_subcommand(1);

    CommonArgs args;
    bool force = false;
    int threads = 0;
    int rta_sets = 1000;
    long gate_grants = 10000;
    std::uint64_t verify_seed = 1;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* opt = sub->add_option("--config", args.config_path, "experiment config JSON");
        if (needs_config) opt->required();
        sub->add_option("--policy", args.policy,
                        "min|flex|flex-npi|static-LL|static-LH|static-HL|static-HH");
        sub->add_option("--horizon-ms", args.horizon_ms, "simulation horizon in ms");
        sub->add_option("--seed", args.seed, "seed override")->each([&](const std::string&) {
            args.seed_set = true;
        });
        sub->add_option("--exec-model", args.exec_model, "wcet|scaled:<f>|stochastic:<lo>");
        sub->add_option("--output-dir", args.output_dir, "output directory");
    };

    CLI::App* analyze = app.add_subcommand("analyze", "offline schedulability analysis");
    add_common(analyze, true);

    CLI::App* simulate = app.add_subcommand("simulate", "run one scheduling simulation");
    add_common(simulate, true);
    simulate->add_flag("--force", force, "simulate even if the analysis fails");

    CLI::App* sweep = app.add_subcommand("sweep", "FPS-set x policy x seed sweep");
    add_common(sweep, true);
    sweep->add_option("--threads", threads, "worker threads (default: hardware)");

    CLI::App* verify = app.add_subcommand("verify", "analysis-vs-oracle cross-checks");
    verify->add_option("--rta-sets", rta_sets, "random sets for the RTA suite");
    verify->add_option("--gate-grants", gate_grants, "admitted grants to check");
    verify->add_option("--seed", verify_seed, "suite seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) return cmd_analyze(args);
        if (simulate->parsed()) return cmd_simulate(args, force);
        if (sweep->parsed()) return cmd_sweep(args, threads);
        if (verify->parsed()) return cmd_verify(rta_sets, gate_grants, verify_seed);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
    return kExitOk;
}
