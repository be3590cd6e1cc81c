#include "rtmot/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <ostream>
#include <sstream>
#include <thread>

#include "rtmot/analysis.hpp"
#include "rtmot/rng.hpp"

namespace rtmot {

namespace {

std::string fps_label(const std::vector<double>& fps) {
    std::ostringstream s;
    for (std::size_t i = 0; i < fps.size(); ++i) {
        if (i) s << '/';
        s << fps[i];
    }
    return s.str();
}

Duration cell_horizon(const ExperimentConfig& config, const TaskSet& tasks) {
    if (config.horizon > 0) return config.horizon;
    constexpr Duration kCap = 10'000'000;  // periods from FPS lists are near-coprime
    try {
        const Duration h = hyperperiod(tasks);
        if (h >= kCap / 3) return kCap;
        return 3 * h;
    } catch (const std::overflow_error&) {
        return kCap;
    }
}

}  // namespace

std::vector<SweepCell> run_sweep(const ExperimentConfig& config, int threads) {
    if (config.fps_sets.empty() || config.policies.empty()) return {};

    WcetProfile wcet;
    if (config.sweep_wcet)
        wcet = *config.sweep_wcet;
    else if (!config.tasks.empty())
        wcet = config.tasks.front().wcet;
    else
        throw ConfigError("sweep needs sweep.wcet_ms or a task list for the shared profile");

    struct CellPlan {
        std::size_t fps_index;
        std::size_t policy_index;
    };
    std::vector<CellPlan> plan;
    for (std::size_t f = 0; f < config.fps_sets.size(); ++f)
        for (std::size_t p = 0; p < config.policies.size(); ++p) plan.push_back({f, p});

    std::vector<SweepCell> cells(plan.size());
    std::atomic<std::size_t> cursor{0};

    auto run_cell = [&](std::size_t index) {
        const CellPlan& c = plan[index];
        const std::vector<double>& fps = config.fps_sets[c.fps_index];
        const Policy policy = config.policies[c.policy_index];

        SweepCell cell;
        cell.fps = fps;
        cell.policy = policy;

        const TaskSet tasks = taskset_from_fps(fps, wcet);
        cell.schedulable = rta_fixed_pair(tasks, analysis_pair(policy)).schedulable;
        if (cell.schedulable) {
            const Duration horizon = cell_horizon(config, tasks);
            double conf_sum = 0;
            for (int s = 0; s < std::max(1, config.sweep_seeds); ++s) {
                Scenario scenario;
                const Scenario* scenario_ptr = nullptr;
                if (config.scenario) {
                    scenario_ptr = &*config.scenario;
                } else if (config.scenario_params) {
                    ScenarioParams sp = *config.scenario_params;
                    sp.n_tasks = static_cast<int>(fps.size());
                    // Same scenario for every policy of a (fps set, seed) cell.
                    scenario = generate_scenario(mix64(config.seed, c.fps_index, s), sp);
                    scenario_ptr = &scenario;
                }

                SimOptions sim;
                sim.policy = policy;
                sim.horizon = horizon;
                sim.exec = config.exec;
                sim.exec.seed = mix64(config.seed, c.fps_index * 1000 + s, 29);
                sim.scenario = scenario_ptr;
                const Trace trace = simulate(tasks, sim);
                const RunMetrics m = compute_metrics(trace);

                cell.miss_count += m.miss_count;
                for (std::size_t i = 0; i < 4; ++i) cell.pair_histogram[i] += m.pair_histogram[i];
                conf_sum += m.confidence_proxy;
                cell.confidence_min = cell.seeds_run == 0
                                          ? m.confidence_proxy
                                          : std::min(cell.confidence_min, m.confidence_proxy);
                cell.confidence_max = cell.seeds_run == 0
                                          ? m.confidence_proxy
                                          : std::max(cell.confidence_max, m.confidence_proxy);
                ++cell.seeds_run;
            }
            if (cell.seeds_run > 0) cell.confidence_mean = conf_sum / cell.seeds_run;
        }
        cells[index] = std::move(cell);
    };

    const int n_workers = threads > 0
                              ? threads
                              : std::max(1u, std::thread::hardware_concurrency());
    if (n_workers <= 1 || plan.size() <= 1) {
        for (std::size_t i = 0; i < plan.size(); ++i) run_cell(i);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < n_workers; ++w)
            pool.emplace_back([&] {
                while (true) {
                    const std::size_t i = cursor.fetch_add(1);
                    if (i >= plan.size()) return;
                    run_cell(i);
                }
            });
        for (std::thread& t : pool) t.join();
    }
    return cells;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells) {
    out << "fps_set,policy,schedulable,seeds,conf_mean,conf_min,conf_max,"
           "sel_ll,sel_lh,sel_hl,sel_hh,misses\n";
    for (const SweepCell& c : cells) {
        out << fps_label(c.fps) << ',' << to_string(c.policy) << ',' << (c.schedulable ? 1 : 0)
            << ',' << c.seeds_run << ',' << c.confidence_mean << ',' << c.confidence_min << ','
            << c.confidence_max;
        for (long h : c.pair_histogram) out << ',' << h;
        out << ',' << c.miss_count << '\n';
    }
}

}  // namespace rtmot
