#include "rtmot/taskgen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rtmot/rng.hpp"

namespace rtmot {

TaskSet random_taskset(std::uint64_t seed, const TaskGenParams& params) {
    if (params.n_min < 1 || params.n_max < params.n_min || params.period_pool.empty())
        throw std::invalid_argument("random_taskset: invalid params");
    Rng rng(splitmix64(seed ^ 0x7461736b67656eULL));

    const int n = static_cast<int>(rng.uniform_int(params.n_min, params.n_max));
    const double total_util = rng.uniform(params.util_min, params.util_max);

    // UUniFast split of the total utilization.
    std::vector<double> util(n);
    double remaining = total_util;
    for (int i = 0; i < n - 1; ++i) {
        const double next = remaining * std::pow(rng.uniform(), 1.0 / (n - 1 - i));
        util[i] = remaining - next;
        remaining = next;
    }
    util[n - 1] = remaining;

    const Duration q = params.quantum;
    TaskSet tasks;
    for (int i = 0; i < n; ++i) {
        TaskSpec t;
        t.id = i + 1;
        t.period = params.period_pool[static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(params.period_pool.size()) - 1))];

        Duration c_ll = static_cast<Duration>(
            std::llround(util[i] * static_cast<double>(t.period) / static_cast<double>(q))) * q;
        c_ll = std::clamp<Duration>(c_ll, q, t.period);

        // Split C^LL across the pipeline stages, then grow the H variants.
        Duration pre = 0, post = 0;
        if (c_ll >= 4 * q) {
            pre = q * rng.uniform_int(0, 1);
            post = q * rng.uniform_int(0, 1);
        }
        const Duration body = c_ll - pre - post;
        const Duration as_l = q * rng.uniform_int(0, body / q);
        const Duration infer_l = body - as_l;

        t.wcet.pre = pre;
        t.wcet.post = post;
        t.wcet.infer_l = infer_l;
        t.wcet.as_l = as_l;
        t.wcet.infer_h = infer_l + q * rng.uniform_int(0, std::max<Duration>(c_ll / q, 1));
        t.wcet.as_h = as_l + q * rng.uniform_int(1, std::max<Duration>(c_ll / q, 1));
        t.wcet.validate();
        tasks.push_back(t);
    }
    return rm_assign(std::move(tasks));
}

}  // namespace rtmot
