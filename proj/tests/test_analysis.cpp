#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rtmot/analysis.hpp"
#include "rtmot/rng.hpp"

using namespace rtmot;

namespace {

WcetProfile table1_profile() {
    return WcetProfile{900, 17600, 23200, 9600, 32700, 900};
}

TaskSet table1_pair(Duration t_hi, Duration t_lo) {
    TaskSet tasks;
    tasks.push_back({1, t_hi, 0, table1_profile(), -1});
    tasks.push_back({2, t_lo, 0, table1_profile(), -1});
    return rm_assign(std::move(tasks));
}

// Uniform profile with a given LL cost, for hand-built scenarios.
WcetProfile flat_profile(Duration c_ll) {
    WcetProfile w;
    w.infer_l = c_ll;
    w.infer_h = c_ll;
    w.as_h = 1;
    return w;
}

}  // namespace

TEST_CASE("rta single task has no interference and no blocking") {
    TaskSet tasks;
    tasks.push_back({1, 100000, 0, table1_profile(), -1});
    tasks = rm_assign(std::move(tasks));
    const RtaResult r = rta_min(tasks);
    CHECK(r.schedulable);
    CHECK(r.tasks[0].response_time == 29000);
}

TEST_CASE("rta two-task 6/4 FPS fixture") {
    // Hand iteration: R_hi = 29 + 29 (blocking) = 58 <= 166.7ms;
    // R_lo starts at 29, picks up one higher-priority job: 58 <= 250ms.
    const TaskSet tasks = table1_pair(166667, 250000);
    const RtaResult r = rta_min(tasks);
    CHECK(r.schedulable);
    CHECK(r.for_task(1).response_time == 58000);
    CHECK(r.for_task(2).response_time == 58000);
}

TEST_CASE("rta declares 29ms at 30ms periods unschedulable") {
    const TaskSet tasks = table1_pair(30000, 30000);
    const RtaResult r = rta_min(tasks);
    CHECK(!r.schedulable);
    CHECK(r.for_task(1).response_time > 30000);  // 29 + 29 blocking
}

TEST_CASE("rta rejects an empty set") {
    CHECK_THROWS_AS(rta_min(TaskSet{}), std::invalid_argument);
}

TEST_CASE("rta_fixed_pair uses the pair's WCET") {
    const TaskSet tasks = table1_pair(111111, 142857);  // 9/7 FPS
    CHECK(rta_min(tasks).schedulable);
    // C^HH = 57.7ms; R_hi = 57.7 + 57.7 = 115.4ms > 111.1ms.
    CHECK(!rta_fixed_pair(tasks, PairChoice::HH).schedulable);
}

namespace {

SchedulerSnapshot snapshot_for(const TaskSet& tasks, Instant now,
                               std::vector<TaskSnapshot> entries) {
    SchedulerSnapshot s;
    s.now = now;
    s.tasks = std::move(entries);
    REQUIRE(s.tasks.size() == tasks.size());
    return s;
}

}  // namespace

TEST_CASE("check_self is the direct slack inequality") {
    TaskSet tasks;
    tasks.push_back({1, 200000, 0, flat_profile(0), -1});
    tasks = rm_assign(std::move(tasks));
    const auto snap = snapshot_for(tasks, 0, {{true, 100000}});
    CHECK(check_self(50000, snap, tasks, 0));
    CHECK(check_self(100000, snap, tasks, 0));   // boundary, <=
    CHECK(!check_self(101000, snap, tasks, 0));
    const auto inactive = snapshot_for(tasks, 0, {{false, 100000}});
    CHECK_THROWS_AS(check_self(1, inactive, tasks, 0), std::logic_error);
}

TEST_CASE("check_active matches the hand-evaluated two-task instance") {
    // T1=100ms (rank 0), T2=200ms, both C^LL=20ms, both released at t0=0.
    TaskSet tasks;
    tasks.push_back({1, 100000, 0, flat_profile(20000), -1});
    tasks.push_back({2, 200000, 0, flat_profile(20000), -1});
    tasks = rm_assign(std::move(tasks));
    const auto snap = snapshot_for(tasks, 0, {{true, 100000}, {true, 200000}});

    // LHS = 20 + 50 + 0 + ceil((200-100)/100)*20 = 90 <= 200.
    CHECK(check_active(1, 0, 50000, snap, tasks));
    // LHS = 20 + 200 + 20 = 240 > 200.
    CHECK(!check_active(1, 0, 200000, snap, tasks));
}

TEST_CASE("check_active with j == k guards the next job of tau_k") {
    TaskSet tasks;
    tasks.push_back({1, 100000, 0, flat_profile(30000), -1});
    tasks = rm_assign(std::move(tasks));
    // The next job's window ends at r_k + T_k = 200ms, so the bound is
    // C^LL + C_k <= 170ms given t0 = 30ms.
    const auto snap = snapshot_for(tasks, 30000, {{true, 100000}});
    CHECK(check_active(0, 0, 30000, snap, tasks));
    CHECK(check_active(0, 0, 140000, snap, tasks));   // 30 + 140 = 170, boundary
    CHECK(!check_active(0, 0, 141000, snap, tasks));
    const auto inactive = snapshot_for(tasks, 0, {{false, 100000}});
    CHECK_THROWS_AS(check_active(0, 0, 1, inactive, tasks), std::logic_error);
}

TEST_CASE("check_inactive uses the window one period past the next release") {
    // tau_j (rank 0) next releases at 150ms with T_j = 100ms; tau_k is a
    // lower-priority task with an active job. No other tasks.
    TaskSet tasks;
    tasks.push_back({1, 100000, 0, flat_profile(20000), -1});
    tasks.push_back({2, 500000, 0, flat_profile(20000), -1});
    tasks = rm_assign(std::move(tasks));
    const auto snap = snapshot_for(tasks, 0, {{false, 150000}, {true, 500000}});

    // LHS = 20 + 50 = 70 <= 150 + 100 - 0.
    CHECK(check_inactive(0, 1, 50000, snap, tasks));
    // LHS = 20 + 240 = 260 > 250.
    CHECK(!check_inactive(0, 1, 240000, snap, tasks));
    CHECK_THROWS_AS(check_inactive(0, 0, 1, snap, tasks), std::logic_error);
    CHECK_THROWS_AS(check_inactive(1, 0, 1, snap, tasks), std::logic_error);
}

TEST_CASE("check_inactive vacuous sums with generous release") {
    TaskSet tasks;
    tasks.push_back({1, 100000, 0, flat_profile(20000), -1});
    tasks.push_back({2, 200000, 0, flat_profile(20000), -1});
    tasks = rm_assign(std::move(tasks));
    // j = 0 inactive, far-future release; k = 1 grants its own C^LL.
    const auto snap = snapshot_for(tasks, 0, {{false, 900000}, {true, 200000}});
    CHECK(check_inactive(0, 1, 20000, snap, tasks));
}

TEST_CASE("feasible_assignments with a single unconstrained job admits all pairs") {
    TaskSet tasks;
    tasks.push_back({1, 10000000, 0, table1_profile(), -1});
    tasks = rm_assign(std::move(tasks));
    const auto snap = snapshot_for(tasks, 0, {{true, 10000000}});
    const auto out = feasible_assignments(snap, tasks);
    CHECK(out.size() == 4);
}

TEST_CASE("feasible_assignments filters by available slack") {
    TaskSet tasks;
    tasks.push_back({1, 10000000, 0, table1_profile(), -1});
    tasks = rm_assign(std::move(tasks));
    // 54ms of slack admits exactly the pairs whose WCET fits: LL (29.0),
    // HL (34.6) and LH (52.1) but not HH (57.7).
    const auto snap = snapshot_for(tasks, 0, {{true, 54000}});
    const auto out = feasible_assignments(snap, tasks);
    REQUIRE(out.size() == 3);
    CHECK(out[0].pair == PairChoice::LL);
    CHECK(out[1].pair == PairChoice::LH);
    CHECK(out[2].pair == PairChoice::HL);
}

TEST_CASE("feasible_assignments replays the two-task lemma example") {
    TaskSet tasks;
    tasks.push_back({1, 100000, 0, flat_profile(20000), -1});
    tasks.push_back({2, 200000, 0, flat_profile(20000), -1});
    tasks = rm_assign(std::move(tasks));
    const auto snap = snapshot_for(tasks, 0, {{true, 100000}, {true, 200000}});
    const auto out = feasible_assignments(snap, tasks);
    // flat_profile gives C^LL = C^HL = 20ms and C^LH = C^HH = 20ms + 1us;
    // every (job, pair) fits the 50ms bound from the lemma example.
    CHECK(out.size() == 8);
    for (const FeasibleAssignment& a : out) CHECK(a.budget <= 50000);
}

TEST_CASE("gate checks are monotone in the candidate budget") {
    Rng rng(0xf00d);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = static_cast<int>(rng.uniform_int(2, 5));
        TaskSet tasks;
        for (int i = 0; i < n; ++i)
            tasks.push_back({i + 1, rng.uniform_int(5, 50) * 10000, 0,
                             flat_profile(rng.uniform_int(1, 20) * 1000), -1});
        tasks = rm_assign(std::move(tasks));

        SchedulerSnapshot snap;
        snap.now = 0;
        snap.tasks.resize(tasks.size());
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            const bool active = rng.chance(0.6);
            const Instant r = rng.uniform_int(1, 40) * 5000;
            snap.tasks[i] = {active, active ? r : r + 1};
        }
        std::size_t k = tasks.size();
        for (std::size_t i = 0; i < tasks.size(); ++i)
            if (snap.tasks[i].active) k = i;
        if (k == tasks.size()) continue;

        const Duration big = rng.uniform_int(1, 60) * 1000;
        const Duration small = rng.uniform_int(0, big / 1000) * 1000;
        for (std::size_t j = 0; j < tasks.size(); ++j) {
            if (snap.tasks[j].active) {
                if (check_active(j, k, big, snap, tasks))
                    CHECK(check_active(j, k, small, snap, tasks));
            } else if (j != k) {
                if (check_inactive(j, k, big, snap, tasks))
                    CHECK(check_inactive(j, k, small, snap, tasks));
            }
        }
        if (check_self(big, snap, tasks, k)) CHECK(check_self(small, snap, tasks, k));
    }
}
