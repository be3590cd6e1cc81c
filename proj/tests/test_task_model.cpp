#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rtmot/rng.hpp"
#include "rtmot/task_model.hpp"

using namespace rtmot;

namespace {

// Component maxima measured for the reference pipeline, in microseconds.
WcetProfile table1_profile() {
    return WcetProfile{900, 17600, 23200, 9600, 32700, 900};
}

WcetProfile random_profile(Rng& rng) {
    WcetProfile w;
    w.pre = rng.uniform_int(0, 2000);
    w.infer_l = rng.uniform_int(0, 30000);
    w.infer_h = w.infer_l + rng.uniform_int(0, 20000);
    w.as_l = rng.uniform_int(0, 20000);
    w.as_h = w.as_l + rng.uniform_int(1, 30000);
    w.post = rng.uniform_int(0, 2000);
    return w;
}

}  // namespace

TEST_CASE("wcet_of reproduces the measured profile sums") {
    const WcetProfile w = table1_profile();
    w.validate();
    CHECK(wcet_of(w, PairChoice::LL) == 29000);
    CHECK(wcet_of(w, PairChoice::HH) == 57700);
    CHECK(wcet_of(w, PairChoice::HL) == 34600);
    CHECK(wcet_of(w, PairChoice::LH) == 52100);
}

TEST_CASE("wcet_of zero profile") {
    WcetProfile w;
    w.as_h = 1;  // keep as_l < as_h
    for (PairChoice p : kAllPairs)
        CHECK(wcet_of(w, p) == (association_level(p) == Level::H ? 1 : 0));
    WcetProfile zero;
    CHECK(wcet_of(zero, PairChoice::LL) == 0);
    CHECK(wcet_of(zero, PairChoice::HL) == 0);
}

TEST_CASE("wcet profile invariants are enforced") {
    WcetProfile w = table1_profile();
    w.as_h = w.as_l;
    CHECK_THROWS_AS(w.validate(), std::invalid_argument);
    w = table1_profile();
    w.infer_l = w.infer_h + 1;
    CHECK_THROWS_AS(w.validate(), std::invalid_argument);
    w = table1_profile();
    w.pre = -1;
    CHECK_THROWS_AS(w.validate(), std::invalid_argument);
}

TEST_CASE("wcet_of monotone under L->H upgrades") {
    Rng rng(0xbeef);
    for (int i = 0; i < 500; ++i) {
        const WcetProfile w = random_profile(rng);
        CHECK(wcet_of(w, PairChoice::LL) <= wcet_of(w, PairChoice::LH));
        CHECK(wcet_of(w, PairChoice::LL) <= wcet_of(w, PairChoice::HL));
        CHECK(wcet_of(w, PairChoice::HL) <= wcet_of(w, PairChoice::HH));
        CHECK(wcet_of(w, PairChoice::LH) <= wcet_of(w, PairChoice::HH));
    }
}

TEST_CASE("rm_assign orders by period then id") {
    TaskSet tasks;
    tasks.push_back({1, 250000, 0, table1_profile(), -1});
    tasks.push_back({2, 166700, 0, table1_profile(), -1});
    tasks = rm_assign(std::move(tasks));
    CHECK(tasks[0].priority == 1);
    CHECK(tasks[1].priority == 0);
}

TEST_CASE("rm_assign breaks period ties by ascending id") {
    TaskSet tasks;
    tasks.push_back({2, 100000, 0, table1_profile(), -1});
    tasks.push_back({1, 100000, 0, table1_profile(), -1});
    tasks = rm_assign(std::move(tasks));
    CHECK(tasks[0].priority == 1);  // id 2
    CHECK(tasks[1].priority == 0);  // id 1
}

TEST_CASE("rm_assign single task and error paths") {
    TaskSet single;
    single.push_back({5, 100000, 0, table1_profile(), -1});
    single = rm_assign(std::move(single));
    CHECK(single[0].priority == 0);

    TaskSet dup;
    dup.push_back({1, 100000, 0, table1_profile(), -1});
    dup.push_back({1, 200000, 0, table1_profile(), -1});
    CHECK_THROWS_AS(rm_assign(std::move(dup)), std::invalid_argument);
    CHECK_THROWS_AS(rm_assign(TaskSet{}), std::invalid_argument);
}

TEST_CASE("rm ranks are a total order consistent with periods") {
    Rng rng(0x5eed);
    for (int i = 0; i < 200; ++i) {
        const int n = static_cast<int>(rng.uniform_int(1, 8));
        TaskSet tasks;
        for (int k = 0; k < n; ++k)
            tasks.push_back({k + 1, rng.uniform_int(1, 50) * 10000, 0, table1_profile(), -1});
        tasks = rm_assign(std::move(tasks));
        for (const TaskSpec& a : tasks)
            for (const TaskSpec& b : tasks)
                if (a.period < b.period) CHECK(a.priority < b.priority);
    }
}

TEST_CASE("release_job produces periodic releases with implicit deadlines") {
    TaskSpec t{1, 100000, 0, table1_profile(), 0};
    Job j = release_job(t, 3);
    CHECK(j.release == 300000);
    CHECK(j.abs_deadline == 400000);

    j = release_job(t, 0);
    CHECK(j.release == 0);
    CHECK(j.abs_deadline == 100000);

    t.phase = 10000;
    j = release_job(t, 2);
    CHECK(j.release == 210000);
    CHECK(j.abs_deadline == 310000);

    CHECK_THROWS_AS(release_job(t, -1), std::invalid_argument);
}

TEST_CASE("deadline minus release equals period for random jobs") {
    Rng rng(42);
    for (int i = 0; i < 300; ++i) {
        TaskSpec t{1, rng.uniform_int(1, 1000) * 1000, rng.uniform_int(0, 50) * 1000,
                   table1_profile(), 0};
        const Job j = release_job(t, rng.uniform_int(0, 1000));
        CHECK(j.abs_deadline - j.release == t.period);
        CHECK(j.state == JobState::pending);
    }
}

TEST_CASE("hyperperiod") {
    TaskSet tasks;
    tasks.push_back({1, 20000, 0, table1_profile(), -1});
    tasks.push_back({2, 50000, 0, table1_profile(), -1});
    CHECK(hyperperiod(tasks) == 100000);
}

TEST_CASE("pair string round trip") {
    for (PairChoice p : kAllPairs) CHECK(pair_from_string(to_string(p)) == p);
    CHECK(!pair_from_string("XX").has_value());
}
