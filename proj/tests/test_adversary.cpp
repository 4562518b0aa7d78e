#include <catch2/catch_amalgamated.hpp>

#include "streamcut/adversary.hpp"
#include "support.hpp"

using namespace streamcut;

TEST_CASE("construction bookkeeping for n = 64") {
    HardStream hs = hard_instance(64, 1000.0, 1.0, 5);
    CHECK(hs.instance.r == 4);
    CHECK(hs.insertion_count == 64);
    CHECK(hs.events.size() == 124);  // 64 insertions + 60 deletions
    CHECK(hs.instance.survivors().size() == 4);

    // survivors are exactly the star row
    std::vector<StreamEvent> deletions(hs.events.begin() + 64, hs.events.end());
    for (const StreamEvent& ev : deletions) {
        CHECK(ev.kind == EventKind::Delete);
        for (PointId p : hs.instance.survivors()) CHECK(p != ev.point);
    }
}

TEST_CASE("distances follow the three-case rule") {
    HardStream hs = hard_instance(64, 1000.0, 1000.0, 6, /*enforce_seen=*/false);
    const HardInstance& inst = hs.instance;
    const auto& oracle = *hs.oracle;

    // pick a row different from i* for the plain-row case
    const std::uint64_t row = inst.i_star == 1 ? 2 : 1;
    CHECK(oracle.distance(inst.id_of(1, 1), inst.id_of(2, 1)) == 1000.0);  // i != k
    const std::uint64_t j1 = inst.j_star == 1 ? 2 : 1;
    const std::uint64_t j2 = inst.j_star == 3 ? 4 : 3;
    CHECK(oracle.distance(inst.id_of(row, 1), inst.id_of(row, 2)) == 1.0);
    CHECK(oracle.distance(inst.id_of(inst.i_star, j1), inst.id_of(inst.i_star, j2)) == 1.0);
    CHECK(oracle.distance(inst.id_of(inst.i_star, inst.j_star), inst.id_of(inst.i_star, j1)) ==
          1000.0);  // K case
    CHECK(oracle.distance(inst.id_of(1, 1), inst.id_of(1, 1)) == 0.0);
}

TEST_CASE("metric validity of the hard instance") {
    for (double k_choice : {0, 1}) {
        const double delta = 64.0;
        HardStream hs =
            hard_instance(64, delta, k_choice == 0 ? 1.0 : delta, 11, /*enforce_seen=*/false);
        auto report = verify_metric(*hs.oracle, hs.oracle->known_ids());
        CHECK(report.valid);
    }
}

TEST_CASE("invalid ids fail immediately") {
    HardStream hs = hard_instance(27, 27.0, 1.0, 3);
    hs.oracle->mark_all_seen();
    const HardInstance& inst = hs.instance;
    const PointId valid = inst.id_of(1, 1);
    const PointId flipped{valid.value ^ 1ULL};  // (i, j, 1 - a_ij)
    CHECK_THROWS_AS(hs.oracle->distance(valid, flipped), QueryOnUnseenId);
    // structural garbage is also invalid
    CHECK_THROWS_AS(hs.oracle->distance(valid, PointId{HardInstance::pack(999, 1, 0)}),
                    QueryOnUnseenId);
}

TEST_CASE("gap values match the closed forms") {
    SECTION("n = 64, K = 1") {
        HardStream hs = hard_instance(64, 1000.0, 1.0, 21, false);
        auto gap = hard_instance_gap(hs.instance, *hs.oracle);
        CHECK(gap.exact == 4.0);  // floor(4/2)*ceil(4/2)
        CHECK(gap.exact <= 8.0);  // n^(2/3)/2
        CHECK(gap.lower_bound <= gap.exact);
        CHECK(gap.exact <= gap.upper_bound);
    }
    SECTION("n = 64, K = Delta = 1000") {
        HardStream hs = hard_instance(64, 1000.0, 1000.0, 21, false);
        auto gap = hard_instance_gap(hs.instance, *hs.oracle);
        CHECK(gap.exact == 3000.0);  // Delta * (r - 1)
        CHECK(gap.lower_bound <= gap.exact);
        CHECK(gap.exact <= gap.upper_bound);
    }
    SECTION("n = 8, K = 1: two survivors at distance 1") {
        HardStream hs = hard_instance(8, 8.0, 1.0, 2, false);
        auto gap = hard_instance_gap(hs.instance, *hs.oracle);
        CHECK(gap.exact == 1.0);
    }
}

TEST_CASE("the K gap grows with Delta = n") {
    for (std::uint64_t n : {27ULL, 64ULL, 125ULL}) {
        const double delta = static_cast<double>(n);
        HardStream low = hard_instance(n, delta, 1.0, 9, false);
        HardStream high = hard_instance(n, delta, delta, 9, false);
        auto g1 = hard_instance_gap(low.instance, *low.oracle);
        auto gd = hard_instance_gap(high.instance, *high.oracle);
        const double r = std::cbrt(static_cast<double>(n));
        const double promised = delta * (r - 1.0) / (std::pow(r, 2.0) / 2.0);
        CHECK(gd.exact / g1.exact >= promised - 1e-9);
    }
}

TEST_CASE("same seed reproduces the instance, K aside") {
    HardStream a = hard_instance(64, 100.0, 1.0, 77);
    HardStream b = hard_instance(64, 100.0, 100.0, 77);
    CHECK(a.instance.i_star == b.instance.i_star);
    CHECK(a.instance.j_star == b.instance.j_star);
    CHECK(a.instance.id_bits == b.instance.id_bits);
    // identical event sequences apart from nothing: ids match one by one
    REQUIRE(a.events.size() == b.events.size());
    for (std::size_t i = 0; i < a.events.size(); ++i)
        CHECK(a.events[i].point == b.events[i].point);
}

TEST_CASE("demo: only the store-everything path separates the two cases") {
    EstimatorConfig cfg;
    cfg.epsilon = 0.25;
    cfg.delta_max = 27.0;
    cfg.capacity = 27;
    cfg.samples = 24;
    cfg.replicas = 1;
    cfg.seed = 4;
    auto runs = adversary_demo<ExactPrefixCoreset>(27, 27.0, 8, cfg);
    REQUIRE(runs.size() == 2);
    const DemoRun& k1 = runs[0];
    const DemoRun& kd = runs[1];
    CHECK(k1.store_everything_exact < kd.store_everything_exact / 5.0);
    CHECK(k1.post_deletion_estimate == 0.0);
    CHECK(kd.post_deletion_estimate == 0.0);
    // the insertion-stage estimates do not separate the instances
    const double lo = std::min(k1.insertion_stage_estimate, kd.insertion_stage_estimate);
    const double hi = std::max(k1.insertion_stage_estimate, kd.insertion_stage_estimate);
    REQUIRE(lo > 0.0);
    CHECK(hi / lo < 2.0);
}

TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(hard_instance(10, 100.0, 1.0, 0), ValidationError);   // not a cube
    CHECK_THROWS_AS(hard_instance(64, 2.0, 1.0, 0), ValidationError);     // Delta < n^(1/3)
    CHECK_THROWS_AS(hard_instance(64, 100.0, 7.0, 0), ValidationError);   // K not in {1, Delta}
}
