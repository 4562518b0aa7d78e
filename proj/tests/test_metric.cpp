#include <catch2/catch_amalgamated.hpp>

#include "streamcut/metric.hpp"
#include "support.hpp"

using namespace streamcut;

TEST_CASE("distance is zero on identical ids") {
    auto inst = testsupport::line_instance({0.0, 3.0});
    CHECK(inst.oracle->distance(PointId{0}, PointId{0}) == 0.0);
    CHECK(inst.oracle->distance(PointId{1}, PointId{1}) == 0.0);
}

TEST_CASE("euclidean backend on a line") {
    auto inst = testsupport::line_instance({0.0, 3.0});
    CHECK(inst.oracle->distance(PointId{0}, PointId{1}) == 3.0);
    CHECK(inst.oracle->distance(PointId{1}, PointId{0}) == 3.0);
}

TEST_CASE("matrix backend is a plain lookup") {
    // 3x3 with M[1][2] = 7
    std::vector<double> m = {0, 4, 5,
                             4, 0, 7,
                             5, 7, 0};
    MatrixOracle oracle(m, 3, MetricConfig{7.0, true});
    oracle.mark_all_seen();
    CHECK(oracle.distance(PointId{1}, PointId{2}) == 7.0);
    CHECK(oracle.distance(PointId{2}, PointId{1}) == 7.0);
}

TEST_CASE("unseen ids are rejected while enforcement is on") {
    auto inst = testsupport::line_instance({0.0, 1.0, 2.0});
    MetricConfig cfg = inst.oracle->config();

    EuclideanOracle oracle(1, cfg);
    oracle.add_point(PointId{0}, {0.0});
    oracle.add_point(PointId{1}, {1.0});
    oracle.mark_seen(PointId{0});
    CHECK_THROWS_AS(oracle.distance(PointId{0}, PointId{1}), QueryOnUnseenId);
    oracle.mark_seen(PointId{1});
    CHECK(oracle.distance(PointId{0}, PointId{1}) == 1.0);
    // ids unknown to the backend fail even with enforcement satisfied
    CHECK_THROWS_AS(oracle.distance(PointId{0}, PointId{99}), QueryOnUnseenId);
    CHECK_THROWS_AS(oracle.mark_seen(PointId{99}), ValidationError);
}

TEST_CASE("enforcement toggle admits unseen but known ids") {
    MetricConfig cfg;
    cfg.delta_max = 5.0;
    cfg.enforce_seen = false;
    EuclideanOracle oracle(1, cfg);
    oracle.add_point(PointId{0}, {0.0});
    oracle.add_point(PointId{1}, {5.0});
    CHECK(oracle.distance(PointId{0}, PointId{1}) == 5.0);
}

TEST_CASE("verify_metric accepts collinear points") {
    auto inst = testsupport::line_instance({0.0, 1.0, 2.0});
    auto report = verify_metric(*inst.oracle, inst.ids);
    CHECK(report.valid);
    CHECK(report.triples_checked > 0);
}

TEST_CASE("verify_metric reports a broken triangle") {
    std::vector<double> m = {0, 1, 5,
                             1, 0, 1,
                             5, 1, 0};
    MatrixOracle oracle(m, 3, MetricConfig{5.0, false});
    auto report = verify_metric(oracle, oracle.known_ids());
    REQUIRE_FALSE(report.valid);
    REQUIRE(report.violation.has_value());
    CHECK(report.violation->kind == MetricViolation::Kind::Triangle);
}

TEST_CASE("verify_metric reports band violations") {
    std::vector<double> m = {0, 0.25,
                             0.25, 0};
    MatrixOracle oracle(m, 2, MetricConfig{4.0, false});
    auto report = verify_metric(oracle, oracle.known_ids());
    REQUIRE_FALSE(report.valid);
    CHECK(report.violation->kind == MetricViolation::Kind::Band);
}

TEST_CASE("verify_metric enforces its enumeration budget") {
    auto inst = testsupport::random_line_instance(20, 10, 1);
    CHECK_THROWS_AS(verify_metric(*inst.oracle, inst.ids, 10), ValidationError);
}

TEST_CASE("symmetry holds on random instances") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto inst = testsupport::random_plane_instance(30, 50, seed);
        auto report = verify_metric(*inst.oracle, inst.ids);
        CHECK(report.valid);
    }
}

TEST_CASE("duplicate locations give zero distance between distinct ids") {
    auto inst = testsupport::line_instance({4.0, 4.0, 7.0});
    CHECK(inst.oracle->distance(PointId{0}, PointId{1}) == 0.0);
    CHECK(inst.oracle->distance(PointId{0}, PointId{2}) == 3.0);
}
