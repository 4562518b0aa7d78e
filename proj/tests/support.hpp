#pragma once

// Shared helpers for the test suites: small deterministic instances plus
// independent brute-force oracles the implementation is checked against.

#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include "streamcut/cut.hpp"
#include "streamcut/metric.hpp"
#include "streamcut/random.hpp"

namespace testsupport {

using namespace streamcut;

struct Instance {
    std::unique_ptr<DistanceOracle> oracle;
    std::vector<PointId> ids;  // in stream order
};

/// 1-D points with the given integer coordinates; ids 0..n-1, all seen.
inline Instance line_instance(const std::vector<double>& coords, double delta = 0.0) {
    double lo = coords.empty() ? 0.0 : coords[0], hi = lo;
    for (double c : coords) {
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    MetricConfig cfg;
    cfg.delta_max = delta > 0.0 ? delta : std::max(1.0, hi - lo);
    auto oracle = std::make_unique<EuclideanOracle>(1, cfg);
    Instance inst;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        oracle->add_point(PointId{i}, {coords[i]});
        inst.ids.push_back(PointId{i});
    }
    oracle->mark_all_seen();
    inst.oracle = std::move(oracle);
    return inst;
}

/// Random integer line points, uniform on [0, span].
inline Instance random_line_instance(std::size_t n, std::uint64_t span, std::uint64_t seed) {
    Rng rng(derive_seed(seed, 0x7e57ULL));
    std::vector<double> coords(n);
    for (auto& c : coords) c = static_cast<double>(rng.next_below(span + 1));
    return line_instance(coords, static_cast<double>(span));
}

/// Random integer grid points in [0, side]^2.
inline Instance random_plane_instance(std::size_t n, std::uint64_t side, std::uint64_t seed) {
    Rng rng(derive_seed(seed, 0x9a1dULL));
    MetricConfig cfg;
    cfg.delta_max = std::sqrt(2.0) * static_cast<double>(side);
    auto oracle = std::make_unique<EuclideanOracle>(2, cfg);
    Instance inst;
    for (std::size_t i = 0; i < n; ++i) {
        oracle->add_point(PointId{i}, {static_cast<double>(rng.next_below(side + 1)),
                                       static_cast<double>(rng.next_below(side + 1))});
        inst.ids.push_back(PointId{i});
    }
    oracle->mark_all_seen();
    inst.oracle = std::move(oracle);
    return inst;
}

/// Exhaustive weighted Max-Cut by direct enumeration over all 2^n subsets.
/// Slower and entirely independent of the Gray-code implementation.
inline double brute_force_maxcut(const WeightedPointSet& set, const DistanceOracle& oracle) {
    const std::size_t n = set.entries.size();
    if (n <= 1) return 0.0;
    double best = 0.0;
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        double cut = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!((mask >> i) & 1ULL)) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if ((mask >> j) & 1ULL) continue;
                cut += set.entries[i].weight * set.entries[j].weight *
                       oracle.distance(set.entries[i].point, set.entries[j].point);
            }
        }
        best = std::max(best, cut);
    }
    return best;
}

/// Exact 1-median cost of x against a multiset of points.
inline double brute_force_median_cost(const std::vector<PointId>& points, PointId x,
                                      const DistanceOracle& oracle) {
    double acc = 0.0;
    for (PointId p : points) acc += oracle.distance(p, x);
    return acc;
}

}  // namespace testsupport
