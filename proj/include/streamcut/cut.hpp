#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <vector>

#include "streamcut/core.hpp"
#include "streamcut/metric.hpp"
#include "streamcut/random.hpp"

namespace streamcut {

struct WeightedEntry {
    PointId point;
    double weight = 1.0;
};

/// Multiset of weighted points. Duplicate ids are allowed and kept as
/// distinct entries.
struct WeightedPointSet {
    std::vector<WeightedEntry> entries;

    void validate() const {
        for (const auto& e : entries)
            if (!(e.weight > 0.0))
                throw ValidationError("weighted point set: weights must be strictly positive");
    }

    static WeightedPointSet unit(const std::vector<PointId>& points) {
        WeightedPointSet s;
        s.entries.reserve(points.size());
        for (PointId p : points) s.entries.push_back({p, 1.0});
        return s;
    }
};

struct CutResult {
    double value = 0.0;
    /// partition[i] is the side of entries[i]; empty when not tracked.
    std::vector<bool> partition;
};

inline double cut_value(const std::vector<PointId>& s, const std::vector<PointId>& t,
                        const DistanceOracle& oracle) {
    double acc = 0.0;
    for (PointId x : s)
        for (PointId y : t) acc += oracle.distance(x, y);
    return acc;
}

namespace detail {

/// Dense cache of w_i * w_j * dist(p_i, p_j); avoids repeated oracle calls
/// during enumeration.
struct WeightedDistances {
    std::size_t n = 0;
    std::vector<double> wd;       // row-major n*n
    std::vector<double> rowsum;   // rowsum[k] = sum_j wd[k][j]

    WeightedDistances(const WeightedPointSet& set, const DistanceOracle& oracle)
        : n(set.entries.size()), wd(n * n, 0.0), rowsum(n, 0.0) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double v = set.entries[i].weight * set.entries[j].weight *
                                 oracle.distance(set.entries[i].point, set.entries[j].point);
                wd[i * n + j] = v;
                wd[j * n + i] = v;
            }
        }
        for (std::size_t k = 0; k < n; ++k) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += wd[k * n + j];
            rowsum[k] = acc;
        }
    }

    double cut_of(const std::vector<bool>& side) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (side[i] != side[j]) acc += wd[i * n + j];
        return acc;
    }
};

}  // namespace detail

/// Exact weighted Max-Cut by enumerating 2^(n-1) partitions with Gray-code
/// incremental updates. The returned value is recomputed exactly from the
/// best partition, so it carries no accumulation drift.
inline CutResult maxcut_exact(const WeightedPointSet& set, const DistanceOracle& oracle,
                              std::size_t exact_threshold = 22) {
    set.validate();
    const std::size_t n = set.entries.size();
    if (n > exact_threshold)
        throw InstanceTooLarge("maxcut_exact: " + std::to_string(n) + " points exceeds threshold " +
                               std::to_string(exact_threshold));
    CutResult result;
    result.partition.assign(n, false);
    if (n <= 1) return result;

    const detail::WeightedDistances dist(set, oracle);
    // Entry 0 is pinned to side 0; Gray code walks the remaining n-1 bits.
    std::vector<bool> side(n, false);
    double cur = 0.0;
    double best = 0.0;
    std::uint64_t best_gray = 0;
    const std::uint64_t total = 1ULL << (n - 1);
    for (std::uint64_t g = 1; g < total; ++g) {
        const std::size_t k = static_cast<std::size_t>(std::countr_zero(g)) + 1;
        double cross = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (side[j] != side[k]) cross += dist.wd[k * n + j];
        cur += dist.rowsum[k] - 2.0 * cross;
        side[k] = !side[k];
        if (cur > best) {
            best = cur;
            best_gray = g;
        }
    }
    const std::uint64_t mask = best_gray ^ (best_gray >> 1);
    for (std::size_t i = 1; i < n; ++i) result.partition[i] = (mask >> (i - 1)) & 1ULL;
    result.value = dist.cut_of(result.partition);
    return result;
}

struct LocalSearchOptions {
    int restarts = 20;
    std::uint64_t seed = 0;
};

/// Single-vertex-move hill climbing from random starts. Accepts the first
/// improving move in index order; never returns less than the best starting
/// cut. Restart seeds derive deterministically from the master seed.
inline CutResult maxcut_local_search(const WeightedPointSet& set, const DistanceOracle& oracle,
                                     LocalSearchOptions opts = {}) {
    set.validate();
    const std::size_t n = set.entries.size();
    CutResult best;
    best.partition.assign(n, false);
    if (n <= 1) return best;
    if (opts.restarts < 1) opts.restarts = 1;

    const detail::WeightedDistances dist(set, oracle);
    std::vector<bool> side(n, false);
    std::vector<double> cross(n, 0.0);  // cross[k] = crossing mass incident to k

    for (int r = 0; r < opts.restarts; ++r) {
        Rng rng(derive_seed(opts.seed, 0x10c41ULL, static_cast<std::uint64_t>(r)));
        for (std::size_t i = 0; i < n; ++i) side[i] = rng.bernoulli(0.5);
        for (std::size_t k = 0; k < n; ++k) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (side[j] != side[k]) acc += dist.wd[k * n + j];
            cross[k] = acc;
        }
        for (;;) {
            std::size_t move = n;
            for (std::size_t k = 0; k < n; ++k) {
                if (dist.rowsum[k] - 2.0 * cross[k] > 0.0) {
                    move = k;
                    break;
                }
            }
            if (move == n) break;
            side[move] = !side[move];
            cross[move] = dist.rowsum[move] - cross[move];
            for (std::size_t j = 0; j < n; ++j) {
                if (j == move) continue;
                if (side[j] != side[move])
                    cross[j] += dist.wd[j * n + move];
                else
                    cross[j] -= dist.wd[j * n + move];
            }
        }
        const double value = dist.cut_of(side);
        if (value > best.value) {
            best.value = value;
            best.partition.assign(side.begin(), side.end());
        }
    }
    return best;
}

}  // namespace streamcut
