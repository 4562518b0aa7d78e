#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "streamcut/core.hpp"
#include "streamcut/cut.hpp"
#include "streamcut/metric.hpp"
#include "streamcut/random.hpp"

namespace streamcut {

struct CoresetParams {
    double epsilon = 0.1;        // accuracy target of the (1 +/- eps) contract
    double delta_max = 1.0;      // aspect-ratio bound of the metric
    std::uint64_t capacity = 0;  // N: upper bound on the stream/window length
    std::size_t block_size = 0;    // leaf buffer size; 0 = derived
    std::size_t summary_size = 0;  // per-summary entry cap; 0 = derived
    double keep_fraction = 0.0;    // entries kept per covered point; 0 = derived
    int median_candidates = 7;

    void validate() const {
        if (!(epsilon >= 0.0 && epsilon < 1.0))
            throw ValidationError("coreset: epsilon must lie in [0, 1)");
        if (delta_max < 1.0) throw ValidationError("coreset: delta_max must be >= 1");
        if (capacity == 0) throw ValidationError("coreset: capacity bound N is required");
        if (keep_fraction < 0.0 || keep_fraction > 0.5)
            throw ValidationError("coreset: keep_fraction must lie in [0, 1/2]");
    }

    /// A summary covering W points keeps about keep_fraction * W entries,
    /// up to the cap. Mass-proportional sizing puts the budget where the
    /// estimate mass is, so no single reduction carries the whole prefix on
    /// a small sample.
    double resolved_fraction() const {
        if (keep_fraction > 0.0) return keep_fraction;
        return std::clamp(0.025 / std::max(epsilon, 0.02), 0.08, 0.25);
    }

    std::size_t resolved_cap() const {
        if (summary_size) return summary_size;
        const double ln_term = std::log(std::max(2.0, delta_max * static_cast<double>(capacity)));
        const double eps = std::max(epsilon, 0.05);
        const auto s = static_cast<std::size_t>(std::ceil(0.9 * ln_term / eps));
        return std::clamp<std::size_t>(s, 48, 144);
    }

    std::size_t resolved_block() const { return block_size ? block_size : 64; }

    /// Structural bound on the live size; exceeding it means the stream ran
    /// far past the configured capacity.
    std::size_t size_budget() const {
        const double blocks = std::max(2.0, 4.0 * static_cast<double>(capacity) /
                                                static_cast<double>(resolved_block()));
        const auto levels = static_cast<std::size_t>(std::ceil(std::log2(blocks))) + 2;
        return resolved_block() + resolved_cap() * levels;
    }
};

/// Stores the whole prefix with unit weights: the eps = 0 backend, used as
/// the testing oracle and for tiny runs.
class ExactPrefixCoreset {
public:
    ExactPrefixCoreset(CoresetParams params, std::uint64_t /*seed*/) : params_(params) {
        params_.validate();
    }

    static constexpr const char* mode_name() { return "exact"; }
    double effective_epsilon() const { return 0.0; }
    const CoresetParams& params() const { return params_; }

    void insert(PointId p, const DistanceOracle&) { points_.push_back(p); }

    double estimate(PointId x, const DistanceOracle& oracle) const {
        double acc = 0.0;
        for (PointId p : points_) acc += oracle.distance(x, p);
        return acc;
    }

    std::size_t size() const { return points_.size(); }
    std::uint64_t inserted() const { return points_.size(); }

private:
    CoresetParams params_;
    std::vector<PointId> points_;
};

/// Merge-and-reduce coreset for 1-median cost queries. Leaf blocks of raw
/// points are reduced to weighted summaries; equal-level summaries merge and
/// reduce up a binary-counter tree, so each point passes through
/// O(log(N/b)) reductions.
///
/// A reduction picks an approximate 1-median c* among weighted candidate
/// draws, samples entries with probability proportional to
/// w * (1 + dist(p, c*)/avg), and reweights by inverse probability
/// (systematic sampling, so heavy outliers are kept deterministically).
/// Sampled weights are then calibrated so the summary reproduces the block's
/// total weight and its exact cost at c*.
class MergeReduceCoreset {
public:
    struct Entry {
        PointId point;
        double weight;
    };

    MergeReduceCoreset(CoresetParams params, std::uint64_t seed)
        : params_(params), rng_(derive_seed(seed, 0xc0151ULL)) {
        params_.validate();
        block_ = params_.resolved_block();
        cap_ = params_.resolved_cap();
        fraction_ = params_.resolved_fraction();
        buffer_.reserve(block_);
    }

    static constexpr const char* mode_name() { return "merge_reduce"; }
    double effective_epsilon() const { return params_.epsilon; }
    const CoresetParams& params() const { return params_; }

    void insert(PointId p, const DistanceOracle& oracle) {
        ++inserted_;
        buffer_.push_back({p, 1.0});
        if (buffer_.size() < block_) return;
        std::vector<Entry> carry = reduce(std::move(buffer_), oracle);
        buffer_.clear();
        buffer_.reserve(block_);
        for (std::size_t level = 0;; ++level) {
            if (level == levels_.size()) levels_.emplace_back();
            if (levels_[level].empty()) {
                levels_[level] = std::move(carry);
                break;
            }
            std::vector<Entry> merged = std::move(levels_[level]);
            levels_[level].clear();
            merged.insert(merged.end(), carry.begin(), carry.end());
            carry = reduce(std::move(merged), oracle);
        }
        if (size() > params_.size_budget())
            throw CapacityExceeded("merge-reduce coreset exceeded its size budget; "
                                   "stream is far longer than the configured capacity");
    }

    double estimate(PointId x, const DistanceOracle& oracle) const {
        double acc = 0.0;
        for (const Entry& e : buffer_) acc += e.weight * oracle.distance(x, e.point);
        for (const auto& level : levels_)
            for (const Entry& e : level) acc += e.weight * oracle.distance(x, e.point);
        return acc;
    }

    std::size_t size() const {
        std::size_t s = buffer_.size();
        for (const auto& level : levels_) s += level.size();
        return s;
    }

    std::uint64_t inserted() const { return inserted_; }

    /// Total stored weight; equals the insertion count up to rounding because
    /// every reduction preserves mass exactly.
    double total_weight() const {
        double acc = 0.0;
        for (const Entry& e : buffer_) acc += e.weight;
        for (const auto& level : levels_)
            for (const Entry& e : level) acc += e.weight;
        return acc;
    }

private:
    std::vector<Entry> reduce(std::vector<Entry> input, const DistanceOracle& oracle) {
        double total_w = 0.0;
        for (const Entry& e : input) total_w += e.weight;
        const auto by_mass = static_cast<std::size_t>(std::ceil(fraction_ * total_w));
        // The floor keeps small summaries dense: relative noise scales with
        // both the kept count and the dropped fraction.
        const std::size_t floor_keep = std::min<std::size_t>(cap_, 48);
        const std::size_t target = std::min(cap_, std::max(floor_keep, by_mass));
        if (input.size() <= target) return input;

        // Approximate 1-median: best of a few weight-proportional draws.
        std::vector<double> cum(input.size());
        double running = 0.0;
        for (std::size_t i = 0; i < input.size(); ++i) {
            running += input[i].weight;
            cum[i] = running;
        }
        const int tries = std::max(1, params_.median_candidates);
        std::size_t center_idx = 0;
        double center_cost = -1.0;
        for (int c = 0; c < tries; ++c) {
            const double pos = rng_.next_double() * total_w;
            const std::size_t idx = static_cast<std::size_t>(
                std::lower_bound(cum.begin(), cum.end(), pos) - cum.begin());
            double cost = 0.0;
            for (const Entry& e : input)
                cost += e.weight * oracle.distance(e.point, input[idx].point);
            if (center_cost < 0.0 || cost < center_cost) {
                center_cost = cost;
                center_idx = idx;
            }
        }
        const PointId center = input[center_idx].point;

        if (center_cost == 0.0) {
            // Zero-diameter block: collapsing to one entry is exact.
            return {{center, total_w}};
        }

        std::vector<double> dist_to_center(input.size());
        for (std::size_t i = 0; i < input.size(); ++i)
            dist_to_center[i] = oracle.distance(input[i].point, center);

        const double avg = center_cost / total_w;
        std::vector<double> pi(input.size());
        double pi_total = 0.0;
        for (std::size_t i = 0; i < input.size(); ++i) {
            pi[i] = input[i].weight * (1.0 + dist_to_center[i] / avg);
            pi_total += pi[i];
        }

        // Madow systematic sampling: `target` positions at spacing
        // pi_total/target over a shuffled order.
        std::vector<std::size_t> order(input.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        rng_.shuffle(order.begin(), order.end());
        const double step = pi_total / static_cast<double>(target);
        const double offset = rng_.next_double() * step;
        std::vector<Entry> sampled;
        std::vector<double> sampled_dist;
        sampled.reserve(target);
        sampled_dist.reserve(target);
        double acc = 0.0;
        std::size_t next_hit = 0;
        for (std::size_t oi = 0; oi < order.size() && next_hit < target; ++oi) {
            const std::size_t i = order[oi];
            const double hi = acc + pi[i];
            std::size_t hits = 0;
            while (next_hit < target && offset + step * static_cast<double>(next_hit) < hi) {
                ++hits;
                ++next_hit;
            }
            acc = hi;
            if (hits == 0) continue;
            const double g = static_cast<double>(hits) * input[i].weight * pi_total /
                             (static_cast<double>(target) * pi[i]);
            sampled.push_back({input[i].point, g});
            sampled_dist.push_back(dist_to_center[i]);
        }

        calibrate(sampled, sampled_dist, total_w, center_cost, avg);
        return sampled;
    }

    /// Rescales sampled weights so that the summary matches the block's total
    /// weight exactly and, when well-conditioned, its cost at the chosen
    /// center too (one factor for near entries, one for far).
    static void calibrate(std::vector<Entry>& sampled, const std::vector<double>& dist,
                          double total_w, double center_cost, double avg) {
        double near_w = 0.0, near_wd = 0.0, far_w = 0.0, far_wd = 0.0;
        for (std::size_t i = 0; i < sampled.size(); ++i) {
            if (dist[i] <= avg) {
                near_w += sampled[i].weight;
                near_wd += sampled[i].weight * dist[i];
            } else {
                far_w += sampled[i].weight;
                far_wd += sampled[i].weight * dist[i];
            }
        }
        const double det = near_w * far_wd - near_wd * far_w;
        const double det_scale = (near_w + far_w) * (near_wd + far_wd);
        bool applied = false;
        if (det_scale > 0.0 && std::abs(det) > 1e-12 * det_scale) {
            const double a = (total_w * far_wd - center_cost * far_w) / det;
            const double b = (near_w * center_cost - near_wd * total_w) / det;
            if (a > 0.05 && a < 20.0 && b > 0.05 && b < 20.0) {
                for (std::size_t i = 0; i < sampled.size(); ++i)
                    sampled[i].weight *= (dist[i] <= avg) ? a : b;
                applied = true;
            }
        }
        if (!applied) {
            double sum = near_w + far_w;
            if (sum > 0.0) {
                const double scale = total_w / sum;
                for (Entry& e : sampled) e.weight *= scale;
            }
        }
    }

    CoresetParams params_;
    std::size_t block_ = 0;
    std::size_t cap_ = 0;
    double fraction_ = 0.0;
    Rng rng_;
    std::vector<Entry> buffer_;
    std::vector<std::vector<Entry>> levels_;
    std::uint64_t inserted_ = 0;
};

}  // namespace streamcut
