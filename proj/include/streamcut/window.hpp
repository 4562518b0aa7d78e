#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <vector>

#include "streamcut/core.hpp"
#include "streamcut/cut.hpp"
#include "streamcut/estimator.hpp"
#include "streamcut/metric.hpp"
#include "streamcut/random.hpp"

namespace streamcut {

inline constexpr std::uint64_t kUnboundedWindow = std::numeric_limits<std::uint64_t>::max();

struct WindowConfig {
    double epsilon = 0.1;        // (0, 1/4)
    std::uint64_t window = 0;    // w; kUnboundedWindow = insertion-only behaviour
    std::uint64_t capacity = 0;  // stream-length bound; N = max(window, capacity)
    double delta_max = 1.0;
    std::size_t samples = 0;
    int replicas = 9;
    std::size_t exact_threshold = 22;
    int restarts = 20;
    std::uint64_t seed = 0;
    int k_override = 0;
    std::size_t coreset_block = 0;
    std::size_t coreset_summary = 0;

    double alpha() const { return epsilon; }
    double beta() const { return epsilon / 64.0; }

    /// N in the additive term |S|*eps/N; at least the window capacity, so the
    /// term never exceeds eps.
    std::uint64_t additive_bound() const {
        std::uint64_t n = capacity;
        if (window != kUnboundedWindow) n = std::max(n, window);
        return std::max<std::uint64_t>(n, 1);
    }

    double instance_bound() const {
        const double n = static_cast<double>(additive_bound());
        return (64.0 / epsilon) * std::log(std::max(2.0, n * n * delta_max)) + 4.0;
    }

    void validate() const {
        if (!(epsilon > 0.0 && epsilon <= 0.25))
            throw ValidationError("window: epsilon must lie in (0, 1/4]");
        if (window == 0) throw ValidationError("window: width must be positive");
        if (delta_max < 1.0) throw ValidationError("window: delta_max must be >= 1");
    }

    EstimatorConfig estimator_config() const {
        EstimatorConfig ec;
        ec.epsilon = epsilon;
        ec.delta_max = delta_max;
        // An instance can outlive its window membership while it serves as
        // the left bracket, so give its samplers headroom beyond w.
        const std::uint64_t w_bound =
            window == kUnboundedWindow ? additive_bound() : 2 * window + 4;
        ec.capacity = std::max(additive_bound(), w_bound);
        ec.samples = samples;
        ec.replicas = replicas;
        ec.exact_threshold = exact_threshold;
        ec.restarts = restarts;
        ec.k_override = k_override;
        ec.coreset_block = coreset_block;
        ec.coreset_summary = coreset_summary;
        return ec;
    }
};

struct SmoothFunctionConfig {
    double epsilon = 0.1;
    std::uint64_t capacity = 1;  // the N in |S|*eps/N
    std::size_t exact_threshold = 22;
};

/// f(S) = Max-Cut(S) + |S|*eps/N, by exhaustive Max-Cut. The additive term
/// keeps f strictly monotone under extensions, which plain Max-Cut is not.
inline double f_value(const std::vector<PointId>& points, const DistanceOracle& oracle,
                      const SmoothFunctionConfig& cfg) {
    const CutResult cut = maxcut_exact(WeightedPointSet::unit(points), oracle, cfg.exact_threshold);
    return cut.value + static_cast<double>(points.size()) * cfg.epsilon /
                           static_cast<double>(cfg.capacity);
}

/// Smooth-histogram estimator for sliding-window Max-Cut. One estimator
/// instance per surviving suffix start; instance j is pruned whenever the
/// values of its neighbours i < j < k are within a (1-beta) factor. Reported
/// estimates below the 0.5 cutoff collapse to 0 (the zero-Max-Cut branch).
template <class Coreset>
class SlidingWindowEstimator {
public:
    explicit SlidingWindowEstimator(WindowConfig cfg) : cfg_(cfg) { cfg_.validate(); }

    void ingest(PointId p, const DistanceOracle& oracle) {
        ++t_;
        for (Instance& inst : instances_) {
            inst.est.ingest(p, oracle);
            inst.stale = true;
        }
        instances_.emplace_back(t_, cfg_);
        instances_.back().est.ingest(p, oracle);
        prune(oracle);
        expire();
    }

    /// Estimate for the current window: the value of the first instance whose
    /// start lies inside the window, or the kept bracket instance; values at
    /// most 0.5 report as 0.
    double report(const DistanceOracle& oracle) {
        if (t_ == 0) throw EmptyStream();
        const std::uint64_t ws = window_start();
        Instance* pick = nullptr;
        for (Instance& inst : instances_) {
            if (inst.start >= ws) {
                pick = &inst;
                break;
            }
        }
        if (!pick) pick = &instances_.front();  // bracket
        const double t_star = value(*pick, oracle);
        return t_star > 0.5 ? t_star : 0.0;
    }

    std::uint64_t events() const { return t_; }
    std::size_t live_instances() const { return instances_.size(); }
    const WindowConfig& config() const { return cfg_; }

    std::uint64_t window_start() const {
        if (cfg_.window == kUnboundedWindow || t_ < cfg_.window) return 1;
        return t_ - cfg_.window + 1;
    }

    std::vector<std::uint64_t> instance_starts() const {
        std::vector<std::uint64_t> starts;
        starts.reserve(instances_.size());
        for (const Instance& inst : instances_) starts.push_back(inst.start);
        return starts;
    }

    std::size_t max_coreset_size() const {
        std::size_t s = 0;
        for (const Instance& inst : instances_) s = std::max(s, inst.est.max_coreset_size());
        return s;
    }

private:
    struct Instance {
        Instance(std::uint64_t start_, const WindowConfig& cfg)
            : start(start_),
              est([&] {
                  EstimatorConfig ec = cfg.estimator_config();
                  ec.seed = derive_seed(cfg.seed, 0x1457ULL, start_);
                  return ec;
              }()) {}

        std::uint64_t start;
        AmplifiedEstimator<Coreset> est;
        double last_value = 0.0;
        bool stale = true;
    };

    double value(Instance& inst, const DistanceOracle& oracle) {
        if (inst.stale) {
            const double count = static_cast<double>(t_ - inst.start + 1);
            inst.last_value = inst.est.finalize(oracle) +
                              count * cfg_.epsilon /
                                  static_cast<double>(cfg_.additive_bound());
            inst.stale = false;
        }
        return inst.last_value;
    }

    void expire() {
        const std::uint64_t ws = window_start();
        // Keep the latest instance that starts before the window (the left
        // bracket); drop everything older.
        std::size_t first_keep = 0;
        for (std::size_t i = 0; i < instances_.size(); ++i) {
            if (instances_[i].start < ws)
                first_keep = i;
            else
                break;
        }
        if (first_keep > 0)
            instances_.erase(instances_.begin(),
                             instances_.begin() + static_cast<std::ptrdiff_t>(first_keep));
    }

    void prune(const DistanceOracle& oracle) {
        const double keep = 1.0 - cfg_.beta();
        std::size_t i = 0;
        while (i + 2 < instances_.size()) {
            if (value(instances_[i + 2], oracle) >= keep * value(instances_[i], oracle)) {
                instances_.erase(instances_.begin() + static_cast<std::ptrdiff_t>(i + 1));
            } else {
                ++i;
            }
        }
    }

    WindowConfig cfg_;
    std::deque<Instance> instances_;  // ordered by strictly increasing start
    std::uint64_t t_ = 0;
};

}  // namespace streamcut
