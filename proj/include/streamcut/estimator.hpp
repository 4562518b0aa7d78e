#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "streamcut/coreset.hpp"
#include "streamcut/core.hpp"
#include "streamcut/cut.hpp"
#include "streamcut/metric.hpp"
#include "streamcut/parallel.hpp"
#include "streamcut/random.hpp"
#include "streamcut/sampler.hpp"

namespace streamcut {

struct EstimatorConfig {
    double epsilon = 0.25;       // (0, 1/2)
    double delta_max = 1.0;      // Delta >= 1
    std::uint64_t capacity = 0;  // N: stream-length upper bound
    std::size_t samples = 0;     // m; 0 = default max(64, ceil(4/eps^2)*10)
    int replicas = 9;            // odd; used by the amplified estimator
    std::size_t exact_threshold = 22;
    int restarts = 20;
    std::uint64_t seed = 0;
    int k_override = 0;
    std::size_t coreset_block = 0;
    std::size_t coreset_summary = 0;
    /// Calibrate the sample's weight scale so its total weighted pairwise
    /// distance equals the samplers' Q_hat before evaluating the cut. The
    /// raw Max-Cut(S)/m^2 form (normalize = false) is unbiased but its
    /// variance grows with the K-fold weight dispersion; calibration cancels
    /// the common-mode weight fluctuation and is the default.
    bool normalize = true;

    void validate() const {
        if (!(epsilon > 0.0 && epsilon < 0.5))
            throw ValidationError("estimator: epsilon must lie in (0, 1/2)");
        if (delta_max < 1.0) throw ValidationError("estimator: delta_max must be >= 1");
        if (capacity == 0) throw ValidationError("estimator: capacity bound N is required");
        if (resolved_samples() < 2) throw ValidationError("estimator: m must be >= 2");
        if (replicas < 1 || replicas % 2 == 0)
            throw ValidationError("estimator: replicas must be odd and positive");
    }

    /// Pragmatic default; the asymptotic requirement (theoretical_samples)
    /// has unoptimized constants and is far beyond desk scale.
    std::size_t resolved_samples() const {
        if (samples) return samples;
        const auto by_eps = static_cast<std::size_t>(std::ceil(4.0 / (epsilon * epsilon)) * 10);
        return std::max<std::size_t>(64, by_eps);
    }

    /// The eps^-4 * K^8 sample count the analysis asks for, for logging.
    double theoretical_samples(double coreset_eps) const {
        const int k = k_override ? k_override
                                 : sampling_constant(coreset_eps, delta_max, capacity);
        return std::pow(epsilon, -4.0) * std::pow(static_cast<double>(k), 8.0);
    }

    CoresetParams coreset_params() const {
        CoresetParams p;
        p.epsilon = epsilon;
        p.delta_max = delta_max;
        p.capacity = capacity;
        p.block_size = coreset_block;
        p.summary_size = coreset_summary;
        return p;
    }

    /// lambda from the sampling lower bound: p_x >= (1/lambda) * q(x)/Q.
    double lambda(double coreset_eps) const {
        const int k = k_override ? k_override
                                 : sampling_constant(coreset_eps, delta_max, capacity);
        return 4.0 * k * (1.0 + coreset_eps) / (1.0 - coreset_eps);
    }
};

enum class SolverMode { Exact, LocalSearch };

inline const char* to_string(SolverMode m) {
    return m == SolverMode::Exact ? "exact" : "local_search";
}

struct Estimate {
    double value = 0.0;
    WeightedPointSet sample;  // the m (point, 1/w) entries, duplicates kept
    SolverMode solver_mode = SolverMode::Exact;
    bool zero_metric = false;  // early return: all Q_hat were zero
};

/// Runs m reservoir samplers in parallel over an insertion-only stream and
/// estimates Max-Cut as weighted-Max-Cut(sample)/m^2, with weight 1/w per
/// sampled point. If every sampler still has Q_hat = 0 at the end, all
/// observed pairwise distances were zero and the estimate is 0.
template <class Coreset>
class MaxCutEstimator {
public:
    explicit MaxCutEstimator(EstimatorConfig cfg) : cfg_(cfg) {
        cfg_.validate();
        const std::size_t m = cfg_.resolved_samples();
        samplers_.reserve(m);
        for (std::size_t i = 0; i < m; ++i) {
            SamplerConfig sc;
            sc.coreset = cfg_.coreset_params();
            sc.seed = derive_seed(cfg_.seed, 0x5a3fULL, i);
            sc.k_override = cfg_.k_override;
            samplers_.emplace_back(sc);
        }
    }

    void ingest(PointId p, const DistanceOracle& oracle) {
        ++t_;
        parallel_for(samplers_.size(), [&](std::size_t i) { samplers_[i].step(p, oracle); });
    }

    Estimate finalize(const DistanceOracle& oracle) const {
        if (t_ == 0) throw EmptyStream();
        Estimate est;
        bool all_zero = true;
        for (const auto& s : samplers_)
            if (s.q_hat() != 0.0) {
                all_zero = false;
                break;
            }
        if (all_zero) {
            est.zero_metric = true;
            return est;
        }

        const std::size_t m = samplers_.size();
        est.sample.entries.reserve(m);
        for (const auto& s : samplers_) {
            const auto r = s.result();
            est.sample.entries.push_back({r.sample, 1.0 / r.weight});
        }

        // Entries with equal ids are at distance zero from each other, so
        // merging their weights preserves the optimal cut value exactly and
        // shrinks the evaluation instance.
        WeightedPointSet eval;
        {
            std::unordered_map<std::uint64_t, std::size_t> slot;
            for (const auto& e : est.sample.entries) {
                auto [it, fresh] = slot.try_emplace(e.point.value, eval.entries.size());
                if (fresh)
                    eval.entries.push_back(e);
                else
                    eval.entries[it->second].weight += e.weight;
            }
        }

        CutResult cut;
        if (eval.entries.size() <= cfg_.exact_threshold) {
            est.solver_mode = SolverMode::Exact;
            cut = maxcut_exact(eval, oracle, cfg_.exact_threshold);
        } else {
            est.solver_mode = SolverMode::LocalSearch;
            LocalSearchOptions opts;
            opts.restarts = cfg_.restarts;
            opts.seed = derive_seed(cfg_.seed, 0xf17eULL, t_);
            cut = maxcut_local_search(eval, oracle, opts);
        }
        if (cfg_.normalize) {
            double pair_mass = 0.0;  // cut(S, S) of the sample
            for (std::size_t i = 0; i < eval.entries.size(); ++i)
                for (std::size_t j = i + 1; j < eval.entries.size(); ++j)
                    pair_mass += 2.0 * eval.entries[i].weight * eval.entries[j].weight *
                                 oracle.distance(eval.entries[i].point, eval.entries[j].point);
            double q_hat = 0.0;
            for (const auto& s : samplers_) q_hat += s.q_hat();
            q_hat /= static_cast<double>(m);
            est.value = pair_mass > 0.0 ? cut.value / pair_mass * q_hat : 0.0;
        } else {
            est.value = cut.value / (static_cast<double>(m) * static_cast<double>(m));
        }
        return est;
    }

    std::uint64_t events() const { return t_; }
    const EstimatorConfig& config() const { return cfg_; }

    std::size_t max_coreset_size() const {
        std::size_t s = 0;
        for (const auto& sampler : samplers_) s = std::max(s, sampler.coreset().size());
        return s;
    }

    const std::vector<ReservoirSampler<Coreset>>& samplers() const { return samplers_; }

private:
    EstimatorConfig cfg_;
    std::vector<ReservoirSampler<Coreset>> samplers_;
    std::uint64_t t_ = 0;
};

/// Median of `replicas` independent estimator runs over the same stream.
template <class Coreset>
class AmplifiedEstimator {
public:
    explicit AmplifiedEstimator(EstimatorConfig cfg) : cfg_(cfg) {
        cfg_.validate();
        runs_.reserve(cfg_.replicas);
        for (int r = 0; r < cfg_.replicas; ++r) {
            EstimatorConfig rc = cfg_;
            rc.seed = derive_seed(cfg_.seed, 0xa3bdULL, static_cast<std::uint64_t>(r));
            runs_.emplace_back(rc);
        }
    }

    void ingest(PointId p, const DistanceOracle& oracle) {
        for (auto& run : runs_) run.ingest(p, oracle);
    }

    std::vector<double> replica_values(const DistanceOracle& oracle) const {
        std::vector<double> values;
        values.reserve(runs_.size());
        for (const auto& run : runs_) values.push_back(run.finalize(oracle).value);
        return values;
    }

    double finalize(const DistanceOracle& oracle) const {
        std::vector<double> values = replica_values(oracle);
        auto mid = values.begin() + values.size() / 2;
        std::nth_element(values.begin(), mid, values.end());
        return *mid;
    }

    /// Solver mode of the median run's last finalize is not tracked; expose
    /// the per-run estimates instead when callers need detail.
    std::vector<Estimate> replica_estimates(const DistanceOracle& oracle) const {
        std::vector<Estimate> out;
        out.reserve(runs_.size());
        for (const auto& run : runs_) out.push_back(run.finalize(oracle));
        return out;
    }

    std::uint64_t events() const { return runs_.empty() ? 0 : runs_.front().events(); }
    const EstimatorConfig& config() const { return cfg_; }

    std::size_t max_coreset_size() const {
        std::size_t s = 0;
        for (const auto& run : runs_) s = std::max(s, run.max_coreset_size());
        return s;
    }

private:
    EstimatorConfig cfg_;
    std::vector<MaxCutEstimator<Coreset>> runs_;
};

}  // namespace streamcut
