#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

#include "streamcut/coreset.hpp"
#include "streamcut/core.hpp"
#include "streamcut/metric.hpp"
#include "streamcut/random.hpp"

namespace streamcut {

/// K such that sum_t R_hat/Q_hat <= K/2 is guaranteed by the prefix-sum
/// telescoping argument: K = ceil(2 + 2*((1+eps)/(1-eps))*ln(Delta*N^2)),
/// with eps the coreset's accuracy (0 for the exact backend).
inline int sampling_constant(double eps, double delta_max, std::uint64_t capacity) {
    const double ratio = (1.0 + eps) / (1.0 - eps);
    const double ln_term =
        std::log(std::max(2.0, delta_max * static_cast<double>(capacity) *
                                   static_cast<double>(capacity)));
    return static_cast<int>(std::ceil(2.0 + 2.0 * ratio * ln_term));
}

struct SamplerConfig {
    CoresetParams coreset;
    std::uint64_t seed = 0;
    int k_override = 0;  // 0 = derived from (eps, Delta, N)
};

/// Maintains one importance-weighted sample (s, w) over an insertion-only
/// stream. On the t-th insertion the prefix cost R_hat is estimated from the
/// coreset of the previous prefix (the self term is zero), Q_hat accumulates
/// 2*R_hat, and the sample is replaced with probability
/// beta_t = R_hat/(K*Q_hat), or 1/t while Q_hat is still zero. The running w
/// is the exact realized probability of the current sample given the beta
/// sequence.
template <class Coreset>
class ReservoirSampler {
public:
    explicit ReservoirSampler(SamplerConfig cfg)
        : cfg_(cfg),
          coreset_(cfg.coreset, derive_seed(cfg.seed, 0x5e7ULL)),
          rng_(derive_seed(cfg.seed, 0x7a11ULL)) {
        k_ = cfg.k_override
                 ? cfg.k_override
                 : sampling_constant(coreset_.effective_epsilon(), cfg.coreset.delta_max,
                                     cfg.coreset.capacity);
        if (k_ < 1) throw ValidationError("sampler: K must be positive");
    }

    void step(PointId p, const DistanceOracle& oracle) {
        ++t_;
        double r_hat = coreset_.estimate(p, oracle);
        if (r_hat < 0.0) {
            // Coreset contract violation; clamp and count it.
            r_hat = 0.0;
            ++clamped_;
        }
        q_hat_ += 2.0 * r_hat;
        double beta;
        if (q_hat_ == 0.0) {
            beta = 1.0 / static_cast<double>(t_);
        } else {
            beta = r_hat / (static_cast<double>(k_) * q_hat_);
        }
        // Structurally beta <= max(1/t, 1/(2K)) <= 1 because Q_hat >= 2*R_hat.
        if (!(beta >= 0.0 && beta <= 1.0))
            throw ValidationError("sampler: beta outside [0, 1]; coreset contract failure");
        last_beta_ = beta;
        if (rng_.bernoulli(beta)) {
            sample_ = p;
            weight_ = beta;
        } else {
            weight_ *= (1.0 - beta);
        }
        coreset_.insert(p, oracle);
    }

    struct Result {
        PointId sample;
        double weight;
    };

    Result result() const {
        if (!sample_) throw EmptyStream();
        return {*sample_, weight_};
    }

    std::uint64_t t() const { return t_; }
    double q_hat() const { return q_hat_; }
    double last_beta() const { return last_beta_; }
    int k() const { return k_; }
    std::uint64_t clamped_estimates() const { return clamped_; }
    const Coreset& coreset() const { return coreset_; }

private:
    SamplerConfig cfg_;
    Coreset coreset_;
    Rng rng_;
    int k_ = 0;
    std::optional<PointId> sample_;
    double weight_ = 1.0;
    double q_hat_ = 0.0;
    double last_beta_ = 0.0;
    std::uint64_t t_ = 0;
    std::uint64_t clamped_ = 0;
};

}  // namespace streamcut
