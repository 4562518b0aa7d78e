#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "streamcut/core.hpp"

namespace streamcut {

struct MetricConfig {
    /// Aspect-ratio bound: every non-zero distance lies in [1, delta_max].
    double delta_max = 1.0;
    /// When set, queries for ids that have not appeared in the stream fail
    /// with QueryOnUnseenId. Toggleable for debugging.
    bool enforce_seen = true;
};

/// Read-only metric access keyed by point ids. Thread-safe for concurrent
/// reads; mark_seen is only called by the stream coordinator between events,
/// never concurrently with distance queries.
class DistanceOracle {
public:
    explicit DistanceOracle(MetricConfig cfg) : cfg_(cfg) {}
    virtual ~DistanceOracle() = default;

    double distance(PointId a, PointId b) const {
        // mark_seen only admits ids the backend defines, so the seen check
        // subsumes the known check when enforcement is on.
        if (cfg_.enforce_seen) {
            if (!is_seen(a)) throw QueryOnUnseenId(a);
            if (!is_seen(b)) throw QueryOnUnseenId(b);
        } else {
            if (!knows(a)) throw QueryOnUnseenId(a);
            if (!knows(b)) throw QueryOnUnseenId(b);
        }
        return distance_impl(a, b);
    }

    void mark_seen(PointId p) {
        if (!knows(p))
            throw ValidationError("stream references id " + std::to_string(p.value) +
                                  " absent from the metric");
        if (p.value < kSeenDenseLimit) {
            if (seen_dense_.size() <= p.value) seen_dense_.resize(p.value + 1, 0);
            seen_dense_[p.value] = 1;
        } else {
            seen_.insert(p.value);
        }
    }

    void mark_all_seen() {
        for (PointId p : known_ids()) mark_seen(p);
    }

    bool is_seen(PointId p) const {
        if (p.value < seen_dense_.size()) return seen_dense_[p.value] != 0;
        if (p.value < kSeenDenseLimit) return false;
        return seen_.count(p.value) != 0;
    }

    const MetricConfig& config() const { return cfg_; }

    /// Every id the backend defines, in a backend-specific stable order.
    virtual std::vector<PointId> known_ids() const = 0;

    /// Whether the backend defines this id at all (independent of seen-ness).
    virtual bool knows(PointId p) const = 0;

protected:
    virtual double distance_impl(PointId a, PointId b) const = 0;

private:
    static constexpr std::uint64_t kSeenDenseLimit = 1u << 22;

    MetricConfig cfg_;
    std::vector<char> seen_dense_;
    std::unordered_set<std::uint64_t> seen_;
};

/// Explicit n-by-n distance matrix; ids are 0..n-1.
class MatrixOracle final : public DistanceOracle {
public:
    MatrixOracle(std::vector<double> entries, std::size_t n, MetricConfig cfg)
        : DistanceOracle(cfg), entries_(std::move(entries)), n_(n) {
        if (entries_.size() != n_ * n_)
            throw ValidationError("matrix oracle: expected n*n entries");
        for (std::size_t i = 0; i < n_; ++i) {
            if (entries_[i * n_ + i] != 0.0)
                throw ValidationError("matrix oracle: non-zero diagonal at row " +
                                      std::to_string(i));
            for (std::size_t j = 0; j < n_; ++j)
                if (entries_[i * n_ + j] < 0.0)
                    throw ValidationError("matrix oracle: negative entry");
        }
    }

    std::size_t point_count() const { return n_; }

    std::vector<PointId> known_ids() const override {
        std::vector<PointId> ids(n_);
        for (std::size_t i = 0; i < n_; ++i) ids[i] = PointId{i};
        return ids;
    }

    bool knows(PointId p) const override { return p.value < n_; }

protected:
    double distance_impl(PointId a, PointId b) const override {
        return entries_[a.value * n_ + b.value];
    }

private:
    std::vector<double> entries_;
    std::size_t n_;
};

/// Points with explicit coordinates; distance is l2.
class EuclideanOracle final : public DistanceOracle {
public:
    EuclideanOracle(std::size_t dim, MetricConfig cfg)
        : DistanceOracle(cfg), dim_(dim) {
        if (dim_ == 0) throw ValidationError("euclidean oracle: dim must be positive");
    }

    void add_point(PointId id, const std::vector<double>& coords) {
        if (coords.size() != dim_)
            throw ValidationError("euclidean oracle: wrong coordinate count for id " +
                                  std::to_string(id.value));
        if (index_.count(id.value))
            throw ValidationError("euclidean oracle: duplicate id " +
                                  std::to_string(id.value));
        index_.emplace(id.value, order_.size());
        // Dense side table for small ids; distance queries sit on the hot
        // path of every sampler step.
        if (id.value < kDenseLimit) {
            if (dense_.size() <= id.value) dense_.resize(id.value + 1, kAbsent);
            dense_[id.value] = order_.size();
        }
        order_.push_back(id);
        coords_.insert(coords_.end(), coords.begin(), coords.end());
    }

    std::size_t dim() const { return dim_; }

    std::vector<PointId> known_ids() const override { return order_; }

    bool knows(PointId p) const override {
        if (p.value < dense_.size()) return dense_[p.value] != kAbsent;
        if (p.value < kDenseLimit) return false;
        return index_.count(p.value) != 0;
    }

protected:
    double distance_impl(PointId a, PointId b) const override {
        const double* pa = &coords_[resolve(a) * dim_];
        const double* pb = &coords_[resolve(b) * dim_];
        double acc = 0.0;
        for (std::size_t k = 0; k < dim_; ++k) {
            const double d = pa[k] - pb[k];
            acc += d * d;
        }
        return std::sqrt(acc);
    }

private:
    static constexpr std::uint64_t kDenseLimit = 1u << 22;
    static constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);

    std::size_t resolve(PointId p) const {
        if (p.value < dense_.size()) {
            const std::size_t i = dense_[p.value];
            if (i != kAbsent) return i;
        }
        return index_.at(p.value);
    }

    std::size_t dim_;
    std::vector<PointId> order_;
    std::vector<double> coords_;
    std::vector<std::size_t> dense_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

struct MetricViolation {
    enum class Kind { Symmetry, Diagonal, Negative, Band, Triangle };
    Kind kind{};
    PointId a, b, c;  // c only used for Triangle
    double lhs = 0.0, rhs = 0.0;

    std::string describe() const {
        std::ostringstream os;
        switch (kind) {
            case Kind::Symmetry:
                os << "asymmetric pair (" << a.value << "," << b.value << "): "
                   << lhs << " vs " << rhs;
                break;
            case Kind::Diagonal:
                os << "non-zero self distance at " << a.value << ": " << lhs;
                break;
            case Kind::Negative:
                os << "negative distance (" << a.value << "," << b.value << "): " << lhs;
                break;
            case Kind::Band:
                os << "non-zero distance outside [1, delta] at (" << a.value << ","
                   << b.value << "): " << lhs << " with delta " << rhs;
                break;
            case Kind::Triangle:
                os << "triangle violation (" << a.value << "," << b.value << ","
                   << c.value << "): " << lhs << " > " << rhs;
                break;
        }
        return os.str();
    }
};

struct MetricReport {
    bool valid = true;
    std::optional<MetricViolation> violation;
    std::uint64_t pairs_checked = 0;
    std::uint64_t triples_checked = 0;
};

/// Exhaustive O(n^3) validity check: symmetry, zero diagonal, non-negativity,
/// the [1, delta] band for non-zero distances, and the triangle inequality.
/// Stops at the first violation.
inline MetricReport verify_metric(const DistanceOracle& oracle,
                                  const std::vector<PointId>& ids,
                                  std::size_t enumeration_budget = 300) {
    if (ids.size() > enumeration_budget)
        throw ValidationError("verify_metric: instance exceeds enumeration budget of " +
                              std::to_string(enumeration_budget) + " points");
    const std::size_t n = ids.size();
    const double delta = oracle.config().delta_max;
    std::vector<double> d(n * n, 0.0);
    MetricReport report;

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) d[i * n + j] = oracle.distance(ids[i], ids[j]);

    auto fail = [&](MetricViolation v) {
        report.valid = false;
        report.violation = v;
        return report;
    };

    for (std::size_t i = 0; i < n; ++i) {
        if (d[i * n + i] != 0.0)
            return fail({MetricViolation::Kind::Diagonal, ids[i], ids[i], {}, d[i * n + i], 0});
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dij = d[i * n + j];
            const double dji = d[j * n + i];
            ++report.pairs_checked;
            if (dij < 0.0)
                return fail({MetricViolation::Kind::Negative, ids[i], ids[j], {}, dij, 0});
            const double tol = 1e-9 * std::max(1.0, std::max(dij, dji));
            if (std::abs(dij - dji) > tol)
                return fail({MetricViolation::Kind::Symmetry, ids[i], ids[j], {}, dij, dji});
            if (dij != 0.0 && (dij < 1.0 - 1e-9 || dij > delta * (1.0 + 1e-9)))
                return fail({MetricViolation::Kind::Band, ids[i], ids[j], {}, dij, delta});
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                ++report.triples_checked;
                const double lhs = d[i * n + k];
                const double rhs = d[i * n + j] + d[j * n + k];
                if (lhs > rhs + 1e-9 * std::max(1.0, lhs))
                    return fail({MetricViolation::Kind::Triangle, ids[i], ids[j], ids[k], lhs, rhs});
            }
        }
    }
    return report;
}

}  // namespace streamcut
