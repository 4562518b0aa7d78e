#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include "streamcut/core.hpp"
#include "streamcut/cut.hpp"
#include "streamcut/estimator.hpp"
#include "streamcut/metric.hpp"
#include "streamcut/random.hpp"

namespace streamcut {

/// The hard dynamic-stream family: an r^2 x r grid of points (r = n^(1/3)),
/// rows are tight clusters at pairwise distance 1, distinct rows are Delta
/// apart, and one secret point (i*, j*) sits at distance K from the rest of
/// its row, K in {1, Delta}. Ids are (i, j, a_ij) with a uniform bit a_ij;
/// flipping the bit yields an invalid id.
struct HardInstance {
    std::uint64_t n = 0;
    std::uint64_t r = 0;  // n^(1/3); rows = r^2, columns = r
    double delta = 0.0;
    double k = 0.0;
    std::uint64_t i_star = 0;  // 1-based row
    std::uint64_t j_star = 0;  // 1-based column
    std::uint64_t seed = 0;
    std::vector<std::uint8_t> id_bits;  // a[i][j], row-major, (r^2) x r

    std::uint8_t bit(std::uint64_t i, std::uint64_t j) const {
        return id_bits[(i - 1) * r + (j - 1)];
    }

    static std::uint64_t pack(std::uint64_t i, std::uint64_t j, std::uint8_t a) {
        return (i << 21) | (j << 1) | a;
    }

    PointId id_of(std::uint64_t i, std::uint64_t j) const {
        return PointId{pack(i, j, bit(i, j))};
    }

    std::vector<PointId> survivors() const {
        std::vector<PointId> out;
        out.reserve(r);
        for (std::uint64_t j = 1; j <= r; ++j) out.push_back(id_of(i_star, j));
        return out;
    }
};

class AdversarialOracle final : public DistanceOracle {
public:
    AdversarialOracle(HardInstance inst, MetricConfig cfg)
        : DistanceOracle(cfg), inst_(std::move(inst)) {}

    const HardInstance& instance() const { return inst_; }

    std::vector<PointId> known_ids() const override {
        std::vector<PointId> ids;
        ids.reserve(inst_.r * inst_.r * inst_.r);
        for (std::uint64_t i = 1; i <= inst_.r * inst_.r; ++i)
            for (std::uint64_t j = 1; j <= inst_.r; ++j) ids.push_back(inst_.id_of(i, j));
        return ids;
    }

    bool knows(PointId p) const override {
        std::uint64_t i, j;
        return unpack(p, i, j);
    }

protected:
    double distance_impl(PointId a, PointId b) const override {
        std::uint64_t ia, ja, ib, jb;
        if (!unpack(a, ia, ja)) throw QueryOnUnseenId(a);
        if (!unpack(b, ib, jb)) throw QueryOnUnseenId(b);
        if (ia == ib && ja == jb) return 0.0;
        if (ia != ib) return inst_.delta;
        const bool touches_star = (ia == inst_.i_star && ja == inst_.j_star) ||
                                  (ib == inst_.i_star && jb == inst_.j_star);
        return touches_star ? inst_.k : 1.0;
    }

private:
    /// Decodes and validates an id; ids with the flipped bit are invalid.
    bool unpack(PointId p, std::uint64_t& i, std::uint64_t& j) const {
        const std::uint64_t v = p.value;
        i = v >> 21;
        j = (v >> 1) & ((1ULL << 20) - 1);
        const auto a = static_cast<std::uint8_t>(v & 1ULL);
        if (i < 1 || i > inst_.r * inst_.r || j < 1 || j > inst_.r) return false;
        return a == inst_.bit(i, j);
    }

    HardInstance inst_;
};

struct HardStream {
    HardInstance instance;
    std::unique_ptr<AdversarialOracle> oracle;
    std::vector<StreamEvent> events;  // insertions column by column, then deletions
    std::size_t insertion_count = 0;
};

inline std::uint64_t cube_root_exact(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::llround(std::cbrt(static_cast<double>(n))));
    for (std::uint64_t c : {r - 1, r, r + 1})
        if (c >= 1 && c * c * c == n) return c;
    return 0;
}

/// Builds the instance, its oracle, and the dynamic stream: insert columns
/// C_1..C_r in row order, then delete everything outside row i* in a seeded
/// shuffle ("arbitrary order").
inline HardStream hard_instance(std::uint64_t n, double delta, double k, std::uint64_t seed,
                                bool enforce_seen = true) {
    const std::uint64_t r = cube_root_exact(n);
    if (r < 2) throw ValidationError("hard instance: n must be a perfect cube >= 8");
    if (delta < static_cast<double>(r))
        throw ValidationError("hard instance: Delta must be >= n^(1/3)");
    if (k != 1.0 && k != delta)
        throw ValidationError("hard instance: K must be 1 or Delta");

    HardInstance inst;
    inst.n = n;
    inst.r = r;
    inst.delta = delta;
    inst.k = k;
    inst.seed = seed;
    Rng rng(derive_seed(seed, 0xad3eULL));
    inst.id_bits.resize(r * r * r);
    for (auto& b : inst.id_bits) b = static_cast<std::uint8_t>(rng.next_u64() & 1ULL);
    inst.i_star = 1 + rng.next_below(r * r);
    inst.j_star = 1 + rng.next_below(r);

    HardStream out;
    out.events.reserve(2 * n);
    std::uint64_t ts = 0;
    for (std::uint64_t j = 1; j <= r; ++j)
        for (std::uint64_t i = 1; i <= r * r; ++i)
            out.events.push_back({EventKind::Insert, inst.id_of(i, j), ++ts});
    out.insertion_count = out.events.size();

    std::vector<PointId> doomed;
    doomed.reserve(n - r);
    for (std::uint64_t i = 1; i <= r * r; ++i) {
        if (i == inst.i_star) continue;
        for (std::uint64_t j = 1; j <= r; ++j) doomed.push_back(inst.id_of(i, j));
    }
    rng.shuffle(doomed.begin(), doomed.end());
    for (PointId p : doomed) out.events.push_back({EventKind::Delete, p, ++ts});

    MetricConfig mc;
    mc.delta_max = delta;
    mc.enforce_seen = enforce_seen;
    out.oracle = std::make_unique<AdversarialOracle>(inst, mc);
    out.instance = std::move(inst);
    return out;
}

struct GapResult {
    double lower_bound = 0.0;  // Delta*(r-1) when K = Delta, else the 1/4 sandwich
    double upper_bound = 0.0;  // n^(2/3)/2 when K = 1, else the 1/2 sandwich
    double exact = 0.0;        // brute-force Max-Cut of the surviving row
};

inline GapResult hard_instance_gap(const HardInstance& inst, const DistanceOracle& oracle,
                                   std::size_t exact_threshold = 22) {
    const auto r = static_cast<double>(inst.r);
    if (inst.r > exact_threshold)
        throw InstanceTooLarge("hard instance gap: surviving row exceeds the exact threshold");
    GapResult gap;
    const double pair_sum = inst.k * (r - 1.0) + (r - 1.0) * (r - 2.0) / 2.0;
    gap.lower_bound = 0.5 * pair_sum;  // quarter of cut(S,S)
    gap.upper_bound = pair_sum;        // half of cut(S,S)
    if (inst.k == inst.delta)
        gap.lower_bound = std::max(gap.lower_bound, inst.delta * (r - 1.0));
    if (inst.k == 1.0)
        gap.upper_bound = std::min(gap.upper_bound, r * r / 2.0);

    const CutResult cut =
        maxcut_exact(WeightedPointSet::unit(inst.survivors()), oracle, exact_threshold);
    gap.exact = cut.value;
    return gap;
}

struct DemoRun {
    double k = 0.0;
    double store_everything_exact = 0.0;   // Omega(n)-space path
    double insertion_stage_estimate = 0.0; // small-space estimate before deletions
    double post_deletion_estimate = 0.0;   // estimator restarted at the deletion stage
};

/// Empirical illustration of the dynamic-stream hardness: runs the same
/// seeded instance with K = 1 and K = Delta. The store-everything path
/// recovers the true gap; the insertion-only estimator (and its restart at
/// the deletion boundary, which never sees another insertion) does not
/// separate the two cases.
template <class Coreset>
inline std::vector<DemoRun> adversary_demo(std::uint64_t n, double delta, std::uint64_t seed,
                                           EstimatorConfig base_cfg) {
    std::vector<DemoRun> runs;
    for (double k : {1.0, delta}) {
        HardStream hs = hard_instance(n, delta, k, seed);
        DemoRun run;
        run.k = k;

        EstimatorConfig cfg = base_cfg;
        cfg.delta_max = delta;
        cfg.capacity = std::max<std::uint64_t>(cfg.capacity, n);
        cfg.seed = derive_seed(seed, 0xde30ULL);
        MaxCutEstimator<Coreset> full(cfg);
        bool restarted = false;
        MaxCutEstimator<Coreset> restart(cfg);
        for (const StreamEvent& ev : hs.events) {
            if (ev.kind == EventKind::Insert) {
                hs.oracle->mark_seen(ev.point);
                full.ingest(ev.point, *hs.oracle);
                if (restarted) restart.ingest(ev.point, *hs.oracle);
            } else {
                restarted = true;  // deletions begin; the fresh run sees nothing after
            }
        }
        run.insertion_stage_estimate = full.finalize(*hs.oracle).value;
        run.post_deletion_estimate = restart.events() == 0 ? 0.0 : restart.finalize(*hs.oracle).value;
        run.store_everything_exact = hard_instance_gap(hs.instance, *hs.oracle).exact;
        runs.push_back(run);
    }
    return runs;
}

}  // namespace streamcut
