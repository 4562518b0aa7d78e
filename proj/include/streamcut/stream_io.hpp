#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "streamcut/adversary.hpp"
#include "streamcut/core.hpp"
#include "streamcut/metric.hpp"
#include "streamcut/random.hpp"

namespace streamcut {

inline std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Metric files. Line 1 selects the backend:
//   euclidean <dim>            then one "<id> <x1> ... <xdim>" line per point
//   matrix <n>                 then n whitespace-separated rows
//   adversarial <n> <Delta> <K> <seed>
// ---------------------------------------------------------------------------

struct LoadedMetric {
    std::unique_ptr<DistanceOracle> oracle;
    std::string kind;
    double delta_max = 1.0;
};

inline LoadedMetric load_metric(std::istream& in, bool enforce_seen = true,
                                double delta_override = 0.0) {
    std::string kind;
    if (!(in >> kind)) throw ValidationError("metric file: missing header");
    LoadedMetric out;
    out.kind = kind;

    if (kind == "euclidean") {
        std::size_t dim = 0;
        if (!(in >> dim) || dim == 0)
            throw ValidationError("metric file: euclidean header needs a positive dim");
        std::vector<std::uint64_t> ids;
        std::vector<double> coords;
        std::uint64_t id;
        while (in >> id) {
            ids.push_back(id);
            for (std::size_t k = 0; k < dim; ++k) {
                double x;
                if (!(in >> x))
                    throw ValidationError("metric file: truncated coordinates for id " +
                                          std::to_string(id));
                coords.push_back(x);
            }
        }
        if (ids.empty()) throw ValidationError("metric file: no points");
        // Bounding-box diagonal is a cheap upper bound for the aspect ratio.
        double diag = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            double lo = coords[k], hi = coords[k];
            for (std::size_t i = 1; i < ids.size(); ++i) {
                lo = std::min(lo, coords[i * dim + k]);
                hi = std::max(hi, coords[i * dim + k]);
            }
            diag += (hi - lo) * (hi - lo);
        }
        out.delta_max = delta_override > 0.0 ? delta_override : std::max(1.0, std::sqrt(diag));
        MetricConfig cfg{out.delta_max, enforce_seen};
        auto oracle = std::make_unique<EuclideanOracle>(dim, cfg);
        for (std::size_t i = 0; i < ids.size(); ++i)
            oracle->add_point(PointId{ids[i]},
                              {coords.begin() + static_cast<std::ptrdiff_t>(i * dim),
                               coords.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim)});
        out.oracle = std::move(oracle);
        return out;
    }

    if (kind == "matrix") {
        std::size_t n = 0;
        if (!(in >> n) || n == 0)
            throw ValidationError("metric file: matrix header needs a positive n");
        std::vector<double> entries(n * n);
        double max_entry = 1.0;
        for (auto& e : entries) {
            if (!(in >> e)) throw ValidationError("metric file: truncated matrix");
            max_entry = std::max(max_entry, e);
        }
        out.delta_max = delta_override > 0.0 ? delta_override : max_entry;
        out.oracle = std::make_unique<MatrixOracle>(std::move(entries), n,
                                                    MetricConfig{out.delta_max, enforce_seen});
        return out;
    }

    if (kind == "adversarial") {
        std::uint64_t n = 0, seed = 0;
        double delta = 0.0, k = 0.0;
        if (!(in >> n >> delta >> k >> seed))
            throw ValidationError("metric file: adversarial header needs n, Delta, K, seed");
        HardStream hs = hard_instance(n, delta, k, seed, enforce_seen);
        out.delta_max = delta;
        out.oracle = std::move(hs.oracle);
        return out;
    }

    throw ValidationError("metric file: unknown backend '" + kind + "'");
}

inline LoadedMetric load_metric_file(const std::string& path, bool enforce_seen = true,
                                     double delta_override = 0.0) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open metric file: " + path);
    return load_metric(in, enforce_seen, delta_override);
}

// ---------------------------------------------------------------------------
// Stream files: one "+ <id>" or "- <id>" per line. Blank lines and lines
// starting with '#' are ignored on input and never emitted.
// ---------------------------------------------------------------------------

inline std::vector<StreamEvent> parse_stream(std::istream& in) {
    std::vector<StreamEvent> events;
    std::unordered_set<std::uint64_t> live;
    std::string line;
    std::uint64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string op;
        if (!(ls >> op) || op[0] == '#') continue;
        std::uint64_t id;
        std::string extra;
        if ((op != "+" && op != "-") || !(ls >> id) || (ls >> extra))
            throw ValidationError("stream file line " + std::to_string(line_no) +
                                  ": expected '+ <id>' or '- <id>'");
        if (op == "+") {
            if (!live.insert(id).second)
                throw ValidationError("stream file line " + std::to_string(line_no) +
                                      ": id " + std::to_string(id) + " is already live");
            events.push_back({EventKind::Insert, PointId{id},
                              static_cast<std::uint64_t>(events.size() + 1)});
        } else {
            if (live.erase(id) == 0)
                throw ValidationError("stream file line " + std::to_string(line_no) +
                                      ": delete of id " + std::to_string(id) +
                                      " that is not live");
            events.push_back({EventKind::Delete, PointId{id},
                              static_cast<std::uint64_t>(events.size() + 1)});
        }
    }
    return events;
}

inline std::vector<StreamEvent> parse_stream_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open stream file: " + path);
    return parse_stream(in);
}

inline void write_stream(std::ostream& out, const std::vector<StreamEvent>& events) {
    for (const StreamEvent& ev : events)
        out << (ev.kind == EventKind::Insert ? "+ " : "- ") << ev.point.value << "\n";
}

/// Final live multiset after applying the whole event sequence.
inline std::vector<PointId> apply_stream(const std::vector<StreamEvent>& events) {
    std::vector<PointId> live;
    for (const StreamEvent& ev : events) {
        if (ev.kind == EventKind::Insert) {
            live.push_back(ev.point);
        } else {
            for (std::size_t i = 0; i < live.size(); ++i) {
                if (live[i] == ev.point) {
                    live.erase(live.begin() + static_cast<std::ptrdiff_t>(i));
                    break;
                }
            }
        }
    }
    return live;
}

// ---------------------------------------------------------------------------
// Instance generators. Deterministic per seed; integer coordinates keep every
// non-zero distance at least 1, so the declared aspect bound is honest.
// ---------------------------------------------------------------------------

struct GeneratedInstance {
    std::string kind;
    std::string metric_text;
    std::vector<StreamEvent> events;
    double delta_max = 1.0;
    std::optional<double> exact_maxcut;  // closed-form truth when known
};

inline GeneratedInstance generate_uniform_line(std::uint64_t n, std::uint64_t span,
                                               std::uint64_t seed) {
    if (n == 0 || span == 0) throw ValidationError("uniform_line: n and span must be positive");
    Rng rng(derive_seed(seed, 0x11e3ULL));
    GeneratedInstance out;
    out.kind = "uniform_line";
    out.delta_max = static_cast<double>(span);
    std::ostringstream metric;
    metric << "euclidean 1\n";
    for (std::uint64_t i = 0; i < n; ++i) {
        metric << i << " " << rng.next_below(span + 1) << "\n";
        out.events.push_back({EventKind::Insert, PointId{i}, i + 1});
    }
    out.metric_text = metric.str();
    return out;
}

inline GeneratedInstance generate_clusters(std::uint64_t centers, std::uint64_t per_cluster,
                                           std::uint64_t separation, std::uint64_t seed) {
    if (centers < 1 || per_cluster < 1 || separation < 1)
        throw ValidationError("clusters: centers, per-cluster count and separation must be positive");
    Rng rng(derive_seed(seed, 0xc105ULL));
    GeneratedInstance out;
    out.kind = "clusters";
    out.delta_max = static_cast<double>((centers - 1) * separation);
    if (centers == 1) out.delta_max = 1.0;
    std::ostringstream metric;
    metric << "euclidean 1\n";
    std::vector<PointId> order;
    for (std::uint64_t c = 0; c < centers; ++c) {
        for (std::uint64_t i = 0; i < per_cluster; ++i) {
            const std::uint64_t id = c * per_cluster + i;
            metric << id << " " << c * separation << "\n";
            order.push_back(PointId{id});
        }
    }
    rng.shuffle(order.begin(), order.end());
    for (std::size_t i = 0; i < order.size(); ++i)
        out.events.push_back({EventKind::Insert, order[i], i + 1});
    out.metric_text = metric.str();
    if (centers == 2) {
        // The optimal cut separates the clusters: |A| * |B| * separation.
        out.exact_maxcut = static_cast<double>(per_cluster) * static_cast<double>(per_cluster) *
                           static_cast<double>(separation);
    }
    return out;
}

inline GeneratedInstance generate_euclidean_cube(std::uint64_t n, std::size_t dim,
                                                 std::uint64_t side, std::uint64_t seed) {
    if (n == 0 || dim == 0 || side == 0)
        throw ValidationError("euclidean_cube: n, dim and side must be positive");
    Rng rng(derive_seed(seed, 0xc47eULL));
    GeneratedInstance out;
    out.kind = "euclidean_cube";
    out.delta_max = std::sqrt(static_cast<double>(dim)) * static_cast<double>(side);
    std::ostringstream metric;
    metric << "euclidean " << dim << "\n";
    for (std::uint64_t i = 0; i < n; ++i) {
        metric << i;
        for (std::size_t k = 0; k < dim; ++k) metric << " " << rng.next_below(side + 1);
        metric << "\n";
        out.events.push_back({EventKind::Insert, PointId{i}, i + 1});
    }
    out.metric_text = metric.str();
    return out;
}

inline GeneratedInstance generate_adversarial(std::uint64_t n, double delta, double k,
                                              std::uint64_t seed) {
    HardStream hs = hard_instance(n, delta, k, seed);
    GeneratedInstance out;
    out.kind = "adversarial";
    out.delta_max = delta;
    std::ostringstream metric;
    metric << "adversarial " << n << " " << fmt_double(delta) << " " << fmt_double(k) << " "
           << seed << "\n";
    out.metric_text = metric.str();
    out.events = std::move(hs.events);
    for (PointId p : hs.instance.survivors()) hs.oracle->mark_seen(p);
    out.exact_maxcut = hard_instance_gap(hs.instance, *hs.oracle).exact;
    return out;
}

// ---------------------------------------------------------------------------
// Run records and emission.
// ---------------------------------------------------------------------------

struct RunRecord {
    std::uint64_t timestamp = 0;
    double estimate = 0.0;
    std::optional<double> exact;
    std::string solver_mode;
    std::string coreset_mode;
    std::uint64_t instance_count = 0;  // live histogram instances; 0 for insertion runs
    std::uint64_t coreset_size = 0;    // max live coreset size across samplers
    double wall_ms = 0.0;              // emitted only when timing is requested

    std::optional<double> ratio() const {
        if (!exact || !(*exact > 0.0) || !(estimate > 0.0)) return std::nullopt;
        return std::max(estimate, *exact) / std::min(estimate, *exact);
    }
};

inline void write_csv(std::ostream& out, const std::vector<RunRecord>& records,
                      bool with_timing = false) {
    out << "timestamp,estimate,exact,ratio,solver_mode,coreset_mode,instances,coreset_size";
    if (with_timing) out << ",wall_ms";
    out << "\n";
    for (const RunRecord& r : records) {
        out << r.timestamp << "," << fmt_double(r.estimate) << ",";
        if (r.exact) out << fmt_double(*r.exact);
        out << ",";
        if (auto q = r.ratio()) out << fmt_double(*q);
        out << "," << r.solver_mode << "," << r.coreset_mode << "," << r.instance_count << ","
            << r.coreset_size;
        if (with_timing) out << "," << fmt_double(r.wall_ms);
        out << "\n";
    }
}

}  // namespace streamcut
