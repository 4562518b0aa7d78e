// Command-line driver for the streaming metric max-cut library: instance
// generation, exact references, insertion-only and sliding-window runs, the
// adversarial demo, and parameter sweeps.

#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "streamcut/streamcut.hpp"

using namespace streamcut;
using nlohmann::json;

namespace {

struct RunOptions {
    std::string metric_path;
    std::string stream_path;
    double epsilon = 0.25;
    double delta = 0.0;  // 0 = derive from the metric file
    std::uint64_t capacity = 0;
    std::uint64_t window = 0;
    std::size_t samples = 0;
    int replicas = 9;
    std::uint64_t seed = 0;
    std::string coreset = "merge";
    std::string solver = "auto";
    std::string format = "csv";
    std::string out_path;
    bool with_exact = false;
    bool timing = false;
    bool raw_estimator = false;
};

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw ValidationError("cannot open output file: " + path);
    return file;
}

std::size_t solver_threshold(const std::string& solver) {
    if (solver == "auto") return 22;
    if (solver == "exact") return 30;  // forced exact; capped to keep runs bounded
    if (solver == "local") return 0;   // always local search
    throw ValidationError("unknown solver mode: " + solver);
}

EstimatorConfig estimator_config(const RunOptions& o, double delta, std::size_t n_insertions) {
    EstimatorConfig cfg;
    cfg.epsilon = o.epsilon;
    cfg.delta_max = std::max(1.0, delta);
    cfg.capacity = o.capacity ? o.capacity : n_insertions;
    cfg.samples = o.samples;
    cfg.replicas = o.replicas;
    cfg.seed = o.seed;
    cfg.exact_threshold = solver_threshold(o.solver);
    cfg.normalize = !o.raw_estimator;
    return cfg;
}

json config_json(const EstimatorConfig& cfg, const RunOptions& o) {
    const double coreset_eps = o.coreset == "exact" ? 0.0 : cfg.epsilon;
    return json{{"epsilon", cfg.epsilon},
                {"delta_max", cfg.delta_max},
                {"capacity", cfg.capacity},
                {"samples", cfg.resolved_samples()},
                {"replicas", cfg.replicas},
                {"seed", cfg.seed},
                {"coreset", o.coreset},
                {"solver", o.solver},
                {"normalized", cfg.normalize},
                {"sampling_k", sampling_constant(coreset_eps, cfg.delta_max, cfg.capacity)},
                {"lambda", cfg.lambda(coreset_eps)},
                {"theoretical_samples", cfg.theoretical_samples(coreset_eps)}};
}

json record_json(const RunRecord& r, bool timing) {
    json j{{"timestamp", r.timestamp},
           {"estimate", r.estimate},
           {"solver_mode", r.solver_mode},
           {"coreset_mode", r.coreset_mode},
           {"instances", r.instance_count},
           {"coreset_size", r.coreset_size}};
    if (r.exact) j["exact"] = *r.exact;
    if (auto q = r.ratio()) j["ratio"] = *q;
    if (timing) j["wall_ms"] = r.wall_ms;
    return j;
}

void emit(const RunOptions& o, const json& config, const std::vector<RunRecord>& records,
          const std::string& command) {
    std::ofstream file;
    std::ostream& out = open_output(file, o.out_path);
    if (o.format == "json") {
        json j{{"command", command}, {"config", config}};
        j["records"] = json::array();
        for (const RunRecord& r : records) j["records"].push_back(record_json(r, o.timing));
        out << j.dump(2) << "\n";
    } else if (o.format == "csv") {
        write_csv(out, records, o.timing);
    } else {
        throw ValidationError("unknown format: " + o.format);
    }
}

std::vector<PointId> inserted_points(const std::vector<StreamEvent>& events,
                                     DistanceOracle& oracle, bool allow_deletes) {
    std::vector<PointId> points;
    for (const StreamEvent& ev : events) {
        if (ev.kind == EventKind::Delete && !allow_deletes)
            throw ValidationError("stream contains deletions; this command is insertion-only");
        oracle.mark_seen(ev.point);
        if (ev.kind == EventKind::Insert) points.push_back(ev.point);
    }
    return points;
}

template <class Coreset>
RunRecord run_insertion_impl(const RunOptions& o, DistanceOracle& oracle,
                             const std::vector<StreamEvent>& events, EstimatorConfig cfg) {
    const auto start = std::chrono::steady_clock::now();
    AmplifiedEstimator<Coreset> amp(cfg);
    for (const StreamEvent& ev : events) {
        oracle.mark_seen(ev.point);
        if (ev.kind == EventKind::Delete)
            throw ValidationError("run-insertion: stream contains deletions");
        amp.ingest(ev.point, oracle);
    }
    RunRecord rec;
    rec.timestamp = events.size();
    rec.estimate = amp.finalize(oracle);
    rec.coreset_mode = Coreset::mode_name();
    rec.solver_mode = to_string(amp.replica_estimates(oracle).front().solver_mode);
    rec.coreset_size = amp.max_coreset_size();
    if (o.with_exact) {
        auto live = apply_stream(events);
        rec.exact = maxcut_exact(WeightedPointSet::unit(live), oracle).value;
    }
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                            start)
                      .count();
    return rec;
}

template <class Coreset>
std::vector<RunRecord> run_window_impl(const RunOptions& o, DistanceOracle& oracle,
                                       const std::vector<StreamEvent>& events,
                                       WindowConfig cfg) {
    std::vector<RunRecord> records;
    SlidingWindowEstimator<Coreset> win(cfg);
    std::vector<PointId> seen;
    for (const StreamEvent& ev : events) {
        const auto start = std::chrono::steady_clock::now();
        oracle.mark_seen(ev.point);
        if (ev.kind == EventKind::Delete)
            throw ValidationError("run-window: stream contains deletions");
        win.ingest(ev.point, oracle);
        seen.push_back(ev.point);
        RunRecord rec;
        rec.timestamp = win.events();
        rec.estimate = win.report(oracle);
        rec.coreset_mode = Coreset::mode_name();
        rec.solver_mode = "auto";
        rec.instance_count = win.live_instances();
        rec.coreset_size = win.max_coreset_size();
        if (o.with_exact) {
            const std::uint64_t ws = win.window_start();
            std::vector<PointId> window_pts(seen.begin() + static_cast<std::ptrdiff_t>(ws - 1),
                                            seen.end());
            rec.exact = maxcut_exact(WeightedPointSet::unit(window_pts), oracle).value;
        }
        rec.wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
        records.push_back(std::move(rec));
    }
    return records;
}

int cmd_gen(const std::string& kind, std::uint64_t n, std::uint64_t span, std::uint64_t centers,
            std::uint64_t per_cluster, std::uint64_t separation, std::size_t dim,
            std::uint64_t side, double delta, double k_param, std::uint64_t seed,
            const std::string& out_prefix) {
    GeneratedInstance gen;
    if (kind == "uniform_line") {
        gen = generate_uniform_line(n, span, seed);
    } else if (kind == "clusters") {
        gen = generate_clusters(centers, per_cluster, separation, seed);
    } else if (kind == "euclidean_cube") {
        gen = generate_euclidean_cube(n, dim, side, seed);
    } else if (kind == "adversarial") {
        const double d = delta > 0.0 ? delta : static_cast<double>(n) * static_cast<double>(n);
        gen = generate_adversarial(n, d, k_param != 0.0 ? k_param : d, seed);
    } else {
        throw ValidationError("unknown instance kind: " + kind);
    }

    std::ofstream metric(out_prefix + ".metric");
    if (!metric) throw ValidationError("cannot write " + out_prefix + ".metric");
    metric << gen.metric_text;
    std::ofstream stream(out_prefix + ".stream");
    if (!stream) throw ValidationError("cannot write " + out_prefix + ".stream");
    write_stream(stream, gen.events);
    if (gen.exact_maxcut) {
        std::ofstream truth(out_prefix + ".truth.json");
        truth << json{{"kind", gen.kind},
                      {"maxcut_exact", *gen.exact_maxcut},
                      {"delta_max", gen.delta_max},
                      {"seed", seed}}
                     .dump(2)
              << "\n";
    }
    std::cout << "wrote " << out_prefix << ".metric and " << out_prefix << ".stream ("
              << gen.events.size() << " events, delta " << fmt_double(gen.delta_max) << ")\n";
    return 0;
}

int cmd_exact(const RunOptions& o, std::size_t threshold) {
    LoadedMetric metric = load_metric_file(o.metric_path, true, o.delta);
    std::vector<PointId> live;
    if (o.stream_path.empty()) {
        live = metric.oracle->known_ids();
        metric.oracle->mark_all_seen();
    } else {
        auto events = parse_stream_file(o.stream_path);
        inserted_points(events, *metric.oracle, /*allow_deletes=*/true);
        live = apply_stream(events);
    }
    const CutResult r = maxcut_exact(WeightedPointSet::unit(live), *metric.oracle, threshold);
    std::cout << fmt_double(r.value) << "\n";
    return 0;
}

int cmd_verify(const RunOptions& o, std::size_t budget) {
    LoadedMetric metric = load_metric_file(o.metric_path, false, o.delta);
    auto report = verify_metric(*metric.oracle, metric.oracle->known_ids(), budget);
    if (report.valid) {
        std::cout << "valid: " << report.pairs_checked << " pairs, " << report.triples_checked
                  << " triples checked (delta " << fmt_double(metric.delta_max) << ")\n";
        return 0;
    }
    std::cout << "violation: " << report.violation->describe() << "\n";
    return 3;
}

int cmd_run_insertion(const RunOptions& o) {
    LoadedMetric metric = load_metric_file(o.metric_path, true, o.delta);
    auto events = parse_stream_file(o.stream_path);
    EstimatorConfig cfg = estimator_config(o, metric.delta_max, events.size());
    RunRecord rec;
    if (o.coreset == "exact")
        rec = run_insertion_impl<ExactPrefixCoreset>(o, *metric.oracle, events, cfg);
    else if (o.coreset == "merge")
        rec = run_insertion_impl<MergeReduceCoreset>(o, *metric.oracle, events, cfg);
    else
        throw ValidationError("unknown coreset mode: " + o.coreset);
    emit(o, config_json(cfg, o), {rec}, "run-insertion");
    return 0;
}

int cmd_run_window(const RunOptions& o) {
    if (o.window == 0) throw ValidationError("run-window: --window is required");
    LoadedMetric metric = load_metric_file(o.metric_path, true, o.delta);
    auto events = parse_stream_file(o.stream_path);
    WindowConfig cfg;
    cfg.epsilon = o.epsilon;
    cfg.window = o.window;
    cfg.capacity = o.capacity ? o.capacity : events.size();
    cfg.delta_max = std::max(1.0, metric.delta_max);
    cfg.samples = o.samples;
    cfg.replicas = o.replicas;
    cfg.seed = o.seed;
    cfg.exact_threshold = solver_threshold(o.solver);
    if (o.with_exact && o.window > 22)
        throw ValidationError("run-window: --exact needs a window of at most 22 points");
    std::vector<RunRecord> records;
    if (o.coreset == "exact")
        records = run_window_impl<ExactPrefixCoreset>(o, *metric.oracle, events, cfg);
    else if (o.coreset == "merge")
        records = run_window_impl<MergeReduceCoreset>(o, *metric.oracle, events, cfg);
    else
        throw ValidationError("unknown coreset mode: " + o.coreset);

    json cfg_json{{"epsilon", cfg.epsilon},      {"window", cfg.window},
                  {"capacity", cfg.capacity},    {"delta_max", cfg.delta_max},
                  {"samples", cfg.samples},      {"replicas", cfg.replicas},
                  {"seed", cfg.seed},            {"coreset", o.coreset},
                  {"instance_bound", cfg.instance_bound()}};
    emit(o, cfg_json, records, "run-window");
    return 0;
}

int cmd_adversary_demo(std::uint64_t n, double delta, std::uint64_t seed, const RunOptions& o) {
    const double d = delta > 0.0 ? delta : static_cast<double>(n) * static_cast<double>(n);
    EstimatorConfig cfg;
    cfg.epsilon = o.epsilon;
    cfg.delta_max = d;
    cfg.capacity = n;
    cfg.samples = o.samples ? o.samples : 32;
    cfg.replicas = 1;
    cfg.seed = o.seed;
    auto runs = adversary_demo<MergeReduceCoreset>(n, d, seed, cfg);
    std::cout << "adversarial instance: n=" << n << " delta=" << fmt_double(d) << " seed=" << seed
              << "\n";
    for (const DemoRun& run : runs) {
        std::cout << "  K=" << fmt_double(run.k)
                  << ": store-everything exact=" << fmt_double(run.store_everything_exact)
                  << "  insertion-stage estimate=" << fmt_double(run.insertion_stage_estimate)
                  << "  restarted-after-deletions estimate="
                  << fmt_double(run.post_deletion_estimate) << "\n";
    }
    std::cout << "only the store-everything path separates K=1 from K=Delta; the small-space\n"
                 "estimates stay put because the deletions erase what they learned.\n";
    return 0;
}

int cmd_bench(const RunOptions& o, const std::vector<double>& epsilons,
              const std::vector<std::size_t>& samples_list, const std::vector<int>& replicas_list,
              int seeds) {
    LoadedMetric metric = load_metric_file(o.metric_path, true, o.delta);
    auto events = parse_stream_file(o.stream_path);

    std::ofstream file;
    std::ostream& out = open_output(file, o.out_path);
    out << "epsilon,samples,replicas,seed,timestamp,estimate,exact,ratio,solver_mode,"
           "coreset_mode,instances,coreset_size";
    if (o.timing) out << ",wall_ms";
    out << "\n";
    for (double eps : epsilons) {
        for (std::size_t m : samples_list) {
            for (int reps : replicas_list) {
                for (int seed = 0; seed < seeds; ++seed) {
                    RunOptions ro = o;
                    ro.epsilon = eps;
                    ro.samples = m;
                    ro.replicas = reps;
                    ro.seed = derive_seed(o.seed, static_cast<std::uint64_t>(seed));
                    EstimatorConfig cfg = estimator_config(ro, metric.delta_max, events.size());
                    LoadedMetric fresh = load_metric_file(o.metric_path, true, o.delta);
                    RunRecord rec =
                        ro.coreset == "exact"
                            ? run_insertion_impl<ExactPrefixCoreset>(ro, *fresh.oracle, events,
                                                                     cfg)
                            : run_insertion_impl<MergeReduceCoreset>(ro, *fresh.oracle, events,
                                                                     cfg);
                    out << fmt_double(eps) << "," << m << "," << reps << "," << seed << ","
                        << rec.timestamp << "," << fmt_double(rec.estimate) << ",";
                    if (rec.exact) out << fmt_double(*rec.exact);
                    out << ",";
                    if (auto q = rec.ratio()) out << fmt_double(*q);
                    out << "," << rec.solver_mode << "," << rec.coreset_mode << ","
                        << rec.instance_count << "," << rec.coreset_size;
                    if (o.timing) out << "," << fmt_double(rec.wall_ms);
                    out << "\n";
                }
            }
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"streaming metric max-cut estimation"};
    app.require_subcommand(1);

    RunOptions o;
    std::string kind = "uniform_line", out_prefix = "instance";
    std::uint64_t n = 100, span = 100, centers = 2, per_cluster = 50, separation = 100, side = 10,
                  gen_seed = 0, demo_n = 64, demo_seed = 0;
    std::size_t dim = 2, exact_threshold = 22, verify_budget = 300;
    double k_param = 0.0, demo_delta = 0.0;
    std::vector<double> epsilons{0.1, 0.25};
    std::vector<std::size_t> samples_list{64};
    std::vector<int> replicas_list{1};
    int bench_seeds = 3;

    auto add_common = [&](CLI::App* cmd, bool with_stream = true) {
        cmd->add_option("--metric", o.metric_path, "metric file")->required();
        if (with_stream) cmd->add_option("--stream", o.stream_path, "stream file");
        cmd->add_option("--delta", o.delta, "override the aspect-ratio bound");
    };
    auto add_run = [&](CLI::App* cmd) {
        cmd->add_option("--epsilon", o.epsilon, "accuracy parameter");
        cmd->add_option("--capacity", o.capacity, "stream-length bound N (default: stream size)");
        cmd->add_option("--samples", o.samples, "sampler count m (0 = default)");
        cmd->add_option("--replicas", o.replicas, "median amplification replicas (odd)");
        cmd->add_option("--seed", o.seed, "master seed");
        cmd->add_option("--coreset", o.coreset, "coreset backend: merge|exact");
        cmd->add_option("--solver", o.solver, "sample evaluation: auto|exact|local");
        cmd->add_option("--format", o.format, "output format: csv|json");
        cmd->add_option("--out", o.out_path, "output file (default stdout)");
        cmd->add_flag("--exact", o.with_exact, "also compute the brute-force reference");
        cmd->add_flag("--timing", o.timing, "include wall-clock columns (breaks byte determinism)");
        cmd->add_flag("--raw-estimator", o.raw_estimator,
                      "use the uncalibrated Max-Cut(S)/m^2 estimate");
    };

    CLI::App* gen = app.add_subcommand("gen", "generate an instance");
    gen->add_option("--kind", kind, "uniform_line|clusters|euclidean_cube|adversarial");
    gen->add_option("--n", n, "point count (uniform_line, euclidean_cube, adversarial)");
    gen->add_option("--span", span, "coordinate span for uniform_line");
    gen->add_option("--clusters", centers, "cluster count");
    gen->add_option("--per-cluster", per_cluster, "points per cluster");
    gen->add_option("--separation", separation, "cluster separation");
    gen->add_option("--dim", dim, "dimension for euclidean_cube");
    gen->add_option("--side", side, "cube side for euclidean_cube");
    gen->add_option("--delta", o.delta, "Delta for adversarial (default n^2)");
    gen->add_option("--K", k_param, "K for adversarial: 1 or Delta (default Delta)");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--out", out_prefix, "output path prefix")->required();

    CLI::App* exact = app.add_subcommand("exact", "brute-force max-cut of the live point set");
    add_common(exact);
    exact->add_option("--threshold", exact_threshold, "exact enumeration limit");

    CLI::App* verify = app.add_subcommand("verify-metric", "exhaustive metric validity check");
    add_common(verify, false);
    verify->add_option("--budget", verify_budget, "enumeration budget (points)");

    CLI::App* runi = app.add_subcommand("run-insertion", "insertion-only estimate of a stream");
    add_common(runi);
    add_run(runi);

    CLI::App* runw = app.add_subcommand("run-window", "sliding-window estimates per timestamp");
    add_common(runw);
    add_run(runw);
    runw->add_option("--window", o.window, "window width")->required();

    CLI::App* demo = app.add_subcommand("adversary-demo", "hard dynamic-stream demonstration");
    demo->add_option("--n", demo_n, "instance size (perfect cube)");
    demo->add_option("--delta", demo_delta, "Delta (default n^2)");
    demo->add_option("--seed", demo_seed, "instance seed");
    demo->add_option("--samples", o.samples, "sampler count for the small-space path");
    demo->add_option("--epsilon", o.epsilon, "accuracy parameter");

    CLI::App* bench = app.add_subcommand("bench", "sweep epsilon, m, replicas; emit CSV");
    add_common(bench);
    bench->add_option("--epsilons", epsilons, "epsilon values");
    bench->add_option("--samples-list", samples_list, "sampler counts");
    bench->add_option("--replicas-list", replicas_list, "replica counts");
    bench->add_option("--seeds", bench_seeds, "seeds per configuration");
    bench->add_option("--seed", o.seed, "master seed");
    bench->add_option("--coreset", o.coreset, "coreset backend: merge|exact");
    bench->add_option("--out", o.out_path, "output file (default stdout)");
    bench->add_flag("--exact", o.with_exact, "also compute the brute-force reference");
    bench->add_flag("--timing", o.timing, "include wall-clock columns");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (gen->parsed())
            return cmd_gen(kind, n, span, centers, per_cluster, separation, dim, side, o.delta,
                           k_param, gen_seed, out_prefix);
        if (exact->parsed()) return cmd_exact(o, exact_threshold);
        if (verify->parsed()) return cmd_verify(o, verify_budget);
        if (runi->parsed()) return cmd_run_insertion(o);
        if (runw->parsed()) return cmd_run_window(o);
        if (demo->parsed()) return cmd_adversary_demo(demo_n, demo_delta, demo_seed, o);
        if (bench->parsed())
            return cmd_bench(o, epsilons, samples_list, replicas_list, bench_seeds);
    } catch (const QueryOnUnseenId& e) {
        std::cerr << "model violation: " << e.what() << "\n";
        return 4;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const InstanceTooLarge& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const EmptyStream& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
