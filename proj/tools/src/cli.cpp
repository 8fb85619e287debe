#include "netcp/cli.hpp"

#include "netcp/baselines.hpp"
#include "netcp/detect.hpp"
#include "netcp/error.hpp"
#include "netcp/evalkit.hpp"
#include "netcp/fit.hpp"
#include "netcp/graph.hpp"
#include "netcp/io.hpp"
#include "netcp/synth.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace netcp::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

/// Config problems found before any work starts.
struct UsageError : Error {
    using Error::Error;
};

struct InputOptions {
    std::string path;
    std::string gap_policy = "empty";
    bool timestamps = false;
    double bin_width = 0.0;
};

struct DetectOptions {
    std::size_t window = 4;
    double fp_rate = 0.05;
    std::size_t bootstrap = 1000;
    std::string method = "ghrg";
    std::uint64_t seed = 0;
    unsigned workers = 1;
    std::size_t burn_in = 200;
    std::size_t samples = 100;
    std::size_t interval = 5;
    std::size_t chains = 1;
    double anneal_start = 0.1;
    double anneal_fraction = 0.9;
    double alpha = 1.0;
    double beta = 1.0;
    std::string reset = "restart";
    bool posterior_draw = false;
};

struct SpecOptions {
    std::string kind = "split";
    std::optional<double> mu_before;
    std::optional<double> mu_after;
    std::size_t length = 12;
    TimeStep t_change = 8;
    std::size_t n = 30;
    double density = 0.2;
    std::size_t group_a = 0;
    double p_fix = -1.0;
};

std::string format_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

void add_input_flags(CLI::App* app, InputOptions& in) {
    app->add_option("-i,--input", in.path, "Edge list (t<TAB>u<TAB>v) or, with --timestamps, timed events")
        ->required();
    app->add_option("--gap-policy", in.gap_policy, "Missing time steps: empty or skip")
        ->check(CLI::IsMember({"empty", "skip"}))
        ->capture_default_str();
    app->add_flag("--timestamps", in.timestamps, "Input holds real-valued timestamps to bin");
    app->add_option("--bin-width", in.bin_width, "Bin width in seconds for --timestamps");
}

void add_fit_flags(CLI::App* app, DetectOptions& d) {
    app->add_option("--burn-in", d.burn_in, "Burn-in sweeps")->capture_default_str();
    app->add_option("--samples", d.samples, "Recorded dendrogram samples per chain")->capture_default_str();
    app->add_option("--interval", d.interval, "Sweeps between samples")->capture_default_str();
    app->add_option("--chains", d.chains, "Independent MCMC chains")->capture_default_str();
    app->add_option("--anneal-start", d.anneal_start, "Initial inverse temperature of the burn-in")
        ->capture_default_str();
    app->add_option("--anneal-fraction", d.anneal_fraction, "Share of burn-in spent cooling")->capture_default_str();
    app->add_option("--alpha", d.alpha, "Beta prior alpha")->capture_default_str();
    app->add_option("--beta", d.beta, "Beta prior beta")->capture_default_str();
    app->add_option("--seed", d.seed, "Root seed")->capture_default_str();
    app->add_option("--workers", d.workers, "Parallel workers; never changes results")->capture_default_str();
    app->add_option("--window", d.window, "Window length w")->capture_default_str();
}

void add_detect_flags(CLI::App* app, DetectOptions& d) {
    add_fit_flags(app, d);
    app->add_option("--fp-rate", d.fp_rate, "Target false-positive rate")->capture_default_str();
    app->add_option("--bootstrap", d.bootstrap, "Bootstrap replicates per window")->capture_default_str();
    app->add_option("--reset", d.reset, "After a detection: restart or slide")
        ->check(CLI::IsMember({"restart", "slide"}))
        ->capture_default_str();
    app->add_flag("--posterior-draw", d.posterior_draw, "Draw replicate probabilities from the posterior");
}

void add_spec_flags(CLI::App* app, SpecOptions& s) {
    app->add_option("--mu-before", s.mu_before, "Structural index before the change");
    app->add_option("--mu-after", s.mu_after, "Structural index after the change");
    app->add_option("--length", s.length, "Snapshots per sequence")->capture_default_str();
    app->add_option("--t-change", s.t_change, "First post-change time step")->capture_default_str();
    app->add_option("--n", s.n, "Vertices")->capture_default_str();
    app->add_option("--density", s.density, "Expected edge density")->capture_default_str();
    app->add_option("--group-a", s.group_a, "Size of group A (default n/2)");
    app->add_option("--p-fix", s.p_fix, "Group A probability for form/fragment (default: density)");
}

FitConfig make_fit(const DetectOptions& d) {
    FitConfig f;
    f.burn_in_sweeps = d.burn_in;
    f.n_samples = d.samples;
    f.sample_interval_sweeps = d.interval;
    f.chains = d.chains;
    f.anneal_start = d.anneal_start;
    f.anneal_fraction = d.anneal_fraction;
    f.seed = d.seed;
    return f;
}

DetectConfig make_detect(const DetectOptions& d) {
    DetectConfig c;
    c.w = d.window;
    c.fp_rate = d.fp_rate;
    c.n_bootstrap = d.bootstrap;
    c.fit = make_fit(d);
    c.prior = BetaParams{d.alpha, d.beta};
    c.reset_policy = d.reset == "slide" ? ResetPolicy::slide : ResetPolicy::restart_after_change;
    c.posterior_draw = d.posterior_draw;
    c.seed = d.seed;
    c.workers = d.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : d.workers;
    return c;
}

ChangeSpec make_spec(const SpecOptions& s, std::uint64_t seed) {
    ChangeSpec spec = ChangeSpec::for_delta(parse_change_kind(s.kind), 0.45);
    if (s.mu_before) {
        spec.mu_before = *s.mu_before;
    }
    if (s.mu_after) {
        spec.mu_after = *s.mu_after;
    }
    spec.length = s.length;
    spec.t_c = s.t_change;
    spec.n = s.n;
    spec.density = s.density;
    const std::size_t a = s.group_a == 0 ? s.n / 2 : s.group_a;
    if (a >= s.n) {
        throw UsageError("--group-a must be smaller than --n");
    }
    spec.groups = {a, s.n - a};
    spec.p_fix = s.p_fix;
    spec.seed = seed;
    return spec;
}

/// Runs `check`, turning InvalidArgument into a usage error.
template <class F>
void validate_usage(F&& check) {
    try {
        check();
    } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
    }
}

void validate_input(const InputOptions& in) {
    if (in.timestamps && !(in.bin_width > 0.0)) {
        throw UsageError("--timestamps needs a positive --bin-width");
    }
    if (!in.timestamps && in.bin_width != 0.0) {
        throw UsageError("--bin-width only applies with --timestamps");
    }
}

NetworkSequence load_sequence(const InputOptions& in) {
    std::ifstream file(in.path, std::ios::binary);
    if (!file) {
        throw Error("cannot open '" + in.path + "'");
    }
    if (in.timestamps) {
        const auto events = parse_timed_events(file);
        return aggregate_events(events, in.bin_width);
    }
    return parse_edge_list(file, in.gap_policy == "skip" ? GapPolicy::skip : GapPolicy::empty);
}

json load_json(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw Error("cannot open '" + path + "'");
    }
    try {
        return json::parse(file);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what(), 0);
    }
}

/// Writes to `path`, or to `out` when path is empty or "-".
template <class F>
void emit(const std::string& path, std::ostream& out, F&& write) {
    if (path.empty() || path == "-") {
        write(out);
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw Error("cannot write '" + path + "'");
    }
    write(file);
    file.flush();
    if (!file) {
        throw Error("error writing '" + path + "'");
    }
}

void emit_json(const std::string& path, std::ostream& out, const json& doc) {
    emit(path, out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
}

json detect_config_json(const DetectConfig& c, const std::string& method) {
    return json{{"method", method},
                {"window", c.w},
                {"fp_rate", c.fp_rate},
                {"bootstrap", c.n_bootstrap},
                {"seed", c.seed},
                {"burn_in", c.fit.burn_in_sweeps},
                {"samples", c.fit.n_samples},
                {"interval", c.fit.sample_interval_sweeps},
                {"chains", c.fit.chains},
                {"anneal_start", c.fit.anneal_start},
                {"anneal_fraction", c.fit.anneal_fraction},
                {"alpha", c.prior.alpha},
                {"beta", c.prior.beta},
                {"reset", c.reset_policy == ResetPolicy::slide ? "slide" : "restart"},
                {"posterior_draw", c.posterior_draw}};
}

// ---------------------------------------------------------------------------

int cmd_synth(const SpecOptions& s, std::uint64_t seed, const std::string& dir, std::ostream& out) {
    ChangeSpec spec;
    validate_usage([&] {
        spec = make_spec(s, seed);
        spec.validate();
    });
    const auto synthetic = generate_sequence(spec);
    fs::create_directories(dir);
    const fs::path root(dir);
    emit((root / "seq.tsv").string(), out, [&](std::ostream& os) { write_edge_list(synthetic.sequence, os); });
    emit_json((root / "truth.json").string(), out, ground_truth(spec, synthetic));
    emit((root / "events.csv").string(), out, [&](std::ostream& os) {
        os << "t,label\n" << synthetic.t_c << ',' << to_string(spec.kind) << '\n';
    });
    out << "wrote " << synthetic.sequence.size() << " snapshots to " << dir << '\n';
    return kExitOk;
}

int cmd_fit(const InputOptions& in, const DetectOptions& d, std::optional<TimeStep> tau, const std::string& output,
            std::ostream& out) {
    FitConfig fit;
    BetaParams prior{d.alpha, d.beta};
    validate_usage([&] {
        validate_input(in);
        fit = make_fit(d);
        fit.validate();
        if (!(prior.alpha > 0.0) || !(prior.beta > 0.0)) {
            throw InvalidArgument("--alpha and --beta must be positive");
        }
        if (d.window < 2) {
            throw InvalidArgument("--window must be at least 2");
        }
    });
    const auto seq = load_sequence(in);
    if (seq.empty()) {
        throw Error("input has no snapshots");
    }
    const TimeStep end = tau.value_or(seq[seq.size() - 1].time());
    const auto window = window_at(seq, end, d.window);
    const unsigned workers = make_detect(d).workers;
    const auto model = fit_ghrg(window, prior, fit, workers);
    emit_json(output, out, tree_document(make_tree_document(model, seq.labels(), window)));
    return kExitOk;
}

int cmd_detect(const InputOptions& in, const DetectOptions& d, const std::string& output, const std::string& trace,
               const std::string& series, bool progress, std::ostream& out, std::ostream& err) {
    DetectConfig cfg;
    validate_usage([&] {
        validate_input(in);
        cfg = make_detect(d);
        cfg.validate();
        const auto& methods = all_methods();
        if (std::find(methods.begin(), methods.end(), d.method) == methods.end()) {
            throw InvalidArgument("unknown method '" + d.method + "'");
        }
        if (!series.empty() && d.method == "ghrg") {
            throw InvalidArgument("--series applies to scalar methods only");
        }
    });
    const auto seq = load_sequence(in);
    ProgressFn report;
    if (progress) {
        report = [&err](const TraceRow& row, double seconds) {
            err << "tau=" << row.tau << " g=" << format_real(row.g_tau) << " p=" << format_real(row.p_value)
                << " seconds=" << format_real(seconds) << (row.detected ? " detected" : "") << '\n';
        };
    }
    const auto result = run_method(seq, d.method, cfg, report);
    for (const auto& w : result.warnings) {
        err << "warning: " << w << '\n';
    }

    json doc = detection_report(d.method, result.detections);
    doc["config"] = detect_config_json(cfg, d.method);
    doc["warnings"] = result.warnings;
    emit_json(output, out, doc);
    if (!trace.empty()) {
        emit(trace, out, [&](std::ostream& os) { write_trace_csv(result.trace, os); });
    }
    if (!series.empty()) {
        emit(series, out,
             [&](std::ostream& os) { write_series_csv(scalar_series(seq, parse_statistic(d.method)), os); });
    }
    if (!output.empty() && output != "-") {
        for (const auto& det : result.detections) {
            out << "t_d=" << det.t_d << " t_hat=" << to_string(det.t_hat_c) << " g=" << format_real(det.g_tau)
                << " p=" << format_real(det.p_value) << '\n';
        }
    }
    return kExitOk;
}

int cmd_eval(const std::string& detections, const std::string& events, int max_delay, std::string method,
             const std::string& output, std::ostream& out) {
    if (max_delay < 0) {
        throw UsageError("--max-delay must be non-negative");
    }
    const json report = load_json(detections);
    const auto found = parse_detection_report(report);
    if (method.empty()) {
        method = report.value("method", std::string("unknown"));
    }
    std::ifstream events_file(events, std::ios::binary);
    if (!events_file) {
        throw Error("cannot open '" + events + "'");
    }
    const auto truth = parse_events_csv(events_file);
    std::vector<double> estimates;
    for (const auto& det : found) {
        estimates.push_back(det.t_hat_c.value());
    }
    std::sort(estimates.begin(), estimates.end());
    emit(output, out, [&](std::ostream& os) {
        write_precision_recall_csv(estimates, truth.times, max_delay, method, os);
    });
    return kExitOk;
}

int cmd_sweep(const SpecOptions& s, const DetectOptions& d, const std::vector<std::string>& kinds,
              const std::vector<double>& deltas, std::size_t runs, const std::vector<std::string>& methods,
              const std::string& output, std::ostream& out) {
    SweepConfig cfg;
    validate_usage([&] {
        cfg.detect = make_detect(d);
        cfg.detect.validate();
        cfg.detect.workers = 1;
        cfg.workers = make_detect(d).workers;
        cfg.base = make_spec(s, d.seed);
        cfg.kinds.clear();
        for (const auto& k : kinds) {
            cfg.kinds.push_back(parse_change_kind(k));
        }
        cfg.delta_mu = deltas;
        cfg.runs = runs;
        cfg.methods = methods;
        const auto& known = all_methods();
        for (const auto& m : methods) {
            if (std::find(known.begin(), known.end(), m) == known.end()) {
                throw InvalidArgument("unknown method '" + m + "'");
            }
        }
        if (runs == 0) {
            throw InvalidArgument("--runs must be positive");
        }
        for (auto kind : cfg.kinds) {
            for (double delta : deltas) {
                ChangeSpec::for_delta(kind, delta).validate();
            }
        }
        cfg.seed = d.seed;
    });
    const auto rows = run_sweep(cfg);
    emit(output, out, [&](std::ostream& os) { write_sweep_csv(rows, os); });
    return kExitOk;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Online change-point detection in network sequences", "netcp"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Help for every subcommand");

    InputOptions input;
    DetectOptions det;
    SpecOptions spec;
    std::string output;

    auto* synth = app.add_subcommand("synth", "Generate a two-group sequence with one planted change");
    synth->add_option("--kind", spec.kind, "merge, split, form or fragment")
        ->check(CLI::IsMember({"merge", "split", "form", "fragment"}))
        ->capture_default_str();
    add_spec_flags(synth, spec);
    synth->add_option("--seed", det.seed, "Root seed")->capture_default_str();
    synth->add_option("-o,--output", output, "Output directory")->required();

    std::optional<TimeStep> tau;
    auto* fit = app.add_subcommand("fit", "Fit a GHRG to the window ending at --tau");
    add_input_flags(fit, input);
    add_fit_flags(fit, det);
    fit->add_option("--tau", tau, "Window end time (default: last snapshot)");
    fit->add_option("-o,--output", output, "Tree document path (default: stdout)");

    std::string trace;
    std::string series;
    bool progress = false;
    auto* detect = app.add_subcommand("detect", "Scan a sequence for change points");
    add_input_flags(detect, input);
    add_detect_flags(detect, det);
    detect->add_option("--method", det.method, "ghrg, degree, geodesic or clustering")->capture_default_str();
    detect->add_option("-o,--output", output, "Detection report path (default: stdout)");
    detect->add_option("--trace", trace, "Per-window trace CSV path");
    detect->add_option("--series", series, "Scalar statistic CSV path (baseline methods)");
    detect->add_flag("--progress", progress, "Print per-window timing to stderr");

    std::string detections_path;
    std::string events_path;
    int max_delay = 4;
    std::string method_label;
    auto* eval = app.add_subcommand("eval", "Delay-tolerant precision and recall of a detection report");
    eval->add_option("--detections", detections_path, "Detection report")->required();
    eval->add_option("--events", events_path, "Known events CSV (t,label)")->required();
    eval->add_option("--max-delay", max_delay, "Largest delay s")->capture_default_str();
    eval->add_option("--method", method_label, "Method label (default: from the report)");
    eval->add_option("-o,--output", output, "CSV path (default: stdout)");

    std::vector<std::string> kinds{"merge", "split", "form", "fragment"};
    std::vector<double> deltas{0.0, 0.1, 0.2, 0.3, 0.4, 0.45};
    std::size_t runs = 100;
    std::vector<std::string> methods = all_methods();
    auto* sweep = app.add_subcommand("sweep", "Error rates over change kinds and magnitudes");
    sweep->add_option("--kinds", kinds, "Change kinds")->delimiter(',')->capture_default_str();
    sweep->add_option("--delta-mu", deltas, "Change magnitudes")->delimiter(',')->capture_default_str();
    sweep->add_option("--runs", runs, "Runs per cell")->capture_default_str();
    sweep->add_option("--methods", methods, "Methods")->delimiter(',')->capture_default_str();
    add_detect_flags(sweep, det);
    add_spec_flags(sweep, spec);
    sweep->add_option("-o,--output", output, "CSV path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (synth->parsed()) {
            return cmd_synth(spec, det.seed, output, out);
        }
        if (fit->parsed()) {
            return cmd_fit(input, det, tau, output, out);
        }
        if (detect->parsed()) {
            return cmd_detect(input, det, output, trace, series, progress, out, err);
        }
        if (eval->parsed()) {
            return cmd_eval(detections_path, events_path, max_delay, method_label, output, out);
        }
        return cmd_sweep(spec, det, kinds, deltas, runs, methods, output, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\nRun with --help for usage.\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

} // namespace netcp::cli
