// Acceptance suite: one pass/fail line per criterion.
#include "generators.hpp"
#include "oracles.hpp"

#include "netcp/baselines.hpp"
#include "netcp/cli.hpp"
#include "netcp/evalkit.hpp"
#include "netcp/fit.hpp"
#include "netcp/ghrg.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

using namespace netcp;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

struct Settings {
    unsigned workers = 4;
    std::string fixtures;
};

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

/// Per-node Beta integrals of the Bernoulli likelihood against Beta(1, 1).
Verdict marginal_oracle(const Settings&) {
    Rng rng(1001);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + uniform_index(rng, 7);
        const auto tree = testgen::random_dendrogram(n, rng);
        const auto g = oracle::random_graph(n, uniform01(rng), rng);
        const auto naive = oracle::naive_counts(tree, g);
        double expected = 0.0;
        for (std::size_t k = 0; k < naive.edges.size(); ++k) {
            expected += oracle::log_beta_integral(naive.edges[k], naive.pairs[k], 1.0, 1.0);
        }
        worst = std::max(worst, std::abs(log_marginal(tree, count_pairs(tree, g), BetaParams{1.0, 1.0}) - expected));
    }
    return {worst <= 1e-6, fmt("max |error| = %.3g over 100 pairs (tolerance 1e-6)", worst)};
}

Verdict pair_conservation(const Settings&) {
    Rng rng(1002);
    int violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + uniform_index(rng, 40);
        const auto tree = testgen::random_dendrogram(n, rng);
        const auto g = oracle::random_graph(n, uniform01(rng), rng);
        const auto counts = count_pairs(tree, g);
        std::int64_t pairs = 0;
        std::int64_t edges = 0;
        for (std::size_t k = 0; k < counts.size(); ++k) {
            pairs += counts.pairs[k];
            edges += counts.edges[k];
        }
        const auto all = static_cast<std::int64_t>(n * (n - 1) / 2);
        violations += (pairs != all || edges != static_cast<std::int64_t>(g.edge_count())) ? 1 : 0;
    }
    return {violations == 0, fmt("%d of 1000 trees violate conservation", violations)};
}

std::vector<std::uint32_t> topology_key(const std::vector<LeafSet>& clades) {
    auto masks = testgen::masks_of(clades);
    std::sort(masks.begin(), masks.end());
    return masks;
}

Verdict mcmc_stationarity(const Settings&) {
    const std::size_t n = 4;
    const auto window = testgen::make_window({GraphSnapshot(0, n, {{0, 1}, {2, 3}}),
                                              GraphSnapshot(1, n, {{0, 1}, {0, 2}}),
                                              GraphSnapshot(2, n, {{0, 1}, {2, 3}, {1, 3}})});
    const auto topologies = oracle::enumerate_binary_topologies(n);
    std::map<std::vector<std::uint32_t>, double> target;
    double max_score = -1e300;
    std::vector<double> scores;
    for (const auto& masks : topologies) {
        std::vector<LeafSet> clades;
        for (auto m : masks) {
            LeafSet s(n);
            for (std::size_t v = 0; v < n; ++v) {
                if (m >> v & 1U) {
                    s.insert(v);
                }
            }
            clades.push_back(s);
        }
        const auto tree = Dendrogram::from_clades(n, clades);
        double score = 0.0;
        std::vector<std::int64_t> edges(tree.internal_count(), 0);
        std::vector<std::int64_t> pairs(tree.internal_count(), 0);
        for (const auto& g : window.snapshots()) {
            const auto c = oracle::naive_counts(tree, g);
            for (std::size_t k = 0; k < edges.size(); ++k) {
                edges[k] += c.edges[k];
                pairs[k] += c.pairs[k];
            }
        }
        for (std::size_t k = 0; k < edges.size(); ++k) {
            score += oracle::log_beta_integral(edges[k], pairs[k], 1.0, 1.0);
        }
        scores.push_back(score);
        max_score = std::max(max_score, score);
    }
    double z = 0.0;
    for (double s : scores) {
        z += std::exp(s - max_score);
    }
    for (std::size_t i = 0; i < topologies.size(); ++i) {
        auto key = topologies[i];
        std::sort(key.begin(), key.end());
        target[key] = std::exp(scores[i] - max_score) / z;
    }

    Rng rng(1003);
    TreeChain chain(random_binary_tree(n, rng), window, BetaParams{});
    for (int s = 0; s < 1000; ++s) {
        chain.sweep(rng);
    }
    const int draws = 200000;
    std::map<std::vector<std::uint32_t>, double> seen;
    for (int s = 0; s < draws; ++s) {
        chain.sweep(rng);
        seen[topology_key(chain.clades())] += 1.0 / draws;
    }
    double tv = 0.0;
    for (const auto& [key, p] : target) {
        tv += std::abs(p - seen[key]);
    }
    tv *= 0.5;
    const bool complete = seen.size() == target.size();
    return {tv < 0.03 && complete,
            fmt("total variation %.4f over %zu topologies (threshold 0.03)", tv, seen.size())};
}

Verdict consensus_edges(const Settings&) {
    Rng rng(1004);
    bool identical = true;
    for (int trial = 0; trial < 20; ++trial) {
        const auto tree = random_binary_tree(3 + uniform_index(rng, 20), rng);
        const std::vector<BipartitionSample> samples(7, BipartitionSample{tree.leaf_count(), tree.clades()});
        identical = identical && same_topology(consensus_tree(samples), tree.to_dendrogram());
    }
    const std::size_t n = 5;
    std::vector<BipartitionSample> distinct;
    for (const auto& clade : {testgen::set_of(n, {0, 1}), testgen::set_of(n, {2, 3}), testgen::set_of(n, {1, 4}),
                              testgen::set_of(n, {0, 3})}) {
        distinct.push_back(BipartitionSample{n, {clade}});
    }
    const auto star = consensus_tree(distinct);
    const bool is_star = star.internal_count() == 1 && star.children(star.root()).size() == n;
    return {identical && is_star,
            fmt("identical samples reproduce the tree: %s; distinct bipartitions give a star: %s",
                identical ? "yes" : "no", is_star ? "yes" : "no")};
}

DetectConfig experiment_config(std::size_t bootstrap) {
    DetectConfig cfg;
    cfg.w = 4;
    cfg.fp_rate = 0.05;
    cfg.n_bootstrap = bootstrap;
    return cfg;
}

Verdict false_positive_calibration(const Settings& settings) {
    const auto start = std::chrono::steady_clock::now();
    ChangeSpec spec;
    spec.mu_before = 0.5;
    spec.mu_after = 0.5;
    const std::vector<std::string> methods{"ghrg"};
    const auto runs = simulate_runs(spec, 100, methods, experiment_config(200), 5005, settings.workers);
    int with_detection = 0;
    std::size_t detections = 0;
    for (const auto& run : runs[0]) {
        with_detection += run.detections.empty() ? 0 : 1;
        detections += run.detections.size();
    }
    const double fraction = with_detection / 100.0;
    const double elapsed = seconds_since(start);
    return {fraction >= 0.01 && fraction <= 0.12 && elapsed <= 900.0,
            fmt("%d/100 stationary runs with a detection (band [0.01, 0.12]); %zu detections, %.1f s",
                with_detection, detections, elapsed)};
}

struct SplitCell {
    std::vector<std::vector<RunOutcome>> outcomes;
    double seconds = 0.0;
};

SplitCell split_cell(const std::vector<std::string>& methods, const Settings& settings) {
    const auto start = std::chrono::steady_clock::now();
    const auto spec = ChangeSpec::for_delta(ChangeKind::split, 0.45);
    SplitCell cell;
    cell.outcomes = simulate_runs(spec, 50, methods, experiment_config(1000), 6006, settings.workers);
    cell.seconds = seconds_since(start);
    return cell;
}

Verdict large_change(const Settings& settings) {
    const auto cell = split_cell({"ghrg"}, settings);
    const auto rates = error_rates(cell.outcomes[0]);
    std::vector<double> errors;
    for (const auto& run : cell.outcomes[0]) {
        if (const auto d = run.first_true_detection()) {
            errors.push_back(std::abs(d->t_hat_c.value() - static_cast<double>(run.t_c)));
        }
    }
    std::sort(errors.begin(), errors.end());
    double median = std::numeric_limits<double>::quiet_NaN();
    if (!errors.empty()) {
        const std::size_t mid = errors.size() / 2;
        median = errors.size() % 2 == 1 ? errors[mid] : 0.5 * (errors[mid - 1] + errors[mid]);
    }
    return {rates.fn_rate <= 0.10 && median <= 1.0 && cell.seconds <= 900.0,
            fmt("fn_rate %.2f (max 0.10), median |t_hat_c - t_c| %.2f (max 1) over %zu detected runs, %.1f s",
                rates.fn_rate, median, errors.size(), cell.seconds)};
}

Verdict method_ordering(const Settings& settings) {
    const auto& methods = all_methods();
    const auto cell = split_cell(methods, settings);
    const double ghrg = error_rates(cell.outcomes[0]).fn_rate;
    bool ordered = true;
    std::string detail = fmt("fn_rate ghrg %.2f", ghrg);
    for (std::size_t m = 1; m < methods.size(); ++m) {
        const double fn = error_rates(cell.outcomes[m]).fn_rate;
        ordered = ordered && fn > ghrg;
        detail += fmt(", %s %.2f", methods[m].c_str(), fn);
    }
    return {ordered, detail};
}

Verdict gaussian_oracle(const Settings&) {
    Rng rng(1008);
    std::normal_distribution<double> normal(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> xs(1 + uniform_index(rng, 6));
        const double loc = 4.0 * normal(rng);
        const double scale = 0.3 + 3.0 * uniform01(rng);
        for (auto& x : xs) {
            x = loc + scale * normal(rng);
        }
        const GaussianPosterior prior{loc + normal(rng), 0.2 + 2.0 * uniform01(rng), 0.8 + 2.0 * uniform01(rng),
                                      0.2 + 3.0 * uniform01(rng)};
        const double got = gaussian_log_marginal(xs, prior);
        const double want = oracle::gaussian_posterior_marginal(xs, prior.mu0, prior.kappa0, prior.a0, prior.b0);
        worst = std::max(worst, std::abs(got - want));
    }
    return {worst <= 1e-5, fmt("max |error| = %.3g over 50 series (tolerance 1e-5)", worst)};
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "netcp");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

Verdict determinism(const Settings& settings) {
    const auto dir = fs::temp_directory_path() / "netcp_acceptance_determinism";
    fs::create_directories(dir);
    const auto input = (fs::path(settings.fixtures) / "split_seq.tsv").string();
    std::vector<std::string> reports;
    for (const char* workers : {"1", "8"}) {
        const auto out = (dir / (std::string("report_") + workers + ".json")).string();
        const int code = run_cli({"detect", "-i", input, "--seed", "7", "--workers", workers, "-o", out, "--trace",
                                  (dir / (std::string("trace_") + workers + ".csv")).string()});
        if (code != 0) {
            return {false, fmt("detect exited with %d at --workers %s", code, workers)};
        }
        reports.push_back(slurp(out) + slurp(dir / (std::string("trace_") + workers + ".csv")));
    }
    fs::remove_all(dir);
    const bool same = !reports[0].empty() && reports[0] == reports[1];
    return {same, fmt("reports and traces at --workers 1 and 8 are %s (%zu bytes)",
                      same ? "byte-identical" : "different", reports[0].size())};
}

Verdict ingestion(const Settings& settings) {
    const fs::path dir(settings.fixtures);
    const auto seq = parse_edge_list_file((dir / "split_seq.tsv").string());
    std::ostringstream written;
    write_edge_list(seq, written);
    std::istringstream again(written.str());
    const auto reread = parse_edge_list(again);
    bool round_trip = reread.size() == seq.size() && reread.labels() == seq.labels();
    for (std::size_t t = 0; round_trip && t < seq.size(); ++t) {
        round_trip = std::ranges::equal(seq[t].edges(), reread[t].edges()) && seq[t].time() == reread[t].time();
    }
    std::ifstream timed(dir / "timed_events.tsv");
    const auto events = parse_timed_events(timed);
    const auto binned = aggregate_events(events, 3600.0);
    std::vector<std::size_t> edge_counts;
    for (const auto& g : binned.snapshots()) {
        edge_counts.push_back(g.edge_count());
    }
    const bool aggregated = binned.vertex_count() == 4 && edge_counts == std::vector<std::size_t>{3, 1, 1, 1};
    std::ifstream events_csv(dir / "split_events.csv");
    const auto known = parse_events_csv(events_csv);
    const bool labelled = known.times == std::vector<TimeStep>{8};
    return {seq.size() == 12 && round_trip && aggregated && labelled,
            fmt("edge list %zu snapshots, round trip %s; %zu timed events into %zu hourly snapshots; "
                "real-data figures need the MIT and Enron datasets (see README)",
                seq.size(), round_trip ? "exact" : "broken", events.size(), binned.size())};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"netcp acceptance suite"};
    Settings settings;
    std::vector<int> only;
    settings.fixtures = NETCP_FIXTURE_DIR;
    app.add_option("--only", only, "Criteria to run (default: all)")->check(CLI::Range(1, 10));
    app.add_option("--workers", settings.workers, "Workers for the simulation criteria")->capture_default_str();
    app.add_option("--fixtures", settings.fixtures, "Fixture directory")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    struct Criterion {
        std::string name;
        std::function<Verdict(const Settings&)> check;
        double limit_seconds;
    };
    const double none = std::numeric_limits<double>::infinity();
    const std::vector<Criterion> criteria{
        {"marginal likelihood oracle", marginal_oracle, 10.0},
        {"pair conservation", pair_conservation, 5.0},
        {"MCMC stationarity", mcmc_stationarity, 60.0},
        {"consensus edge cases", consensus_edges, none},
        {"false-positive calibration", false_positive_calibration, none},
        {"large-change detectability", large_change, none},
        {"method ordering", method_ordering, none},
        {"Gaussian marginal oracle", gaussian_oracle, 10.0},
        {"determinism across workers", determinism, none},
        {"ingestion paths", ingestion, none},
    };
    if (only.empty()) {
        for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) {
            only.push_back(i);
        }
    }
    int failures = 0;
    for (int id : only) {
        const auto& [name, check, limit] = criteria[static_cast<std::size_t>(id - 1)];
        const auto start = std::chrono::steady_clock::now();
        Verdict verdict;
        try {
            verdict = check(settings);
        } catch (const std::exception& e) {
            verdict = {false, std::string("exception: ") + e.what()};
        }
        const double elapsed = seconds_since(start);
        if (elapsed > limit) {
            verdict.pass = false;
            verdict.detail += fmt("; over the %.0f s limit", limit);
        }
        failures += verdict.pass ? 0 : 1;
        std::printf("criterion %d %s: %s (%s) [%.1f s]\n", id, verdict.pass ? "PASS" : "FAIL", name.c_str(),
                    verdict.detail.c_str(), elapsed);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
