#include "netcp/baselines.hpp"

#include "netcp/error.hpp"
#include "netcp/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <queue>
#include <random>

namespace netcp {

std::string to_string(ScalarStatistic s) {
    switch (s) {
    case ScalarStatistic::mean_degree:
        return "degree";
    case ScalarStatistic::mean_geodesic:
        return "geodesic";
    case ScalarStatistic::mean_clustering:
        return "clustering";
    }
    return "unknown";
}

ScalarStatistic parse_statistic(const std::string& name) {
    if (name == "degree") {
        return ScalarStatistic::mean_degree;
    }
    if (name == "geodesic") {
        return ScalarStatistic::mean_geodesic;
    }
    if (name == "clustering") {
        return ScalarStatistic::mean_clustering;
    }
    throw InvalidArgument("unknown statistic '" + name + "'");
}

namespace {

std::vector<std::vector<VertexId>> adjacency_lists(const GraphSnapshot& g) {
    std::vector<std::vector<VertexId>> adj(g.vertex_count());
    for (const auto& e : g.edges()) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    return adj;
}

} // namespace

double mean_degree(const GraphSnapshot& g) {
    if (g.vertex_count() == 0) {
        return 0.0;
    }
    return 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.vertex_count());
}

double mean_geodesic(const GraphSnapshot& g) {
    const auto adj = adjacency_lists(g);
    const std::size_t n = g.vertex_count();
    std::vector<std::int64_t> dist(n);
    std::int64_t total = 0;
    std::int64_t pairs = 0;
    for (std::size_t s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[s] = 0;
        std::queue<std::size_t> frontier;
        frontier.push(s);
        while (!frontier.empty()) {
            const auto u = frontier.front();
            frontier.pop();
            for (auto v : adj[u]) {
                if (dist[v] < 0) {
                    dist[v] = dist[u] + 1;
                    frontier.push(v);
                }
            }
        }
        for (std::size_t t = s + 1; t < n; ++t) {
            if (dist[t] > 0) {
                total += dist[t];
                ++pairs;
            }
        }
    }
    return pairs == 0 ? 0.0 : static_cast<double>(total) / static_cast<double>(pairs);
}

double mean_clustering(const GraphSnapshot& g) {
    const std::size_t n = g.vertex_count();
    if (n == 0) {
        return 0.0;
    }
    const auto adj = adjacency_lists(g);
    double sum = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
        const auto& nb = adj[u];
        const std::size_t k = nb.size();
        if (k < 2) {
            continue;
        }
        std::size_t links = 0;
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = i + 1; j < k; ++j) {
                if (g.has_edge(nb[i], nb[j])) {
                    ++links;
                }
            }
        }
        sum += 2.0 * static_cast<double>(links) / static_cast<double>(k * (k - 1));
    }
    return sum / static_cast<double>(n);
}

double compute_statistic(const GraphSnapshot& g, ScalarStatistic s) {
    switch (s) {
    case ScalarStatistic::mean_degree:
        return mean_degree(g);
    case ScalarStatistic::mean_geodesic:
        return mean_geodesic(g);
    case ScalarStatistic::mean_clustering:
        return mean_clustering(g);
    }
    return 0.0;
}

ScalarSeries scalar_series(const NetworkSequence& seq, ScalarStatistic s) {
    ScalarSeries out{s, {}, {}};
    out.times.reserve(seq.size());
    out.values.reserve(seq.size());
    for (const auto& g : seq.snapshots()) {
        out.times.push_back(g.time());
        out.values.push_back(compute_statistic(g, s));
    }
    return out;
}

void write_series_csv(const ScalarSeries& series, std::ostream& out) {
    out << "t,value\n";
    const auto old = out.precision(17);
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        out << series.times[i] << ',' << series.values[i] << '\n';
    }
    out.precision(old);
}

// ---------------------------------------------------------------------------
// Normal-Inverse-Gamma machinery

void GaussianPosterior::validate() const {
    if (!(kappa0 > 0.0) || !(a0 > 0.0) || !(b0 > 0.0) || !std::isfinite(mu0)) {
        throw InvalidArgument("Normal-Inverse-Gamma parameters must be finite with kappa0, a0, b0 > 0");
    }
}

GaussianPosterior gaussian_update(const GaussianPosterior& prior, std::span<const double> xs) {
    prior.validate();
    if (xs.empty()) {
        return prior;
    }
    const auto n = static_cast<double>(xs.size());
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : xs) {
        ss += (x - mean) * (x - mean);
    }
    GaussianPosterior post;
    post.kappa0 = prior.kappa0 + n;
    post.mu0 = (prior.kappa0 * prior.mu0 + n * mean) / post.kappa0;
    post.a0 = prior.a0 + 0.5 * n;
    post.b0 = prior.b0 + 0.5 * ss + prior.kappa0 * n * (mean - prior.mu0) * (mean - prior.mu0) / (2.0 * post.kappa0);
    return post;
}

double gaussian_log_predictive(const GaussianPosterior& post, double x) {
    const double nu = 2.0 * post.a0;
    const double scale2 = post.b0 * (post.kappa0 + 1.0) / (post.a0 * post.kappa0);
    const double z2 = (x - post.mu0) * (x - post.mu0) / (nu * scale2);
    return std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) - 0.5 * std::log(nu * std::numbers::pi * scale2) -
           0.5 * (nu + 1.0) * std::log1p(z2);
}

double gaussian_log_marginal(std::span<const double> xs, const GaussianPosterior& prior) {
    if (xs.empty()) {
        throw InvalidArgument("need at least one observation");
    }
    const auto post = gaussian_update(prior, xs);
    double total = 0.0;
    for (double x : xs) {
        total += gaussian_log_predictive(post, x);
    }
    return total;
}

GaussianPosterior default_gaussian_prior(std::span<const double> xs) {
    if (xs.empty()) {
        throw InvalidArgument("need at least one observation");
    }
    const auto n = static_cast<double>(xs.size());
    const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : xs) {
        ss += (x - mean) * (x - mean);
    }
    const double var = xs.size() > 1 ? ss / (n - 1.0) : 0.0;
    return GaussianPosterior{mean, 1.0, 1.0, std::max(var, 1e-8)};
}

double gaussian_lambda(std::span<const double> xs, std::size_t before, const GaussianPosterior& prior) {
    if (before == 0 || before >= xs.size()) {
        throw InvalidArgument("a candidate gap needs observations on both sides");
    }
    return gaussian_log_marginal(xs.first(before), prior) + gaussian_log_marginal(xs.subspan(before), prior) -
           gaussian_log_marginal(xs, prior);
}

WindowMax gaussian_max_lambda(std::span<const double> xs, const GaussianPosterior& prior) {
    if (xs.size() < 2) {
        throw InvalidArgument("window length must be at least 2");
    }
    WindowMax best{gaussian_lambda(xs, 1, prior), 1};
    for (std::size_t before = 2; before < xs.size(); ++before) {
        const double g = gaussian_lambda(xs, before, prior);
        if (g > best.g) {
            best = {g, before};
        }
    }
    return best;
}

namespace {

class GaussianWindowTest : public WindowTest {
public:
    explicit GaussianWindowTest(std::vector<double> xs)
        : xs_(std::move(xs)), prior_(default_gaussian_prior(xs_)), post_(gaussian_update(prior_, xs_)) {}

    WindowMax scan() const override { return gaussian_max_lambda(xs_, prior_); }

    double null_replicate(std::uint64_t seed) const override {
        Rng rng(seed);
        const double sigma = std::sqrt(post_.b0 / (post_.a0 - 1.0));
        std::normal_distribution<double> normal(post_.mu0, sigma);
        std::vector<double> draw(xs_.size());
        for (auto& x : draw) {
            x = normal(rng);
        }
        return gaussian_max_lambda(draw, default_gaussian_prior(draw)).g;
    }

private:
    std::vector<double> xs_;
    GaussianPosterior prior_;
    GaussianPosterior post_;
};

} // namespace

std::unique_ptr<WindowTest> GaussianChangeModel::fit_window(std::size_t first, std::size_t w, std::uint64_t,
                                                            unsigned) const {
    if (first + w > series_.values.size()) {
        throw InvalidArgument("window runs past the end of the series");
    }
    std::vector<double> xs(series_.values.begin() + static_cast<std::ptrdiff_t>(first),
                           series_.values.begin() + static_cast<std::ptrdiff_t>(first + w));
    return std::make_unique<GaussianWindowTest>(std::move(xs));
}

DetectResult scalar_detect_stream_full(const ScalarSeries& series, const DetectConfig& cfg,
                                       const ProgressFn& progress) {
    if (series.times.size() != series.values.size()) {
        throw InvalidArgument("series times and values differ in length");
    }
    GaussianChangeModel model(series);
    return run_detector(model, cfg, progress);
}

std::vector<Detection> scalar_detect_stream(const ScalarSeries& series, const DetectConfig& cfg) {
    return scalar_detect_stream_full(series, cfg).detections;
}

} // namespace netcp
