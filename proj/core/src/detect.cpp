#include "netcp/detect.hpp"

#include "netcp/error.hpp"
#include "netcp/parallel.hpp"

#include <chrono>
#include <cstdio>

namespace netcp {

std::string to_string(HalfStep h) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", h.value());
    return buf;
}

void DetectConfig::validate() const {
    if (w < 2) {
        throw InvalidArgument("window length must be at least 2");
    }
    if (!(fp_rate > 0.0 && fp_rate < 1.0)) {
        throw InvalidArgument("false-positive rate must lie in (0, 1)");
    }
    if (n_bootstrap < 100) {
        throw InvalidArgument("at least 100 bootstrap replicates are required");
    }
    if (!(prior.alpha > 0.0) || !(prior.beta > 0.0)) {
        throw InvalidArgument("Beta hyperparameters must be positive");
    }
    fit.validate();
}

double lambda_from_counts(std::span<const PairCounts> counts, std::size_t before, BetaParams prior) {
    const std::size_t w = counts.size();
    if (before == 0 || before >= w) {
        throw InvalidArgument("a candidate gap needs snapshots on both sides");
    }
    const std::size_t m = counts.front().size();
    const auto pre = counts.first(before);
    const auto post = counts.subspan(before);
    const auto psi_pre = posterior_update(prior, pre, m);
    const auto psi_post = posterior_update(prior, post, m);
    const auto psi_all = posterior_update(prior, counts, m);

    double lambda = 0.0;
    for (const auto& c : pre) {
        lambda += log_marginal(c, psi_pre);
    }
    for (const auto& c : post) {
        lambda += log_marginal(c, psi_post);
    }
    for (const auto& c : counts) {
        lambda -= log_marginal(c, psi_all);
    }
    return lambda;
}

WindowMax max_lambda_from_counts(std::span<const PairCounts> counts, BetaParams prior) {
    if (counts.size() < 2) {
        throw InvalidArgument("window length must be at least 2");
    }
    WindowMax best{lambda_from_counts(counts, 1, prior), 1};
    for (std::size_t before = 2; before < counts.size(); ++before) {
        const double g = lambda_from_counts(counts, before, prior);
        if (g > best.g) {
            best = {g, before};
        }
    }
    return best;
}

namespace {

std::vector<PairCounts> window_counts(const GraphWindow& window, const Dendrogram& tree) {
    PairCounter counter(tree);
    std::vector<PairCounts> out;
    out.reserve(window.length());
    for (const auto& g : window.snapshots()) {
        out.push_back(counter.count(g));
    }
    return out;
}

} // namespace

double lambda_stat(const GraphWindow& window, const Dendrogram& tree, HalfStep t_hat, BetaParams prior) {
    std::size_t before = window.length();
    for (std::size_t i = 1; i < window.length(); ++i) {
        if (window[i].time() == t_hat.next) {
            before = i;
        }
    }
    if (before == window.length()) {
        throw InvalidArgument("change time " + to_string(t_hat) + " is not an interior gap of the window");
    }
    const auto counts = window_counts(window, tree);
    return lambda_from_counts(counts, before, prior);
}

ChangeEstimate max_lambda(const GraphWindow& window, const Dendrogram& tree, BetaParams prior) {
    const auto counts = window_counts(window, tree);
    const auto best = max_lambda_from_counts(counts, prior);
    return {best.g, HalfStep{window[best.before].time()}};
}

double bootstrap_replicate(const GhrgModel& model, std::size_t w, BetaParams prior, std::uint64_t replicate_seed,
                           bool posterior_draw) {
    Rng rng(replicate_seed);
    const auto probs = posterior_draw ? model.draw_probabilities(rng) : model.mean_probabilities();
    std::vector<PairCounts> counts;
    counts.reserve(w);
    for (std::size_t t = 0; t < w; ++t) {
        counts.push_back(sample_counts(model.tree(), probs, rng));
    }
    return max_lambda_from_counts(counts, prior).g;
}

std::vector<double> bootstrap_null(const GhrgModel& model, std::size_t w, std::size_t n_bootstrap, BetaParams prior,
                                   std::uint64_t seed, unsigned workers, bool posterior_draw) {
    if (n_bootstrap == 0) {
        throw InvalidArgument("need at least one bootstrap replicate");
    }
    std::vector<double> null(n_bootstrap);
    parallel_for(n_bootstrap, workers, [&](std::size_t i) {
        null[i] = bootstrap_replicate(model, w, prior, derive_seed(seed, {i}), posterior_draw);
    });
    return null;
}

double p_value(double g, std::span<const double> null) {
    if (null.empty()) {
        throw InvalidArgument("null distribution is empty");
    }
    std::size_t above = 0;
    for (double x : null) {
        if (x > g) {
            ++above;
        }
    }
    return static_cast<double>(above) / static_cast<double>(null.size());
}

// ---------------------------------------------------------------------------

DetectResult run_detector(const ChangeModel& model, const DetectConfig& cfg, const ProgressFn& progress) {
    cfg.validate();
    DetectResult result;
    const std::size_t length = model.length();
    if (length < cfg.w) {
        result.warnings.push_back("sequence has " + std::to_string(length) + " snapshots, fewer than the window of " +
                                  std::to_string(cfg.w) + "; nothing to detect");
        return result;
    }

    std::vector<double> null(cfg.n_bootstrap);
    std::size_t tau = cfg.w - 1;
    while (tau < length) {
        const auto started = std::chrono::steady_clock::now();
        const std::size_t first = tau + 1 - cfg.w;
        const std::uint64_t window_seed = derive_seed(cfg.seed, {tau});
        const auto test = model.fit_window(first, cfg.w, derive_seed(window_seed, {0}), cfg.workers);
        const auto scan = test->scan();
        parallel_for(null.size(), cfg.workers,
                     [&](std::size_t i) { null[i] = test->null_replicate(derive_seed(window_seed, {1, i})); });
        const double p = p_value(scan.g, null);

        TraceRow row{model.time_at(tau), scan.g, p, HalfStep{model.time_at(first + scan.before)}, p < cfg.fp_rate};
        result.trace.push_back(row);
        if (progress) {
            progress(row, std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count());
        }
        if (row.detected) {
            result.detections.push_back(
                Detection{row.tau, row.t_hat_c, row.g_tau, row.p_value, model.time_at(first), model.method()});
            if (cfg.reset_policy == ResetPolicy::restart_after_change) {
                tau = first + scan.before + cfg.w - 1;
                continue;
            }
        }
        ++tau;
    }
    return result;
}

namespace {

class GhrgWindowTest : public WindowTest {
public:
    GhrgWindowTest(GhrgModel model, std::vector<PairCounts> counts, BetaParams prior, bool posterior_draw)
        : model_(std::move(model)), counts_(std::move(counts)), prior_(prior), posterior_draw_(posterior_draw) {}

    WindowMax scan() const override { return max_lambda_from_counts(counts_, prior_); }

    double null_replicate(std::uint64_t seed) const override {
        return bootstrap_replicate(model_, counts_.size(), prior_, seed, posterior_draw_);
    }

private:
    GhrgModel model_;
    std::vector<PairCounts> counts_;
    BetaParams prior_;
    bool posterior_draw_;
};

} // namespace

GhrgChangeModel::GhrgChangeModel(const NetworkSequence& seq, BetaParams prior, FitConfig fit, bool posterior_draw)
    : seq_(&seq), prior_(prior), fit_(fit), posterior_draw_(posterior_draw) {}

std::unique_ptr<WindowTest> GhrgChangeModel::fit_window(std::size_t first, std::size_t w, std::uint64_t seed,
                                                        unsigned workers) const {
    const auto window = window_ending_at_index(*seq_, first + w - 1, w);
    FitConfig fit = fit_;
    fit.seed = seed;
    auto model = fit_ghrg(window, prior_, fit, workers);
    auto counts = window_counts(window, model.tree());
    return std::make_unique<GhrgWindowTest>(std::move(model), std::move(counts), prior_, posterior_draw_);
}

DetectResult detect_stream_full(const NetworkSequence& seq, const DetectConfig& cfg, const ProgressFn& progress) {
    GhrgChangeModel model(seq, cfg.prior, cfg.fit, cfg.posterior_draw);
    return run_detector(model, cfg, progress);
}

std::vector<Detection> detect_stream(const NetworkSequence& seq, const DetectConfig& cfg) {
    return detect_stream_full(seq, cfg).detections;
}

} // namespace netcp
