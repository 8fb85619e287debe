#pragma once

#include "netcp/fit.hpp"
#include "netcp/ghrg.hpp"
#include "netcp/graph.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace netcp {

/// A change time between two consecutive snapshots: the gap just before the
/// snapshot at time `next`, reported as next - 0.5.
struct HalfStep {
    TimeStep next = 0;

    double value() const noexcept { return static_cast<double>(next) - 0.5; }
    friend auto operator<=>(const HalfStep&, const HalfStep&) = default;
};

std::string to_string(HalfStep h);

struct Detection {
    TimeStep t_d = 0;     ///< time of the last snapshot in the detecting window
    HalfStep t_hat_c;     ///< estimated change time
    double g_tau = 0.0;
    double p_value = 1.0;
    TimeStep window_start = 0;
    std::string method;

    friend bool operator==(const Detection&, const Detection&) = default;
};

enum class ResetPolicy {
    restart_after_change, ///< next window starts at the first post-change snapshot
    slide,                ///< keep sliding by one snapshot
};

struct DetectConfig {
    std::size_t w = 4;
    double fp_rate = 0.05;
    std::size_t n_bootstrap = 1000;
    FitConfig fit;
    BetaParams prior;
    ResetPolicy reset_policy = ResetPolicy::restart_after_change;
    /// Draw fresh edge probabilities from the posterior for every bootstrap
    /// replicate instead of using the posterior mean.
    bool posterior_draw = false;
    std::uint64_t seed = 0;
    /// Parallel workers for bootstrap replicates; never changes results.
    unsigned workers = 1;

    void validate() const;
};

// ---------------------------------------------------------------------------
// The GHRG test statistic

/// Lambda for a window whose first `before` snapshots precede the change:
/// the posterior Bayes factor (in log form) of a change at that gap versus no
/// change, all evaluated on one tree. `counts[t]` holds snapshot t's counts.
double lambda_from_counts(std::span<const PairCounts> counts, std::size_t before, BetaParams prior);

struct WindowMax {
    double g = 0.0;
    std::size_t before = 1; ///< snapshots before the maximizing gap
};

/// Maximum of lambda over the w - 1 gaps; ties go to the earliest gap.
WindowMax max_lambda_from_counts(std::span<const PairCounts> counts, BetaParams prior);

/// Lambda at the gap t_hat; throws InvalidArgument unless both sides of the
/// gap contain window snapshots.
double lambda_stat(const GraphWindow& window, const Dendrogram& tree, HalfStep t_hat, BetaParams prior);

struct ChangeEstimate {
    double g_tau = 0.0;
    HalfStep t_hat_c;
};
ChangeEstimate max_lambda(const GraphWindow& window, const Dendrogram& tree, BetaParams prior);

/// g of one bootstrap replicate: w graphs drawn from the model, scored on its tree.
double bootstrap_replicate(const GhrgModel& model, std::size_t w, BetaParams prior, std::uint64_t replicate_seed,
                           bool posterior_draw = false);

/// n_bootstrap replicates; replicate i uses derive_seed(seed, {i}).
std::vector<double> bootstrap_null(const GhrgModel& model, std::size_t w, std::size_t n_bootstrap, BetaParams prior,
                                   std::uint64_t seed, unsigned workers = 1, bool posterior_draw = false);

/// Fraction of null values strictly greater than g.
double p_value(double g, std::span<const double> null);

// ---------------------------------------------------------------------------
// Model-agnostic detector

/// The no-change model fitted to one window, able to score the observed
/// window and to draw null replicates of the window statistic.
class WindowTest {
public:
    virtual ~WindowTest() = default;
    virtual WindowMax scan() const = 0;
    virtual double null_replicate(std::uint64_t seed) const = 0;
};

/// A sequence viewed through one generative model family.
class ChangeModel {
public:
    virtual ~ChangeModel() = default;
    virtual std::string method() const = 0;
    virtual std::size_t length() const = 0;
    virtual TimeStep time_at(std::size_t index) const = 0;
    /// Fits the window of w items starting at index `first`.
    virtual std::unique_ptr<WindowTest> fit_window(std::size_t first, std::size_t w, std::uint64_t seed,
                                                   unsigned workers) const = 0;
};

struct TraceRow {
    TimeStep tau = 0;
    double g_tau = 0.0;
    double p_value = 1.0;
    HalfStep t_hat_c;
    bool detected = false;
};

struct DetectResult {
    std::vector<Detection> detections;
    std::vector<TraceRow> trace;
    std::vector<std::string> warnings;
};

using ProgressFn = std::function<void(const TraceRow&, double seconds)>;

/// Slides a window over the model's sequence; at each window end tau it fits
/// the no-change model, computes g and the estimated gap, builds the null by
/// parametric bootstrap and reports a detection when the p-value is below
/// fp_rate. Window at index tau uses seed derive_seed(cfg.seed, {tau}).
DetectResult run_detector(const ChangeModel& model, const DetectConfig& cfg, const ProgressFn& progress = {});

/// ChangeModel backed by GHRG fits of each window.
class GhrgChangeModel : public ChangeModel {
public:
    GhrgChangeModel(const NetworkSequence& seq, BetaParams prior, FitConfig fit, bool posterior_draw);

    std::string method() const override { return "ghrg"; }
    std::size_t length() const override { return seq_->size(); }
    TimeStep time_at(std::size_t index) const override { return (*seq_)[index].time(); }
    std::unique_ptr<WindowTest> fit_window(std::size_t first, std::size_t w, std::uint64_t seed,
                                           unsigned workers) const override;

private:
    const NetworkSequence* seq_;
    BetaParams prior_;
    FitConfig fit_;
    bool posterior_draw_;
};

DetectResult detect_stream_full(const NetworkSequence& seq, const DetectConfig& cfg, const ProgressFn& progress = {});
std::vector<Detection> detect_stream(const NetworkSequence& seq, const DetectConfig& cfg);

} // namespace netcp
