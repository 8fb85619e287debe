#pragma once

#include "netcp/detect.hpp"
#include "netcp/graph.hpp"
#include "netcp/synth.hpp"

#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace netcp {

/// Known events, sorted by time.
struct EventList {
    std::vector<TimeStep> times;
    std::vector<std::string> labels;
};

/// Reads CSV `t,label` (optional header row `t,label`). Rows are sorted by time.
EventList parse_events_csv(std::istream& in);

struct PrecisionRecall {
    double precision = 0.0;
    double recall = 0.0;
    bool precision_defined = true; ///< false when there are no detections
    bool recall_defined = true;    ///< false when there are no events
};

/// Delay-tolerant precision and recall. An estimate x matches event t when
/// |x - t| <= s + 0.5, so a half-step estimate adjacent to its event matches at s = 0.
PrecisionRecall precision_recall(std::span<const double> estimates, std::span<const TimeStep> events, int s);

/// Rows `s,precision,recall,method` for s = 0..max_delay.
void write_precision_recall_csv(std::span<const double> estimates, std::span<const TimeStep> events, int max_delay,
                                const std::string& method, std::ostream& out, bool header = true);

/// One detector run on a sequence with a single known change at t_c.
struct RunOutcome {
    std::vector<Detection> detections;
    TimeStep t_c = 0;
    std::size_t w = 4;
    /// Last window end evaluated; the sequence may end before windows pass t_c.
    TimeStep last_tau = 0;

    /// Detections with t_d < t_c.
    bool false_positive() const;
    /// First detection whose window reaches t_c: t_c <= t_d and t_d - w + 1 <= t_c.
    std::optional<Detection> first_true_detection() const;
    bool false_negative() const { return !first_true_detection().has_value(); }
};

struct ErrorRates {
    double fp_rate = 0.0;
    double fn_rate = 0.0;
};

/// Fraction of runs with a false positive and with a missed change.
ErrorRates error_rates(std::span<const RunOutcome> runs);

/// Runs one method ("ghrg", "degree", "geodesic", "clustering") on a sequence.
DetectResult run_method(const NetworkSequence& seq, const std::string& method, const DetectConfig& cfg,
                        const ProgressFn& progress = {});

const std::vector<std::string>& all_methods();

struct SweepConfig {
    std::vector<ChangeKind> kinds{ChangeKind::merge, ChangeKind::split, ChangeKind::form, ChangeKind::fragment};
    std::vector<double> delta_mu{0.0, 0.1, 0.2, 0.3, 0.4, 0.45};
    std::size_t runs = 100;
    std::vector<std::string> methods = all_methods();
    DetectConfig detect;
    /// Shape of every generated sequence (kind and mu endpoints are overwritten per cell).
    ChangeSpec base;
    std::uint64_t seed = 0;
    /// Runs are distributed over this many workers; detection inside a run is sequential.
    unsigned workers = 1;
};

struct SweepRow {
    ChangeKind kind = ChangeKind::split;
    double delta_mu = 0.0;
    std::string method;
    double fp_rate = 0.0;
    double fn_rate = 0.0;
    double median_tc_err = 0.0;   ///< median of t_hat_c - t_c over detected runs (NaN if none)
    double median_td_delay = 0.0; ///< median of t_d - t_c over detected runs (NaN if none)
    std::size_t runs = 0;
    std::size_t detected_runs = 0;
};

/// Outcomes for `runs` sequences drawn from `spec` (run r uses seed
/// derive_seed(seed, {r})), for each method in order: result[m][r].
std::vector<std::vector<RunOutcome>> simulate_runs(const ChangeSpec& spec, std::size_t runs,
                                                   std::span<const std::string> methods, const DetectConfig& cfg,
                                                   std::uint64_t seed, unsigned workers);

SweepRow summarize(ChangeKind kind, double delta_mu, const std::string& method, std::span<const RunOutcome> runs);

std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

/// `kind,delta_mu,method,fp_rate,fn_rate,median_tc_err,median_td_delay`
void write_sweep_csv(std::span<const SweepRow> rows, std::ostream& out);

} // namespace netcp
