#pragma once

#include "netcp/detect.hpp"
#include "netcp/graph.hpp"

#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace netcp {

enum class ScalarStatistic { mean_degree, mean_geodesic, mean_clustering };

std::string to_string(ScalarStatistic s);
/// Accepts "degree", "geodesic", "clustering"; throws InvalidArgument otherwise.
ScalarStatistic parse_statistic(const std::string& name);

/// 2|E| / n.
double mean_degree(const GraphSnapshot& g);
/// Mean shortest-path length over connected vertex pairs; 0 if none are connected.
double mean_geodesic(const GraphSnapshot& g);
/// Mean local clustering coefficient; vertices of degree < 2 count as 0.
double mean_clustering(const GraphSnapshot& g);

double compute_statistic(const GraphSnapshot& g, ScalarStatistic s);

struct ScalarSeries {
    ScalarStatistic statistic = ScalarStatistic::mean_degree;
    std::vector<TimeStep> times;
    std::vector<double> values;
};

ScalarSeries scalar_series(const NetworkSequence& seq, ScalarStatistic s);

/// Writes `t,value` rows with a header.
void write_series_csv(const ScalarSeries& series, std::ostream& out);

/// Normal-Inverse-Gamma hyperparameters: mu | sigma^2 ~ N(mu0, sigma^2 / kappa0),
/// sigma^2 ~ InvGamma(a0, b0).
struct GaussianPosterior {
    double mu0 = 0.0;
    double kappa0 = 1.0;
    double a0 = 1.0;
    double b0 = 1.0;

    void validate() const;
};

/// Conjugate update on xs.
GaussianPosterior gaussian_update(const GaussianPosterior& prior, std::span<const double> xs);

/// log of the Student-t posterior predictive density at x.
double gaussian_log_predictive(const GaussianPosterior& post, double x);

/// Posterior-marginal log-likelihood: update on xs, then sum the log
/// posterior-predictive density at each x. Throws InvalidArgument on empty xs.
double gaussian_log_marginal(std::span<const double> xs, const GaussianPosterior& prior);

/// Window prior: mu0 = sample mean, kappa0 = a0 = 1, b0 = sample variance
/// (floored at 1e-8).
GaussianPosterior default_gaussian_prior(std::span<const double> xs);

/// Scalar counterpart of lambda_from_counts.
double gaussian_lambda(std::span<const double> xs, std::size_t before, const GaussianPosterior& prior);
WindowMax gaussian_max_lambda(std::span<const double> xs, const GaussianPosterior& prior);

/// ChangeModel over a scalar series with a univariate Gaussian. A bootstrap
/// replicate draws w i.i.d. normals at the window's posterior-mean mu and
/// sigma^2, then scores them with a prior rebuilt from the replicate itself.
class GaussianChangeModel : public ChangeModel {
public:
    explicit GaussianChangeModel(ScalarSeries series) : series_(std::move(series)) {}

    std::string method() const override { return to_string(series_.statistic); }
    std::size_t length() const override { return series_.values.size(); }
    TimeStep time_at(std::size_t index) const override { return series_.times[index]; }
    std::unique_ptr<WindowTest> fit_window(std::size_t first, std::size_t w, std::uint64_t seed,
                                           unsigned workers) const override;

private:
    ScalarSeries series_;
};

DetectResult scalar_detect_stream_full(const ScalarSeries& series, const DetectConfig& cfg,
                                       const ProgressFn& progress = {});
std::vector<Detection> scalar_detect_stream(const ScalarSeries& series, const DetectConfig& cfg);

} // namespace netcp
