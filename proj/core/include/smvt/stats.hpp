#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smvt/field.hpp"
#include "smvt/probability.hpp"
#include "smvt/sampling.hpp"
#include "smvt/selector.hpp"

namespace smvt {

/// Scalar-parameter likelihood model with analytic score and second
/// derivative. The parameter space is the open interval (lower, upper).
struct ParametricModel {
  using Data = std::span<const double>;

  std::string name;
  std::function<double(double, Data)> log_likelihood;
  std::function<double(double, Data)> score;
  std::function<double(double, Data)> second_derivative;
  /// Per-observation Fisher information at theta.
  std::function<double(double)> fisher_information;
  std::function<std::vector<double>(double theta, std::size_t n, std::uint64_t seed)> sample;
  double lower = 0.0;
  double upper = 1.0;
  double true_value = 0.5;

  bool in_parameter_space(double theta) const { return lower < theta && theta < upper; }

  static ParametricModel bernoulli(double p0);
  /// N(theta, sigma^2) with sigma known.
  static ParametricModel normal_mean(double mu0, double sigma = 1.0);
  /// Exponential with rate theta.
  static ParametricModel exponential_rate(double rate0);
  /// `bernoulli:p`, `normal:mu[,sigma]`, `exponential:rate`.
  static ParametricModel parse(std::string_view spec);
};

/// Largest relative gap between the analytic score and central differences
/// of the log-likelihood over `grid`.
double score_consistency_error(const ParametricModel& model, ParametricModel::Data data,
                               std::span<const double> grid, double step = 1e-6);

struct MleFit {
  double theta_hat = 0.0;
  bool at_boundary = false;  ///< maximizer pinned to the edge of the search interval
  std::string method;        ///< "score-bisection" or "golden-section"
};

/// Derivative-sign bisection on the score (tolerance 1e-10 in theta); falls
/// back to golden-section on the log-likelihood when the score does not
/// change sign over the search interval.
MleFit fit_mle(const ParametricModel& model, ParametricModel::Data data);

/// score(theta_hat) = score(theta0) + (theta_hat - theta0) * d2logL(theta_star).
struct ScoreExpansionRecord {
  std::size_t replicate = 0;
  double theta_hat = 0.0;
  double theta_star = 0.0;
  double theta0 = 0.0;
  double residual = 0.0;           ///< score(theta_hat) - score(theta0) - (theta_hat - theta0) d2(theta_star)
  double relative_residual = 0.0;  ///< |residual| / (1 + |score(theta_hat)|)
  double score_hat = 0.0;
  double score0 = 0.0;
  double curvature_star = 0.0;
  bool at_boundary = false;

  double bracket_lo() const { return std::min(theta_hat, theta0); }
  double bracket_hi() const { return std::max(theta_hat, theta0); }
  bool between() const { return bracket_lo() <= theta_star && theta_star <= bracket_hi(); }
  bool strictly_between() const { return bracket_lo() < theta_star && theta_star < bracket_hi(); }
};

/// Solves for theta_star with the selector on f = score, anchor theta0,
/// increment theta_hat - theta0, order 1. theta_hat == theta0 gives
/// theta_star = theta0 with zero residual.
ScoreExpansionRecord mle_score_expansion(const ParametricModel& model, ParametricModel::Data data,
                                         double theta_hat, const SelectionPolicy& policy = {});

struct MleMonteCarloSummary {
  std::size_t replicates = 0;
  std::size_t sample_size = 0;
  std::size_t boundary_count = 0;
  std::size_t failures = 0;
  double strictly_between_fraction = 0.0;
  double between_fraction = 0.0;
  double max_relative_residual = 0.0;
  double root_n_deviation_mean = 0.0;      ///< of sqrt(n) (theta_hat - theta0)
  double root_n_deviation_variance = 0.0;
  double ks_distance = 0.0;  ///< sqrt(n I(theta0)) (theta_hat - theta0) against N(0, 1)
  double theta_star_mean = 0.0;
  double theta_star_stddev = 0.0;
};

struct MleMonteCarloResult {
  std::vector<ScoreExpansionRecord> records;
  std::vector<OutcomeFailure> failures;  ///< replicate id and message
  MleMonteCarloSummary summary;
};

/// One replicate per seed derive_seed(seed, r): draw, fit, expand.
MleMonteCarloResult mle_monte_carlo(const ParametricModel& model, std::size_t n,
                                    std::size_t replicates, std::uint64_t seed,
                                    const SelectionPolicy& policy = {});

struct DeltaReport {
  std::size_t replicates = 0;
  std::size_t sample_size = 0;
  double mu = 0.0;
  double sigma = 0.0;
  std::vector<double> sample_means;
  std::vector<double> standardized;  ///< sqrt(n) (g(mean) - g(mu)) / (sigma |g'(mu)|)
  std::vector<double> xi;            ///< intermediate point per replicate
  std::vector<double> residuals;
  double ks_distance = 0.0;
  double max_abs_xi_deviation = 0.0;  ///< max |xi - mu|
  bool all_between = true;
};

/// Per replicate: sample mean of n draws, then xi with
/// g(mean) = g(mu) + g'(xi)(mean - mu) from the selector. Throws
/// std::invalid_argument when g'(mu) == 0.
DeltaReport delta_method_experiment(const ScalarField& g, double mu, const Distribution& sampler,
                                    std::size_t n, std::size_t replicates, std::uint64_t seed,
                                    const SelectionPolicy& policy = {});

struct DeltaSweep {
  std::vector<DeltaReport> reports;
  bool xi_deviation_non_increasing = true;
};

DeltaSweep delta_method_sweep(const ScalarField& g, double mu, const Distribution& sampler,
                              std::span<const std::size_t> sample_sizes, std::size_t replicates,
                              std::uint64_t seed, const SelectionPolicy& policy = {});

struct TwoRvResult {
  RandomVariable xi;  ///< intermediate point between Y(omega) and X(omega)
  std::vector<SelectionResult> solutions;
  Partition joint_sigma;  ///< sigma(X, Y)
  bool measurable = false;
};

/// f(X) = f(Y) + f'(xi)(X - Y) outcome by outcome. xi = X where X == Y.
/// Measurability is reported against sigma(X, Y) only; this says nothing
/// about general probability spaces. Throws SampleSolveError on failures.
TwoRvResult two_rv_selector(const ScalarField& f, const RandomVariable& X, const RandomVariable& Y,
                            const SelectionPolicy& policy = {});

double standard_normal_cdf(double x);
/// Kolmogorov-Smirnov distance sup |F_n - Phi|.
double ks_distance_standard_normal(std::vector<double> values);

}  // namespace smvt
