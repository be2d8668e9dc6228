#include "smvt/stats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "smvt/errors.hpp"
#include "smvt/parallel.hpp"

namespace smvt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sum_of(ParametricModel::Data data) { return std::accumulate(data.begin(), data.end(), 0.0); }

std::vector<double> parse_model_params(std::string_view text) {
  std::vector<double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view tok = text.substr(0, comma);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
      throw std::invalid_argument("malformed model parameter '" + std::string(tok) + "'");
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

ParametricModel ParametricModel::bernoulli(double p0) {
  if (!(p0 > 0.0 && p0 < 1.0)) throw std::invalid_argument("bernoulli model needs 0 < p0 < 1");
  ParametricModel m;
  m.name = "bernoulli";
  m.log_likelihood = [](double p, Data d) {
    const double s = sum_of(d);
    const double n = static_cast<double>(d.size());
    return s * std::log(p) + (n - s) * std::log1p(-p);
  };
  m.score = [](double p, Data d) {
    const double s = sum_of(d);
    const double n = static_cast<double>(d.size());
    return s / p - (n - s) / (1.0 - p);
  };
  m.second_derivative = [](double p, Data d) {
    const double s = sum_of(d);
    const double n = static_cast<double>(d.size());
    return -s / (p * p) - (n - s) / ((1.0 - p) * (1.0 - p));
  };
  m.fisher_information = [](double p) { return 1.0 / (p * (1.0 - p)); };
  m.sample = [](double p, std::size_t n, std::uint64_t seed) {
    return Sampler(seed).draw(Distribution::bernoulli(p), n);
  };
  m.lower = 0.0;
  m.upper = 1.0;
  m.true_value = p0;
  return m;
}

ParametricModel ParametricModel::normal_mean(double mu0, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(mu0)) {
    throw std::invalid_argument("normal mean model needs finite mu0 and sigma > 0");
  }
  ParametricModel m;
  m.name = "normal";
  const double var = sigma * sigma;
  m.log_likelihood = [var](double t, Data d) {
    double acc = 0.0;
    for (double x : d) acc += (x - t) * (x - t);
    return -0.5 * acc / var;
  };
  m.score = [var](double t, Data d) {
    return (sum_of(d) - static_cast<double>(d.size()) * t) / var;
  };
  m.second_derivative = [var](double, Data d) { return -static_cast<double>(d.size()) / var; };
  m.fisher_information = [var](double) { return 1.0 / var; };
  m.sample = [sigma](double t, std::size_t n, std::uint64_t seed) {
    return Sampler(seed).draw(Distribution::normal(t, sigma), n);
  };
  m.lower = -kInf;
  m.upper = kInf;
  m.true_value = mu0;
  return m;
}

ParametricModel ParametricModel::exponential_rate(double rate0) {
  if (!(rate0 > 0.0)) throw std::invalid_argument("exponential model needs rate0 > 0");
  ParametricModel m;
  m.name = "exponential";
  m.log_likelihood = [](double l, Data d) {
    return static_cast<double>(d.size()) * std::log(l) - l * sum_of(d);
  };
  m.score = [](double l, Data d) { return static_cast<double>(d.size()) / l - sum_of(d); };
  m.second_derivative = [](double l, Data d) { return -static_cast<double>(d.size()) / (l * l); };
  m.fisher_information = [](double l) { return 1.0 / (l * l); };
  m.sample = [](double l, std::size_t n, std::uint64_t seed) {
    return Sampler(seed).draw(Distribution::exponential(l), n);
  };
  m.lower = 0.0;
  m.upper = kInf;
  m.true_value = rate0;
  return m;
}

ParametricModel ParametricModel::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("model must look like family:params, got '" + std::string(spec) + "'");
  }
  const auto family = spec.substr(0, colon);
  const auto p = parse_model_params(spec.substr(colon + 1));
  if (family == "bernoulli" && p.size() == 1) return bernoulli(p[0]);
  if (family == "normal" && p.size() == 1) return normal_mean(p[0]);
  if (family == "normal" && p.size() == 2) return normal_mean(p[0], p[1]);
  if (family == "exponential" && p.size() == 1) return exponential_rate(p[0]);
  throw std::invalid_argument("unsupported model '" + std::string(spec) + "'");
}

double score_consistency_error(const ParametricModel& model, ParametricModel::Data data,
                               std::span<const double> grid, double step) {
  double worst = 0.0;
  for (double t : grid) {
    const double h = step * (1.0 + std::abs(t));
    const double fd =
        (model.log_likelihood(t + h, data) - model.log_likelihood(t - h, data)) / (2.0 * h);
    const double analytic = model.score(t, data);
    worst = std::max(worst, std::abs(fd - analytic) / std::max(1.0, std::abs(analytic)));
  }
  return worst;
}

namespace {

constexpr double kThetaTol = 1e-10;

double golden_section_max(const std::function<double(double)>& f, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  while (hi - lo > kThetaTol) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

MleFit fit_mle(const ParametricModel& model, ParametricModel::Data data) {
  const auto score = [&](double t) { return model.score(t, data); };
  const double edge_lo = std::isfinite(model.lower) ? model.lower + 1e-12 : -kInf;
  const double edge_hi = std::isfinite(model.upper) ? model.upper - 1e-12 : kInf;

  // Grow a search interval around the true value until the score changes
  // sign or both ends reach the parameter-space edges.
  double lo = std::max(edge_lo, model.true_value - 1.0);
  double hi = std::min(edge_hi, model.true_value + 1.0);
  for (int i = 0; i < 200; ++i) {
    const double s_lo = score(lo);
    const double s_hi = score(hi);
    if (s_lo > 0.0 && s_hi < 0.0) break;
    const double w = hi - lo;
    bool grew = false;
    if (s_lo <= 0.0 && lo > edge_lo) {
      lo = std::max(edge_lo, lo - w);
      grew = true;
    }
    if (s_hi >= 0.0 && hi < edge_hi) {
      hi = std::min(edge_hi, hi + w);
      grew = true;
    }
    if (!grew) break;
  }

  MleFit fit;
  if (score(lo) > 0.0 && score(hi) < 0.0) {
    fit.method = "score-bisection";
    while (hi - lo > kThetaTol) {
      const double mid = lo + 0.5 * (hi - lo);
      if (!(mid > lo && mid < hi)) break;
      const double s = score(mid);
      if (s == 0.0) {
        lo = hi = mid;
        break;
      }
      (s > 0.0 ? lo : hi) = mid;
    }
    fit.theta_hat = 0.5 * (lo + hi);
    return fit;
  }

  fit.method = "golden-section";
  fit.theta_hat = golden_section_max([&](double t) { return model.log_likelihood(t, data); }, lo, hi);
  fit.at_boundary = fit.theta_hat - lo < 1e-8 || hi - fit.theta_hat < 1e-8;
  return fit;
}

ScoreExpansionRecord mle_score_expansion(const ParametricModel& model, ParametricModel::Data data,
                                         double theta_hat, const SelectionPolicy& policy) {
  const double theta0 = model.true_value;
  if (!model.in_parameter_space(theta_hat) || !model.in_parameter_space(theta0)) {
    throw DomainError("theta_hat and theta0 must lie inside the parameter space");
  }
  auto shared = std::make_shared<const std::vector<double>>(data.begin(), data.end());
  auto eval = [shared, s = model.score](std::span<const double> t) { return s(t[0], *shared); };
  auto deriv = [shared, d2 = model.second_derivative](std::span<const double> t, const MultiIndex&) {
    return d2(t[0], *shared);
  };
  const double lower = model.lower;
  const double upper = model.upper;
  auto domain = Domain::convex(
      1, [lower, upper](std::span<const double> t) { return lower < t[0] && t[0] < upper; },
      {lower}, {upper});
  const auto score_field = ScalarField::analytic(1, 1, eval, deriv, std::move(domain), "score");

  ScoreExpansionRecord rec;
  rec.theta_hat = theta_hat;
  rec.theta0 = theta0;
  rec.score_hat = model.score(theta_hat, data);
  rec.score0 = model.score(theta0, data);

  const auto sol = solve_selector_uni(score_field, theta0, theta_hat - theta0, 1, policy);
  rec.theta_star = std::clamp(theta0 + sol.xi[0], rec.bracket_lo(), rec.bracket_hi());
  if (theta_hat == theta0) rec.theta_star = theta0;
  rec.curvature_star = model.second_derivative(rec.theta_star, data);
  rec.residual = rec.score_hat - rec.score0 - (theta_hat - theta0) * rec.curvature_star;
  rec.relative_residual = std::abs(rec.residual) / (1.0 + std::abs(rec.score_hat));
  return rec;
}

namespace {

void mean_and_variance(const std::vector<double>& v, double& mean, double& var) {
  mean = 0.0;
  var = 0.0;
  if (v.empty()) return;
  mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  if (v.size() < 2) return;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= static_cast<double>(v.size() - 1);
}

}  // namespace

MleMonteCarloResult mle_monte_carlo(const ParametricModel& model, std::size_t n,
                                    std::size_t replicates, std::uint64_t seed,
                                    const SelectionPolicy& policy) {
  if (n == 0 || replicates == 0) throw std::invalid_argument("sample size and replicates must be >= 1");
  policy.validate();

  std::vector<std::optional<ScoreExpansionRecord>> slots(replicates);
  std::vector<std::string> errors(replicates);
  std::vector<char> boundary(replicates, 0);
  parallel_for(replicates, [&](std::size_t r) {
    try {
      const auto data = model.sample(model.true_value, n, derive_seed(seed, r));
      const auto fit = fit_mle(model, data);
      boundary[r] = fit.at_boundary;
      auto rec = mle_score_expansion(model, data, fit.theta_hat, policy);
      rec.replicate = r;
      rec.at_boundary = fit.at_boundary;
      slots[r] = rec;
    } catch (const std::exception& e) {
      errors[r] = e.what();
      if (errors[r].empty()) errors[r] = "replicate failed";
    }
  });

  MleMonteCarloResult out;
  auto& s = out.summary;
  s.replicates = replicates;
  s.sample_size = n;
  std::vector<double> dev, standardized, stars;
  const double root_n = std::sqrt(static_cast<double>(n));
  const double info_scale = std::sqrt(static_cast<double>(n) * model.fisher_information(model.true_value));
  std::size_t strictly = 0, between = 0;
  for (std::size_t r = 0; r < replicates; ++r) {
    if (boundary[r]) ++s.boundary_count;
    if (!slots[r]) {
      out.failures.push_back({"r" + std::to_string(r), errors[r]});
      continue;
    }
    const auto& rec = *slots[r];
    dev.push_back(root_n * (rec.theta_hat - rec.theta0));
    standardized.push_back(info_scale * (rec.theta_hat - rec.theta0));
    stars.push_back(rec.theta_star);
    if (rec.strictly_between()) ++strictly;
    if (rec.between()) ++between;
    s.max_relative_residual = std::max(s.max_relative_residual, rec.relative_residual);
    out.records.push_back(rec);
  }
  s.failures = out.failures.size();
  const double solved = static_cast<double>(out.records.size());
  if (solved > 0) {
    s.strictly_between_fraction = static_cast<double>(strictly) / solved;
    s.between_fraction = static_cast<double>(between) / solved;
    mean_and_variance(dev, s.root_n_deviation_mean, s.root_n_deviation_variance);
    double star_var = 0.0;
    mean_and_variance(stars, s.theta_star_mean, star_var);
    s.theta_star_stddev = std::sqrt(star_var);
    s.ks_distance = ks_distance_standard_normal(std::move(standardized));
  }
  return out;
}

DeltaReport delta_method_experiment(const ScalarField& g, double mu, const Distribution& sampler,
                                    std::size_t n, std::size_t replicates, std::uint64_t seed,
                                    const SelectionPolicy& policy) {
  if (g.arity() != 1) throw ArityError("delta method needs a univariate transform");
  if (n == 0 || replicates == 0) throw std::invalid_argument("sample size and replicates must be >= 1");
  policy.validate();
  const double slope = g.derivative(mu, 1);
  if (slope == 0.0) {
    std::ostringstream os;
    os << "g'(mu) = 0 at mu = " << mu
       << ": the first-order delta method gives a degenerate limit; use a second-order expansion";
    throw std::invalid_argument(os.str());
  }

  DeltaReport rep;
  rep.replicates = replicates;
  rep.sample_size = n;
  rep.mu = mu;
  rep.sigma = sampler.stddev();
  rep.sample_means.resize(replicates);
  rep.standardized.resize(replicates);
  rep.xi.resize(replicates);
  rep.residuals.resize(replicates);

  const double g_mu = g(mu);
  const double root_n = std::sqrt(static_cast<double>(n));
  const double denom = rep.sigma * std::abs(slope);
  std::vector<std::string> errors(replicates);
  parallel_for(replicates, [&](std::size_t r) {
    try {
      Sampler s(derive_seed(seed, r));
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) acc += s.draw(sampler);
      const double mean = acc / static_cast<double>(n);
      const auto sol = solve_selector_uni(g, mu, mean - mu, 1, policy);
      rep.sample_means[r] = mean;
      rep.xi[r] = std::clamp(mu + sol.xi[0], std::min(mu, mean), std::max(mu, mean));
      rep.residuals[r] = sol.residual;
      rep.standardized[r] = root_n * (g(mean) - g_mu) / denom;
    } catch (const std::exception& e) {
      errors[r] = e.what();
      if (errors[r].empty()) errors[r] = "replicate failed";
    }
  });

  std::vector<OutcomeFailure> failures;
  for (std::size_t r = 0; r < replicates; ++r) {
    if (!errors[r].empty()) failures.push_back({"r" + std::to_string(r), errors[r]});
  }
  if (!failures.empty()) throw SampleSolveError(std::move(failures));

  for (std::size_t r = 0; r < replicates; ++r) {
    rep.max_abs_xi_deviation = std::max(rep.max_abs_xi_deviation, std::abs(rep.xi[r] - mu));
    const double lo = std::min(mu, rep.sample_means[r]);
    const double hi = std::max(mu, rep.sample_means[r]);
    if (rep.xi[r] < lo || rep.xi[r] > hi) rep.all_between = false;
  }
  rep.ks_distance = ks_distance_standard_normal(rep.standardized);
  return rep;
}

DeltaSweep delta_method_sweep(const ScalarField& g, double mu, const Distribution& sampler,
                              std::span<const std::size_t> sample_sizes, std::size_t replicates,
                              std::uint64_t seed, const SelectionPolicy& policy) {
  DeltaSweep sweep;
  for (std::size_t k = 0; k < sample_sizes.size(); ++k) {
    sweep.reports.push_back(
        delta_method_experiment(g, mu, sampler, sample_sizes[k], replicates, derive_seed(seed, k), policy));
  }
  for (std::size_t k = 1; k < sweep.reports.size(); ++k) {
    if (sweep.reports[k].max_abs_xi_deviation > sweep.reports[k - 1].max_abs_xi_deviation) {
      sweep.xi_deviation_non_increasing = false;
    }
  }
  return sweep;
}

TwoRvResult two_rv_selector(const ScalarField& f, const RandomVariable& X, const RandomVariable& Y,
                            const SelectionPolicy& policy) {
  if (f.arity() != 1 || X.dimension() != 1 || Y.dimension() != 1) {
    throw ArityError("two-variable selector needs a univariate field and scalar variables");
  }
  if (X.space() != Y.space()) {
    throw std::invalid_argument("X and Y must share the same probability space");
  }
  policy.validate();

  const std::size_t n = X.size();
  std::vector<std::optional<SelectionResult>> slots(n);
  std::vector<double> xi(n);
  std::vector<std::string> errors(n);
  parallel_for(n, [&](std::size_t i) {
    const double x = X.scalar_value(i);
    const double y = Y.scalar_value(i);
    try {
      auto sol = solve_selector_uni(f, y, x - y, 1, policy);
      xi[i] = x == y ? x : std::clamp(y + sol.xi[0], std::min(x, y), std::max(x, y));
      slots[i] = std::move(sol);
    } catch (const std::exception& e) {
      errors[i] = e.what();
      if (errors[i].empty()) errors[i] = "solver failure";
    }
  });

  std::vector<OutcomeFailure> failures;
  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i].empty()) failures.push_back({X.space()->outcome(i), errors[i]});
  }
  if (!failures.empty()) throw SampleSolveError(std::move(failures));

  std::vector<SelectionResult> solutions;
  solutions.reserve(n);
  for (auto& s : slots) solutions.push_back(std::move(*s));
  auto xi_rv = RandomVariable::scalar(X.space(), std::move(xi));
  auto sigma = sigma_generated_by(joint(X, Y));
  const bool measurable = is_measurable_wrt(xi_rv, sigma);
  return TwoRvResult{std::move(xi_rv), std::move(solutions), std::move(sigma), measurable};
}

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double ks_distance_standard_normal(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double cdf = standard_normal_cdf(values[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - cdf, cdf - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace smvt
