#include "smvt/experiment.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <set>
#include <sstream>

#include "smvt/builtins.hpp"
#include "smvt/errors.hpp"
#include "smvt/probability.hpp"
#include "smvt/report.hpp"
#include "smvt/sampling.hpp"
#include "smvt/stats.hpp"
#include "smvt/taylor.hpp"

namespace smvt {

using nlohmann::json;

std::string to_string(Command c) {
  switch (c) {
    case Command::expand: return "expand";
    case Command::solve: return "solve";
    case Command::verify: return "verify";
    case Command::measurability: return "measurability";
    case Command::mle_demo: return "mle-demo";
    case Command::delta_demo: return "delta-demo";
    case Command::two_rv: return "two-rv";
  }
  return "unknown";
}

Command parse_command(const std::string& s) {
  for (Command c : {Command::expand, Command::solve, Command::verify, Command::measurability,
                    Command::mle_demo, Command::delta_demo, Command::two_rv}) {
    if (s == to_string(c)) return c;
  }
  throw std::invalid_argument("unknown command '" + s + "'");
}

bool is_stochastic(Command c) {
  return c == Command::verify || c == Command::mle_demo || c == Command::delta_demo ||
         c == Command::two_rv;
}

namespace {

const std::set<std::string> kConfigKeys = {
    "command", "function", "anchor", "increment", "order", "policy", "verify_tol",
    "seed", "distribution", "y_distribution", "N", "reps", "sample_size", "model",
    "mu", "space", "y_space", "output_dir", "output_prefix"};

const std::set<std::string> kPolicyKeys = {"variant", "scan_points", "refine_tol", "residual_tol"};

double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(path, "expected a finite number");
  return d;
}

std::string get_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  return v.get<std::string>();
}

std::uint64_t get_unsigned(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::uint64_t>(v.get<long long>());
  throw ConfigError(path, "expected a nonnegative integer");
}

std::vector<double> get_numbers(const json& v, const std::string& path) {
  if (v.is_number()) return {get_number(v, path)};
  if (!v.is_array() || v.empty()) throw ConfigError(path, "expected a number or a nonempty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(get_number(v[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("$", "config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!kConfigKeys.count(key)) throw ConfigError("$." + key, "unknown field");
  }
  ExperimentConfig c;
  if (!j.contains("command")) throw ConfigError("$.command", "required");
  try {
    c.command = parse_command(get_string(j["command"], "$.command"));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("$.command", e.what());
  }
  if (j.contains("function")) c.function = get_string(j["function"], "$.function");
  if (j.contains("anchor")) c.anchor = get_numbers(j["anchor"], "$.anchor");
  if (j.contains("increment") && !j["increment"].is_null()) {
    c.increment = get_numbers(j["increment"], "$.increment");
  }
  if (j.contains("order")) {
    const auto n = get_unsigned(j["order"], "$.order");
    if (n < 1 || n > 64) throw ConfigError("$.order", "expected an integer in [1, 64]");
    c.order = static_cast<int>(n);
  }
  if (j.contains("policy")) {
    const auto& p = j["policy"];
    if (!p.is_object()) throw ConfigError("$.policy", "expected an object");
    for (const auto& [key, _] : p.items()) {
      if (!kPolicyKeys.count(key)) throw ConfigError("$.policy." + key, "unknown field");
    }
    if (p.contains("variant")) {
      try {
        c.policy.variant = parse_selector_variant(get_string(p["variant"], "$.policy.variant"));
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        throw ConfigError("$.policy.variant", e.what());
      }
    }
    if (p.contains("scan_points")) {
      const auto n = get_unsigned(p["scan_points"], "$.policy.scan_points");
      if (n > 100'000'000) throw ConfigError("$.policy.scan_points", "too large");
      c.policy.scan_points = static_cast<int>(n);
    }
    if (p.contains("refine_tol")) c.policy.refine_tol = get_number(p["refine_tol"], "$.policy.refine_tol");
    if (p.contains("residual_tol")) {
      c.policy.residual_tol = get_number(p["residual_tol"], "$.policy.residual_tol");
    }
  }
  if (j.contains("verify_tol")) c.verify_tol = get_number(j["verify_tol"], "$.verify_tol");
  if (j.contains("seed") && !j["seed"].is_null()) c.seed = get_unsigned(j["seed"], "$.seed");
  if (j.contains("distribution")) c.distribution = get_string(j["distribution"], "$.distribution");
  if (j.contains("y_distribution")) c.y_distribution = get_string(j["y_distribution"], "$.y_distribution");
  if (j.contains("N")) c.count = get_unsigned(j["N"], "$.N");
  if (j.contains("reps")) c.replicates = get_unsigned(j["reps"], "$.reps");
  if (j.contains("sample_size")) c.sample_size = get_unsigned(j["sample_size"], "$.sample_size");
  if (j.contains("model")) c.model = get_string(j["model"], "$.model");
  if (j.contains("mu") && !j["mu"].is_null()) c.mu = get_number(j["mu"], "$.mu");
  if (j.contains("space")) c.space_path = get_string(j["space"], "$.space");
  if (j.contains("y_space")) c.y_space_path = get_string(j["y_space"], "$.y_space");
  if (j.contains("output_dir")) c.output_dir = get_string(j["output_dir"], "$.output_dir");
  if (j.contains("output_prefix")) c.output_prefix = get_string(j["output_prefix"], "$.output_prefix");
  return c;
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["command"] = to_string(c.command);
  j["function"] = c.function;
  j["anchor"] = c.anchor;
  if (c.increment.empty()) {
    j["increment"] = nullptr;
  } else {
    j["increment"] = c.increment;
  }
  j["order"] = c.order;
  j["policy"] = {{"variant", to_string(c.policy.variant)},
                 {"scan_points", c.policy.scan_points},
                 {"refine_tol", c.policy.refine_tol},
                 {"residual_tol", c.policy.residual_tol}};
  j["verify_tol"] = c.verify_tol;
  j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
  j["distribution"] = c.distribution;
  j["y_distribution"] = c.y_distribution;
  j["N"] = c.count;
  j["reps"] = c.replicates;
  j["sample_size"] = c.sample_size;
  j["model"] = c.model;
  j["mu"] = c.mu ? json(*c.mu) : json(nullptr);
  j["space"] = c.space_path;
  j["y_space"] = c.y_space_path;
  j["output_dir"] = c.output_dir;
  j["output_prefix"] = c.output_prefix;
  return j;
}

namespace {

ScalarField field_or_throw(const std::string& spec) {
  try {
    return builtins::from_spec(spec);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("$.function", e.what());
  }
}

Distribution distribution_or_throw(const std::string& spec, const std::string& path) {
  try {
    return Distribution::parse(spec);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
}

void require_finite(const std::vector<double>& v, const std::string& path) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) throw ConfigError(path + "[" + std::to_string(i) + "]", "must be finite");
  }
}

}  // namespace

void validate(const ExperimentConfig& c) {
  if (c.policy.scan_points < 2) throw ConfigError("$.policy.scan_points", "must be >= 2");
  if (!(c.policy.refine_tol > 0.0) || !std::isfinite(c.policy.refine_tol)) {
    throw ConfigError("$.policy.refine_tol", "must be a positive finite number");
  }
  if (!(c.policy.residual_tol > 0.0) || !std::isfinite(c.policy.residual_tol)) {
    throw ConfigError("$.policy.residual_tol", "must be a positive finite number");
  }
  if (c.order < 1) throw ConfigError("$.order", "must be >= 1");
  if (!(c.verify_tol > 0.0) || !std::isfinite(c.verify_tol)) {
    throw ConfigError("$.verify_tol", "must be a positive finite number");
  }
  if (c.mu && !std::isfinite(*c.mu)) throw ConfigError("$.mu", "must be finite");
  if (c.output_prefix.find('/') != std::string::npos) {
    throw ConfigError("$.output_prefix", "must be a file name, not a path");
  }

  const auto f = field_or_throw(c.function);
  if (c.order > f.max_order()) throw ConfigError("$.order", "exceeds the function's max order");
  require_finite(c.anchor, "$.anchor");
  const bool uses_anchor = c.command == Command::expand || c.command == Command::solve ||
                           c.command == Command::verify || c.command == Command::measurability;
  if (uses_anchor && c.anchor.size() != f.arity()) {
    throw ConfigError("$.anchor", "needs " + std::to_string(f.arity()) + " component(s) for '" +
                                      c.function + "'");
  }

  const bool two_rv_from_spaces = c.command == Command::two_rv && !c.space_path.empty();
  if (is_stochastic(c.command) && !two_rv_from_spaces && !c.seed) {
    throw ConfigError("$.seed", "required for stochastic commands");
  }

  switch (c.command) {
    case Command::expand:
    case Command::solve:
      if (c.increment.size() != f.arity()) {
        throw ConfigError("$.increment", "needs " + std::to_string(f.arity()) + " component(s)");
      }
      require_finite(c.increment, "$.increment");
      break;
    case Command::verify:
      distribution_or_throw(c.distribution, "$.distribution");
      if (c.count < 1) throw ConfigError("$.N", "must be >= 1");
      break;
    case Command::measurability:
      if (c.space_path.empty()) throw ConfigError("$.space", "required for measurability");
      break;
    case Command::mle_demo:
      try {
        ParametricModel::parse(c.model);
      } catch (const std::invalid_argument& e) {
        throw ConfigError("$.model", e.what());
      }
      if (c.replicates < 1) throw ConfigError("$.reps", "must be >= 1");
      if (c.sample_size < 1) throw ConfigError("$.sample_size", "must be >= 1");
      break;
    case Command::delta_demo:
      if (f.arity() != 1) throw ConfigError("$.function", "delta-demo needs a univariate function");
      distribution_or_throw(c.distribution, "$.distribution");
      if (c.replicates < 1) throw ConfigError("$.reps", "must be >= 1");
      if (c.sample_size < 1) throw ConfigError("$.sample_size", "must be >= 1");
      break;
    case Command::two_rv:
      if (f.arity() != 1) throw ConfigError("$.function", "two-rv needs a univariate function");
      if (two_rv_from_spaces) {
        if (c.y_space_path.empty()) throw ConfigError("$.y_space", "required together with $.space");
      } else {
        distribution_or_throw(c.distribution, "$.distribution");
        if (c.y_distribution.empty()) {
          throw ConfigError("$.y_distribution", "required when no space files are given");
        }
        distribution_or_throw(c.y_distribution, "$.y_distribution");
        if (c.count < 1) throw ConfigError("$.N", "must be >= 1");
      }
      break;
  }
}

std::string resolve_output_dir(const ExperimentConfig& c) {
  if (!c.output_dir.empty()) return c.output_dir;
  if (const char* env = std::getenv("SMVT_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

namespace {

std::string fmt(double v) { return report::format_number(v); }

std::vector<double> add(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

double relative(double residual, double value) { return std::abs(residual) / (1.0 + std::abs(value)); }

/// Collected output of one command before it is written.
struct Collected {
  std::vector<report::CsvRow> rows;
  json results = json::object();
  std::vector<OutcomeFailure> failures;
  std::size_t outcomes = 0;
  double max_residual = 0.0;
  std::vector<std::string> messages;
};

// Recomputes the remainder at the selected point from the field directly.
double remainder_at(const ScalarField& f, std::span<const double> a, std::span<const double> x,
                    std::span<const double> xi, int n) {
  const auto point = add(a, xi);
  if (f.arity() == 1) return f.derivative(point[0], n) * std::pow(x[0], n) / factorial(n);
  return directional_power(f, point, x, n) / factorial(n);
}

double partial_sum(const ScalarField& f, std::span<const double> a, std::span<const double> x, int n) {
  if (f.arity() == 1) return partial_sum_uni(f, a[0], x[0], n);
  return partial_sum_multi(f, a, x, n);
}

SelectionResult select(const ScalarField& f, std::span<const double> a, std::span<const double> x,
                       int n, const SelectionPolicy& policy) {
  if (f.arity() == 1) return solve_selector_uni(f, a[0], x[0], n, policy);
  return solve_selector_multi(f, a, x, n, policy);
}

Collected run_solve(const ExperimentConfig& c) {
  Collected out;
  out.outcomes = 1;
  const auto f = builtins::from_spec(c.function);
  try {
    const auto sol = select(f, c.anchor, c.increment, c.order, c.policy);
    const auto point = add(c.anchor, sol.xi);
    out.rows.push_back({"0", c.increment, point, sol.theta, sol.residual});
    out.max_residual = sol.relative_residual();
    out.results = {{"xi", sol.xi},
                   {"point", point},
                   {"theta", sol.theta},
                   {"residual", sol.residual},
                   {"pi", sol.pi},
                   {"root_count_estimate", sol.root_count_estimate}};
    out.messages.push_back("xi: " + report::format_vector(sol.xi));
    out.messages.push_back("point: " + report::format_vector(point));
    out.messages.push_back("theta: " + fmt(sol.theta));
    out.messages.push_back("residual: " + fmt(sol.residual));
  } catch (const std::exception& e) {
    out.failures.push_back({"0", e.what()});
  }
  return out;
}

Collected run_expand(const ExperimentConfig& c) {
  Collected out;
  out.outcomes = 1;
  const auto f = builtins::from_spec(c.function);
  try {
    const int n = c.order;
    const double value = f(add(c.anchor, c.increment));
    const double ps = partial_sum(f, c.anchor, c.increment, n);
    const auto sol = select(f, c.anchor, c.increment, n, c.policy);
    const double lagrange = remainder_at(f, c.anchor, c.increment, sol.xi, n);
    const auto integral = integral_remainder_vec(VectorField({f}), c.anchor, c.increment, n);
    const double lag_res = relative(value - ps - lagrange, value);
    const double int_res = relative(value - ps - integral.value[0], value);
    const auto point = add(c.anchor, sol.xi);
    out.rows.push_back({"0", c.increment, point, sol.theta, value - ps - lagrange});
    out.max_residual = lag_res;
    out.results = {{"value", value},
                   {"partial_sum", ps},
                   {"lagrange_remainder", lagrange},
                   {"point", point},
                   {"theta", sol.theta},
                   {"integral_remainder", integral.value[0]},
                   {"integral_converged", integral.converged},
                   {"lagrange_identity_residual", lag_res},
                   {"integral_identity_residual", int_res}};
    out.messages.push_back("f(a + x): " + fmt(value));
    out.messages.push_back("partial sum (order " + std::to_string(n - 1) + "): " + fmt(ps));
    out.messages.push_back("Lagrange remainder at theta = " + fmt(sol.theta) + ": " + fmt(lagrange));
    out.messages.push_back("integral remainder: " + fmt(integral.value[0]) +
                           (integral.converged ? "" : " (quadrature not converged)"));
  } catch (const std::exception& e) {
    out.failures.push_back({"0", e.what()});
  }
  return out;
}

Collected run_verify(const ExperimentConfig& c) {
  Collected out;
  const auto f = builtins::from_spec(c.function);
  const auto dist = Distribution::parse(c.distribution);
  const std::size_t p = f.arity();
  Sampler sampler(*c.seed);
  auto draws = sampler.draw(dist, c.count * p);
  auto space = std::make_shared<const FiniteProbabilitySpace>(FiniteProbabilitySpace::uniform(c.count));
  const RandomVariable X(space, p, std::move(draws));
  out.outcomes = c.count;

  const auto solved = solve_over_sample(f, c.anchor, X, c.order, c.policy);
  out.failures = solved.failures;
  std::size_t passed = 0;
  std::size_t containment_failures = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (!solved.results[i]) continue;
    const auto& sol = *solved.results[i];
    const auto x = X.value(i);
    const double value = f(add(c.anchor, x));
    const double residual = value - partial_sum(f, c.anchor, x, c.order) -
                            remainder_at(f, c.anchor, x, sol.xi, c.order);
    const double rel = relative(residual, value);
    const bool contained = p == 1 ? sol.bracket.contains(sol.xi[0]) : sol.theta >= 0.0 && sol.theta <= 1.0;
    out.max_residual = std::max(out.max_residual, rel);
    out.rows.push_back({space->outcome(i), {x.begin(), x.end()}, add(c.anchor, sol.xi), sol.theta, residual});
    if (!contained) {
      ++containment_failures;
      out.failures.push_back({space->outcome(i), "intermediate point outside the candidate bracket"});
    } else if (rel > c.verify_tol) {
      out.failures.push_back({space->outcome(i), "relative residual " + fmt(rel) + " exceeds " + fmt(c.verify_tol)});
    } else {
      ++passed;
    }
  }
  const double rate = static_cast<double>(passed) / static_cast<double>(c.count);
  out.results = {{"passed", passed},
                 {"pass_rate", rate},
                 {"containment_failures", containment_failures},
                 {"residual_tol", c.verify_tol}};
  out.messages.push_back("passed: " + std::to_string(passed) + "/" + std::to_string(c.count) + " (" +
                         fmt(100.0 * rate) + "%)");
  out.messages.push_back("max relative residual: " + fmt(out.max_residual));
  return out;
}

Collected run_measurability(const ExperimentConfig& c) {
  Collected out;
  const auto f = builtins::from_spec(c.function);
  const auto loaded = load_space_file(c.space_path);
  if (!loaded.variable) throw ConfigError("$.space", "space file has no \"values\" for X");
  const auto& X = *loaded.variable;
  if (X.dimension() != f.arity()) {
    throw ConfigError("$.space", "value dimension does not match the arity of '" + c.function + "'");
  }
  out.outcomes = X.size();
  const auto solved = solve_over_sample(f, c.anchor, X, c.order, c.policy);
  out.failures = solved.failures;
  if (!out.failures.empty()) return out;

  std::vector<double> flat;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const auto& sol = *solved.results[i];
    flat.insert(flat.end(), sol.xi.begin(), sol.xi.end());
    out.max_residual = std::max(out.max_residual, sol.relative_residual());
    const auto x = X.value(i);
    out.rows.push_back({X.space()->outcome(i), {x.begin(), x.end()}, add(c.anchor, sol.xi), sol.theta, sol.residual});
  }
  const RandomVariable xi(X.space(), X.dimension(), std::move(flat));
  const auto sigma_x = sigma_generated_by(X);
  const bool measurable = is_measurable_wrt(xi, sigma_x);
  out.results = {{"measurable", measurable},
                 {"sigma_x_atoms", sigma_x.size()},
                 {"sigma_xi_atoms", sigma_generated_by(xi).size()}};
  out.messages.push_back(std::string("measurable: ") + (measurable ? "true" : "false"));
  out.messages.push_back("atoms of sigma(X): " + std::to_string(sigma_x.size()));
  return out;
}

Collected run_mle(const ExperimentConfig& c) {
  Collected out;
  const auto model = ParametricModel::parse(c.model);
  const auto mc = mle_monte_carlo(model, c.sample_size, c.replicates, *c.seed, c.policy);
  out.outcomes = c.replicates;
  out.failures = mc.failures;
  std::size_t residual_failures = 0;
  for (const auto& rec : mc.records) {
    const std::string id = "r" + std::to_string(rec.replicate);
    const double inc = rec.theta_hat - rec.theta0;
    const double theta = inc == 0.0 ? 0.0 : (rec.theta_star - rec.theta0) / inc;
    out.rows.push_back({id, {inc}, {rec.theta_star}, theta, rec.residual});
    if (rec.relative_residual > c.verify_tol || !rec.between()) {
      ++residual_failures;
      out.failures.push_back({id, "score expansion residual " + fmt(rec.relative_residual) +
                                      (rec.between() ? "" : " or theta* outside [theta_hat, theta0]")});
    }
  }
  const auto& s = mc.summary;
  out.max_residual = s.max_relative_residual;
  out.results = {{"boundary_count", s.boundary_count},
                 {"strictly_between_fraction", s.strictly_between_fraction},
                 {"between_fraction", s.between_fraction},
                 {"root_n_deviation_mean", s.root_n_deviation_mean},
                 {"root_n_deviation_variance", s.root_n_deviation_variance},
                 {"ks_distance", s.ks_distance},
                 {"theta_star_mean", s.theta_star_mean},
                 {"theta_star_stddev", s.theta_star_stddev},
                 {"residual_failures", residual_failures}};
  out.messages.push_back("replicates: " + std::to_string(c.replicates) + ", boundary: " +
                         std::to_string(s.boundary_count));
  out.messages.push_back("theta* strictly between theta_hat and theta0: " + fmt(s.strictly_between_fraction));
  out.messages.push_back("max relative residual: " + fmt(s.max_relative_residual));
  out.messages.push_back("KS distance of sqrt(n I) (theta_hat - theta0): " + fmt(s.ks_distance));
  return out;
}

Collected run_delta(const ExperimentConfig& c) {
  Collected out;
  const auto g = builtins::from_spec(c.function);
  const auto dist = Distribution::parse(c.distribution);
  const double mu = c.mu ? *c.mu : dist.mean();
  if (g.derivative(mu, 1) == 0.0) {
    throw ConfigError("$.function", "g'(mu) = 0 at mu = " + fmt(mu) + "; the first-order delta method degenerates");
  }
  out.outcomes = c.replicates;
  try {
    const auto rep = delta_method_experiment(g, mu, dist, c.sample_size, c.replicates, *c.seed, c.policy);
    const double g_mu = g(mu);
    for (std::size_t r = 0; r < rep.replicates; ++r) {
      const double inc = rep.sample_means[r] - mu;
      const double theta = inc == 0.0 ? 0.0 : (rep.xi[r] - mu) / inc;
      out.rows.push_back({"r" + std::to_string(r), {inc}, {rep.xi[r]}, theta, rep.residuals[r]});
      out.max_residual = std::max(out.max_residual, relative(rep.residuals[r], g(rep.sample_means[r]) - g_mu));
    }
    const double critical = 1.63 / std::sqrt(static_cast<double>(c.replicates));
    out.results = {{"ks_distance", rep.ks_distance},
                   {"ks_critical_1pct", critical},
                   {"max_abs_xi_deviation", rep.max_abs_xi_deviation},
                   {"all_between", rep.all_between},
                   {"mu", mu},
                   {"sigma", rep.sigma}};
    out.messages.push_back("KS distance to N(0,1): " + fmt(rep.ks_distance) + " (1% critical " + fmt(critical) + ")");
    out.messages.push_back("max |xi - mu|: " + fmt(rep.max_abs_xi_deviation));
  } catch (const SampleSolveError& e) {
    out.failures = e.failures();
  }
  return out;
}

Collected run_two_rv(const ExperimentConfig& c) {
  Collected out;
  const auto f = builtins::from_spec(c.function);
  std::optional<RandomVariable> X, Y;
  if (!c.space_path.empty()) {
    const auto lx = load_space_file(c.space_path);
    const auto ly = load_space_file(c.y_space_path);
    if (!lx.variable) throw ConfigError("$.space", "space file has no \"values\" for X");
    if (!ly.variable) throw ConfigError("$.y_space", "space file has no \"values\" for Y");
    if (lx.space->outcomes() != ly.space->outcomes() || lx.space->atoms() != ly.space->atoms() ||
        lx.space->weights() != ly.space->weights()) {
      throw ConfigError("$.y_space", "must describe the same outcomes, atoms and weights as $.space");
    }
    if (lx.variable->dimension() != 1 || ly.variable->dimension() != 1) {
      throw ConfigError("$.space", "two-rv needs scalar values");
    }
    X = *lx.variable;
    Y = RandomVariable(lx.space, 1, ly.variable->flat());
  } else {
    auto space = std::make_shared<const FiniteProbabilitySpace>(FiniteProbabilitySpace::uniform(c.count));
    X = RandomVariable::scalar(space, SampleStream{*c.seed, Distribution::parse(c.distribution), c.count}.draw());
    Y = RandomVariable::scalar(
        space, SampleStream{derive_seed(*c.seed, 1), Distribution::parse(c.y_distribution), c.count}.draw());
  }
  out.outcomes = X->size();
  try {
    const auto res = two_rv_selector(f, *X, *Y, c.policy);
    bool all_between = true;
    for (std::size_t i = 0; i < X->size(); ++i) {
      const double x = X->scalar_value(i);
      const double y = Y->scalar_value(i);
      const double xi = res.xi.scalar_value(i);
      if (xi < std::min(x, y) || xi > std::max(x, y)) all_between = false;
      const auto& sol = res.solutions[i];
      out.max_residual = std::max(out.max_residual, sol.relative_residual());
      out.rows.push_back({X->space()->outcome(i), {x - y}, {xi}, sol.theta, sol.residual});
    }
    out.results = {{"measurable", res.measurable},
                   {"joint_atoms", res.joint_sigma.size()},
                   {"all_between", all_between}};
    out.messages.push_back(std::string("measurable wrt sigma(X, Y): ") + (res.measurable ? "true" : "false"));
    out.messages.push_back("atoms of sigma(X, Y): " + std::to_string(res.joint_sigma.size()));
  } catch (const SampleSolveError& e) {
    out.failures = e.failures();
  }
  return out;
}

}  // namespace

RunOutcome run(const ExperimentConfig& config) {
  RunOutcome outcome;
  Collected collected;
  try {
    validate(config);
    switch (config.command) {
      case Command::solve: collected = run_solve(config); break;
      case Command::expand: collected = run_expand(config); break;
      case Command::verify: collected = run_verify(config); break;
      case Command::measurability: collected = run_measurability(config); break;
      case Command::mle_demo: collected = run_mle(config); break;
      case Command::delta_demo: collected = run_delta(config); break;
      case Command::two_rv: collected = run_two_rv(config); break;
    }
  } catch (const ConfigError& e) {
    outcome.exit_code = 1;
    outcome.messages.push_back(std::string("config error: ") + e.what());
    return outcome;
  }

  json summary;
  summary["schema_version"] = report::kSchemaVersion;
  summary["command"] = to_string(config.command);
  summary["config"] = to_json(config);
  summary["outcomes"] = collected.outcomes;
  summary["failures"] = collected.failures.size();
  auto failed = json::array();
  for (const auto& f : collected.failures) failed.push_back({{"id", f.outcome_id}, {"message", f.message}});
  summary["failed_outcomes"] = std::move(failed);
  summary["max_residual"] = collected.max_residual;
  summary["results"] = std::move(collected.results);

  outcome.summary = std::move(summary);
  outcome.csv = report::to_csv(collected.rows);
  outcome.messages = std::move(collected.messages);
  for (const auto& f : collected.failures) {
    outcome.messages.push_back("failed [" + f.outcome_id + "]: " + f.message);
  }
  outcome.exit_code = collected.failures.empty() ? 0 : 2;

  const std::filesystem::path dir = resolve_output_dir(config);
  const std::string prefix = config.output_prefix.empty() ? to_string(config.command) : config.output_prefix;
  std::filesystem::create_directories(dir);
  outcome.csv_path = (dir / (prefix + ".csv")).string();
  outcome.json_path = (dir / (prefix + ".json")).string();
  report::write_text_file(outcome.csv_path, outcome.csv);
  report::write_text_file(outcome.json_path, outcome.summary.dump(2) + "\n");
  return outcome;
}

}  // namespace smvt
