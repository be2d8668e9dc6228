#include "smvt/builtins.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "smvt/errors.hpp"

namespace smvt::builtins {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Wraps a univariate (x, k) -> f^(k)(x) rule as an analytic field.
ScalarField univariate(std::function<double(double, int)> rule, int max_order, Domain domain,
                       std::string name) {
  auto eval = [rule](std::span<const double> x) { return rule(x[0], 0); };
  auto deriv = [rule](std::span<const double> x, const MultiIndex& a) { return rule(x[0], a[0]); };
  return ScalarField::analytic(1, max_order, std::move(eval), std::move(deriv), std::move(domain),
                               std::move(name));
}

double falling(int n, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= n - i;
  return r;
}

constexpr int kUnbounded = 64;

std::vector<double> parse_numbers(std::string_view text, std::string_view spec) {
  std::vector<double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string_view tok = text.substr(0, comma);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) {
      throw std::invalid_argument("malformed number '" + std::string(tok) + "' in function '" +
                                  std::string(spec) + "'");
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

ScalarField polynomial(std::vector<double> coefficients) {
  if (coefficients.empty()) coefficients.push_back(0.0);
  const int degree = static_cast<int>(coefficients.size()) - 1;
  auto rule = [c = std::move(coefficients), degree](double x, int k) {
    if (k > degree) return 0.0;
    double acc = 0.0;
    for (int j = degree; j >= k; --j) acc = acc * x + c[static_cast<std::size_t>(j)] * falling(j, k);
    return acc;
  };
  return univariate(std::move(rule), kUnbounded, Domain::interval(-kInf, kInf), "poly");
}

ScalarField exponential() {
  return univariate([](double x, int) { return std::exp(x); }, kUnbounded,
                    Domain::interval(-kInf, kInf), "exp");
}

ScalarField sine() {
  return univariate(sin_factor(), kUnbounded, Domain::interval(-kInf, kInf), "sin");
}

ScalarField cosine() {
  return univariate(cos_factor(), kUnbounded, Domain::interval(-kInf, kInf), "cos");
}

ScalarField shifted_log(double shift, double margin) {
  const double lower = -shift + margin;
  auto rule = [shift](double x, int k) {
    const double u = shift + x;
    if (k == 0) return std::log(u);
    // (-1)^(k-1) (k-1)! / u^k
    const double mag = factorial(k - 1) / std::pow(u, k);
    return (k % 2 == 1) ? mag : -mag;
  };
  Domain dom = Domain::convex(
      1, [lower](std::span<const double> x) { return std::isfinite(x[0]) && x[0] > lower; },
      {lower}, {kInf});
  return univariate(std::move(rule), kUnbounded, std::move(dom), "log");
}

ScalarField multivariate_polynomial(std::size_t arity, std::vector<Monomial> terms) {
  for (const auto& t : terms) {
    if (t.powers.size() != arity) throw ArityError("monomial powers do not match arity");
    for (int p : t.powers) {
      if (p < 0) throw std::invalid_argument("monomial powers must be nonnegative");
    }
  }
  auto shared = std::make_shared<const std::vector<Monomial>>(std::move(terms));
  auto deriv = [shared](std::span<const double> x, const MultiIndex& alpha) {
    double total = 0.0;
    for (const auto& t : *shared) {
      double term = t.coefficient;
      for (std::size_t q = 0; q < x.size() && term != 0.0; ++q) {
        const int p = t.powers[q];
        const int i = alpha[q];
        if (i > p) {
          term = 0.0;
          break;
        }
        term *= falling(p, i) * std::pow(x[q], p - i);
      }
      total += term;
    }
    return total;
  };
  auto eval = [deriv, arity](std::span<const double> x) {
    return deriv(x, MultiIndex::zero(arity));
  };
  return ScalarField::analytic(arity, kUnbounded, std::move(eval), std::move(deriv),
                               Domain::whole(arity), "mpoly");
}

ScalarField exp_linear(std::vector<double> weights) {
  const std::size_t arity = weights.size();
  if (arity == 0) throw std::invalid_argument("exp_linear needs at least one weight");
  auto w = std::make_shared<const std::vector<double>>(std::move(weights));
  auto eval = [w](std::span<const double> x) {
    return std::exp(std::inner_product(x.begin(), x.end(), w->begin(), 0.0));
  };
  auto deriv = [w, eval](std::span<const double> x, const MultiIndex& alpha) {
    return alpha.monomial(*w) * eval(x);
  };
  return ScalarField::analytic(arity, kUnbounded, eval, std::move(deriv), Domain::whole(arity),
                               "expdot");
}

Factor exp_factor() {
  return [](double x, int) { return std::exp(x); };
}

Factor sin_factor() {
  return [](double x, int k) {
    switch (k % 4) {
      case 0: return std::sin(x);
      case 1: return std::cos(x);
      case 2: return -std::sin(x);
      default: return -std::cos(x);
    }
  };
}

Factor cos_factor() {
  return [](double x, int k) {
    switch (k % 4) {
      case 0: return std::cos(x);
      case 1: return -std::sin(x);
      case 2: return -std::cos(x);
      default: return std::sin(x);
    }
  };
}

Factor power_factor(int degree) {
  if (degree < 0) throw std::invalid_argument("power factor degree must be nonnegative");
  return [degree](double x, int k) {
    if (k > degree) return 0.0;
    return falling(degree, k) * std::pow(x, degree - k);
  };
}

ScalarField separable_product(std::vector<Factor> factors, std::string name) {
  const std::size_t arity = factors.size();
  if (arity == 0) throw std::invalid_argument("separable product needs at least one factor");
  auto shared = std::make_shared<const std::vector<Factor>>(std::move(factors));
  auto deriv = [shared](std::span<const double> x, const MultiIndex& alpha) {
    double v = 1.0;
    for (std::size_t q = 0; q < x.size(); ++q) v *= (*shared)[q](x[q], alpha[q]);
    return v;
  };
  auto eval = [deriv, arity](std::span<const double> x) {
    return deriv(x, MultiIndex::zero(arity));
  };
  return ScalarField::analytic(arity, kUnbounded, std::move(eval), std::move(deriv),
                               Domain::whole(arity), std::move(name));
}

ScalarField sum(std::vector<ScalarField> terms, std::string name) {
  if (terms.empty()) throw std::invalid_argument("sum needs at least one term");
  const std::size_t arity = terms.front().arity();
  int order = terms.front().max_order();
  for (const auto& t : terms) {
    if (t.arity() != arity) throw ArityError("summed fields must share arity");
    order = std::min(order, t.max_order());
  }
  auto shared = std::make_shared<const std::vector<ScalarField>>(std::move(terms));
  auto eval = [shared](std::span<const double> x) {
    double v = 0.0;
    for (const auto& t : *shared) v += t(x);
    return v;
  };
  auto deriv = [shared](std::span<const double> x, const MultiIndex& alpha) {
    double v = 0.0;
    for (const auto& t : *shared) v += t.derivative_unchecked(x, alpha);
    return v;
  };
  // Membership in every term's domain.
  Domain dom = Domain::convex(
      arity,
      [shared](std::span<const double> x) {
        for (const auto& t : *shared) {
          if (!t.domain().contains(x)) return false;
        }
        return true;
      },
      std::vector<double>(arity, -kInf), std::vector<double>(arity, kInf));
  return ScalarField::analytic(arity, order, std::move(eval), std::move(deriv), std::move(dom),
                               std::move(name));
}

ScalarField from_spec(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view head = spec.substr(0, colon);
  const std::string_view args =
      colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  const auto no_args = [&] {
    if (colon != std::string_view::npos) {
      throw std::invalid_argument("function '" + std::string(head) + "' takes no parameters");
    }
  };

  if (head == "poly") {
    if (args.empty()) throw std::invalid_argument("poly needs coefficients, e.g. poly:0,0,1");
    return polynomial(parse_numbers(args, spec));
  }
  if (head == "exp") return no_args(), exponential();
  if (head == "sin") return no_args(), sine();
  if (head == "cos") return no_args(), cosine();
  if (head == "log1p") return no_args(), shifted_log(1.0, 0.1);
  if (head == "log") {
    const auto v = parse_numbers(args, spec);
    if (v.size() != 1 || !(v[0] > 0.0)) {
      throw std::invalid_argument("log needs one positive shift, e.g. log:1");
    }
    return shifted_log(v[0]);
  }
  if (head == "sqnorm") {
    const auto v = parse_numbers(args, spec);
    if (v.size() != 1 || v[0] < 1 || v[0] != std::floor(v[0])) {
      throw std::invalid_argument("sqnorm needs a positive integer arity, e.g. sqnorm:2");
    }
    const auto p = static_cast<std::size_t>(v[0]);
    std::vector<Monomial> terms;
    for (std::size_t q = 0; q < p; ++q) {
      std::vector<int> powers(p, 0);
      powers[q] = 2;
      terms.push_back({1.0, std::move(powers)});
    }
    return multivariate_polynomial(p, std::move(terms));
  }
  if (head == "expdot") {
    auto w = parse_numbers(args, spec);
    if (w.empty()) throw std::invalid_argument("expdot needs weights, e.g. expdot:1,2");
    return exp_linear(std::move(w));
  }
  if (head == "expxy") return no_args(), separable_product({exp_factor(), power_factor(1)}, "expxy");
  if (head == "sincos") return no_args(), separable_product({sin_factor(), cos_factor()}, "sincos");
  if (head == "xyz") {
    no_args();
    return separable_product({power_factor(1), power_factor(1), power_factor(1)}, "xyz");
  }
  throw std::invalid_argument("unknown function '" + std::string(spec) + "'");
}

std::vector<std::string> registry_names() {
  return {"poly:c0,c1,...", "exp", "sin", "cos", "log:c", "log1p",
          "sqnorm:p", "expdot:w1,...", "expxy", "sincos", "xyz"};
}

}  // namespace smvt::builtins
