#include "smvt/selector.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "smvt/parallel.hpp"
#include "smvt/taylor.hpp"

namespace smvt {

CandidateBracket candidate_bracket(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("candidate bracket needs a finite increment");
  if (x > 0.0) return {0.0, x, false};
  if (x < 0.0) return {x, 0.0, false};
  return {0.0, 0.0, true};
}

void SelectionPolicy::validate() const {
  if (scan_points < 2) throw std::invalid_argument("scan_points must be >= 2");
  if (!(refine_tol > 0.0) || !std::isfinite(refine_tol)) {
    throw std::invalid_argument("refine_tol must be positive");
  }
  if (!(residual_tol > 0.0) || !std::isfinite(residual_tol)) {
    throw std::invalid_argument("residual_tol must be positive");
  }
}

std::string to_string(SelectorVariant v) { return v == SelectorVariant::sup ? "sup" : "inf"; }

SelectorVariant parse_selector_variant(const std::string& s) {
  if (s == "sup") return SelectorVariant::sup;
  if (s == "inf") return SelectorVariant::inf;
  throw std::invalid_argument("selector variant must be 'sup' or 'inf', got '" + s + "'");
}

double SelectionResult::relative_residual() const { return std::abs(residual) / (1.0 + std::abs(pi)); }

RemainderEquation build_remainder_equation(const ScalarField& f, double a, double x, int n) {
  if (f.arity() != 1) throw ArityError("univariate remainder equation on a multivariate field");
  if (n < 1) throw std::invalid_argument("Taylor order n must be a positive integer");
  if (n > f.max_order()) throw OrderError("remainder equation needs derivatives of order n");
  const auto bracket = candidate_bracket(x);
  if (!f.domain().contains(a) || !f.domain().contains(a + x)) {
    std::ostringstream os;
    os << "interval between " << a << " and " << a + x << " leaves the domain of '" << f.name()
       << "'";
    throw DomainError(os.str());
  }

  RemainderEquation eq;
  eq.order = n;
  eq.increment = {x};
  eq.parameter = RemainderEquation::Parameter::offset;
  eq.lo = bracket.lo;
  eq.hi = bracket.hi;
  eq.degenerate = bracket.degenerate;
  if (eq.degenerate) {
    eq.pi = 0.0;
    eq.g = [](double) { return 0.0; };
    return eq;
  }
  eq.pi = f(a + x) - partial_sum_uni(f, a, x, n);
  const double coefficient = std::pow(x, n) / factorial(n);
  eq.g = [f, a, coefficient, alpha = MultiIndex(std::vector<int>{n})](double s) {
    const double point = a + s;
    return f.derivative_unchecked(std::span<const double>(&point, 1), alpha) * coefficient;
  };
  return eq;
}

RemainderEquation build_remainder_equation(const ScalarField& f, std::span<const double> a,
                                           std::span<const double> x, int n) {
  const std::size_t p = f.arity();
  if (a.size() != p || x.size() != p) {
    throw ArityError("anchor and increment must match field arity");
  }
  if (n < 1) throw std::invalid_argument("Taylor order n must be a positive integer");
  if (n > f.max_order()) throw OrderError("remainder equation needs derivatives of order n");
  for (double v : x) {
    if (!std::isfinite(v)) throw std::invalid_argument("increment must be finite");
  }
  if (!f.domain().contains_segment(a, x)) {
    throw DomainError("segment a + t x leaves the domain of '" + f.name() + "'");
  }

  RemainderEquation eq;
  eq.order = n;
  eq.increment.assign(x.begin(), x.end());
  eq.parameter = RemainderEquation::Parameter::segment;
  eq.lo = 0.0;
  eq.hi = 1.0;
  eq.degenerate = std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
  if (eq.degenerate) {
    eq.hi = 0.0;
    eq.pi = 0.0;
    eq.g = [](double) { return 0.0; };
    return eq;
  }

  std::vector<double> end(p);
  for (std::size_t q = 0; q < p; ++q) end[q] = a[q] + x[q];
  eq.pi = f(end) - partial_sum_multi(f, a, x, n);
  eq.g = [f, anchor = std::vector<double>(a.begin(), a.end()), inc = eq.increment,
          power = DirectionalPower(p, n), scale = 1.0 / factorial(n)](double t) {
    std::vector<double> point(anchor.size());
    for (std::size_t q = 0; q < point.size(); ++q) point[q] = anchor[q] + t * inc[q];
    return power.apply_unchecked(f, point, inc) * scale;
  };
  return eq;
}

namespace {

bool opposite(double a, double b) { return (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0); }

struct Bisected {
  double u;
  double gap;
};

Bisected bisect(const RemainderEquation& eq, double lo, double hi, double gap_lo, double gap_hi,
                double refine_tol, double tol) {
  Bisected best = std::abs(gap_lo) <= std::abs(gap_hi) ? Bisected{lo, gap_lo} : Bisected{hi, gap_hi};
  for (;;) {
    const double mid = lo + 0.5 * (hi - lo);
    if (!(mid > lo && mid < hi)) break;
    const double gm = eq.gap(mid);
    if (std::abs(gm) <= std::abs(best.gap)) best = {mid, gm};
    if (gm == 0.0) break;
    if (opposite(gm, gap_lo)) {
      hi = mid;
      gap_hi = gm;
    } else {
      lo = mid;
      gap_lo = gm;
    }
    if (hi - lo <= refine_tol && std::abs(best.gap) <= tol) break;
  }
  return best;
}

}  // namespace

ParameterRoot solve_remainder_equation(const RemainderEquation& eq, const SelectionPolicy& policy) {
  policy.validate();
  if (eq.degenerate) return {eq.lo, 0.0, 1};
  if (eq.lo == eq.hi) return {eq.lo, -eq.gap(eq.lo), 1};

  const auto n = static_cast<std::size_t>(policy.scan_points);
  const double width = eq.hi - eq.lo;
  std::vector<double> u(n), gap(n);
  for (std::size_t k = 0; k < n; ++k) {
    u[k] = k + 1 == n ? eq.hi : eq.lo + width * (static_cast<double>(k) / static_cast<double>(n - 1));
    gap[k] = eq.gap(u[k]);
    if (!std::isfinite(gap[k])) {
      std::ostringstream os;
      os << "remainder equation is not finite at parameter " << u[k];
      throw DomainError(os.str());
    }
  }

  const double tol = policy.residual_tol * (1.0 + std::abs(eq.pi));
  // sign_change[k]: strict sign change on the cell [u_k, u_{k+1}]
  std::vector<char> sign_change(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) sign_change[k] = opposite(gap[k], gap[k + 1]);
  // A node is a tangential root when it is within tolerance, is a local
  // minimum of |gap| and no adjacent cell brackets a crossing that bisection
  // would pin down more precisely.
  const auto tangential = [&](std::size_t k) {
    if (gap[k] == 0.0) return true;
    const double m = std::abs(gap[k]);
    if (m > tol) return false;
    if (k > 0 && (m > std::abs(gap[k - 1]) || sign_change[k - 1])) return false;
    if (k + 1 < n && (m > std::abs(gap[k + 1]) || sign_change[k])) return false;
    return true;
  };

  int count = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (tangential(k)) ++count;
    if (k + 1 < n && sign_change[k]) ++count;
  }

  const auto finish = [&](double root, double g) { return ParameterRoot{root, -g, count}; };
  const auto refine = [&](std::size_t cell) {
    const auto b = bisect(eq, u[cell], u[cell + 1], gap[cell], gap[cell + 1], policy.refine_tol, tol);
    return finish(b.u, b.gap);
  };

  if (policy.variant == SelectorVariant::sup) {
    for (std::size_t k = n; k-- > 0;) {
      if (tangential(k)) return finish(u[k], gap[k]);
      if (k > 0 && sign_change[k - 1]) return refine(k - 1);
    }
  } else {
    for (std::size_t k = 0; k < n; ++k) {
      if (tangential(k)) return finish(u[k], gap[k]);
      if (k + 1 < n && sign_change[k]) return refine(k);
    }
  }

  double min_gap = std::abs(gap.front());
  for (double g : gap) min_gap = std::min(min_gap, std::abs(g));
  std::ostringstream os;
  os.precision(6);
  os << "no root of g - pi on [" << eq.lo << ", " << eq.hi << "]: no sign change among "
     << n << " scan nodes and min |g - pi| = " << min_gap << " exceeds tolerance " << tol;
  throw NoRootFound(os.str(), eq.lo, eq.hi, min_gap);
}

SelectionResult solve_selector_uni(const ScalarField& f, double a, double x, int n,
                                   const SelectionPolicy& policy) {
  policy.validate();
  const auto eq = build_remainder_equation(f, a, x, n);
  const auto root = solve_remainder_equation(eq, policy);

  SelectionResult r;
  r.xi = {root.u};
  r.theta = eq.degenerate ? 0.0 : std::clamp(root.u / x, 0.0, 1.0);
  r.residual = root.residual;
  r.pi = eq.pi;
  r.bracket = candidate_bracket(x);
  r.policy = policy;
  r.root_count_estimate = root.root_count_estimate;
  return r;
}

SelectionResult solve_selector_multi(const ScalarField& f, std::span<const double> a,
                                     std::span<const double> x, int n,
                                     const SelectionPolicy& policy) {
  policy.validate();
  const auto eq = build_remainder_equation(f, a, x, n);
  const auto root = solve_remainder_equation(eq, policy);

  SelectionResult r;
  r.theta = root.u;
  r.xi.resize(x.size());
  for (std::size_t q = 0; q < x.size(); ++q) r.xi[q] = r.theta * x[q];
  r.residual = root.residual;
  r.pi = eq.pi;
  r.bracket = eq.degenerate ? CandidateBracket{} : CandidateBracket{0.0, 1.0, false};
  r.policy = policy;
  r.root_count_estimate = root.root_count_estimate;
  return r;
}

SelectionCertificate certify_selection(const RemainderEquation& eq, double u, SelectorVariant variant,
                                       int nodes, double guard) {
  if (nodes < 2) throw std::invalid_argument("certification scan needs at least two nodes");
  SelectionCertificate cert;
  cert.nodes = nodes;
  if (eq.degenerate || eq.lo == eq.hi) return cert;

  const double width = eq.hi - eq.lo;
  bool have_prev = false;
  double prev = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const double v = k + 1 == nodes ? eq.hi : eq.lo + width * (static_cast<double>(k) / (nodes - 1));
    const bool beyond = variant == SelectorVariant::sup ? v > u + guard : v < u - guard;
    if (!beyond) continue;
    const double g = eq.gap(v);
    if (have_prev && opposite(prev, g)) ++cert.sign_changes_beyond;
    prev = g;
    have_prev = true;
  }
  return cert;
}

SampleSolve solve_over_sample(const ScalarField& f, std::span<const double> anchor,
                              const RandomVariable& X, int n, const SelectionPolicy& policy) {
  policy.validate();
  const bool univariate = f.arity() == 1;
  if (anchor.size() != f.arity()) throw ArityError("anchor does not match field arity");
  if (X.dimension() != f.arity()) {
    throw ArityError("random variable dimension does not match field arity");
  }

  SampleSolve out;
  out.results.resize(X.size());
  std::vector<std::string> errors(X.size());
  parallel_for(X.size(), [&](std::size_t i) {
    try {
      out.results[i] = univariate ? solve_selector_uni(f, anchor[0], X.scalar_value(i), n, policy)
                                  : solve_selector_multi(f, anchor, X.value(i), n, policy);
    } catch (const std::exception& e) {
      errors[i] = e.what();
      if (errors[i].empty()) errors[i] = "solver failure";
    }
  });
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i].empty()) out.failures.push_back({X.space()->outcome(i), errors[i]});
  }
  return out;
}

RandomVariable apply_over_sample(const ScalarField& f, std::span<const double> anchor,
                                 const RandomVariable& X, int n, const SelectionPolicy& policy) {
  auto solved = solve_over_sample(f, anchor, X, n, policy);
  if (!solved.failures.empty()) throw SampleSolveError(std::move(solved.failures));
  std::vector<double> flat;
  flat.reserve(X.size() * X.dimension());
  for (const auto& r : solved.results) flat.insert(flat.end(), r->xi.begin(), r->xi.end());
  return RandomVariable(X.space(), X.dimension(), std::move(flat));
}

RandomVariable apply_over_sample(const ScalarField& f, double anchor, const RandomVariable& X, int n,
                                 const SelectionPolicy& policy) {
  return apply_over_sample(f, std::span<const double>(&anchor, 1), X, n, policy);
}

}  // namespace smvt
