#include "smvt/taylor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "smvt/errors.hpp"
#include "smvt/quadrature.hpp"

namespace smvt {

namespace {

void require_order(const ScalarField& f, int order, const char* what) {
  if (order > f.max_order()) {
    std::ostringstream os;
    os << what << " needs derivatives of order " << order << " but the field supports "
       << f.max_order();
    throw OrderError(os.str());
  }
}

void require_positive(int n) {
  if (n < 1) throw std::invalid_argument("Taylor order n must be a positive integer");
}

void require_uni(const ScalarField& f) {
  if (f.arity() != 1) throw ArityError("univariate operation on a multivariate field");
}

void require_in_domain(const ScalarField& f, double x, const char* what) {
  if (!f.domain().contains(x)) {
    std::ostringstream os;
    os << what << " = " << x << " is outside the domain of '" << f.name() << "'";
    throw DomainError(os.str());
  }
}

}  // namespace

double partial_sum_uni(const ScalarField& f, double a, double h, int n) {
  require_uni(f);
  require_positive(n);
  require_order(f, n - 1, "partial sum");
  require_in_domain(f, a, "anchor");
  require_in_domain(f, a + h, "a + h");

  double sum = f(a);
  double power = 1.0;
  double fact = 1.0;
  for (int k = 1; k < n; ++k) {
    power *= h;
    fact *= k;
    sum += f.derivative(a, k) * power / fact;
  }
  return sum;
}

double lagrange_remainder_uni(const ScalarField& f, double a, double theta, double h, int n) {
  require_uni(f);
  require_positive(n);
  if (!(theta > 0.0 && theta < 1.0)) {
    throw std::invalid_argument("theta must lie strictly inside (0, 1)");
  }
  require_order(f, n, "Lagrange remainder");
  const double point = a + theta * h;
  require_in_domain(f, point, "a + theta h");
  return f.derivative(point, n) * std::pow(h, n) / factorial(n);
}

DirectionalPower::DirectionalPower(std::size_t arity, int order)
    : arity_(arity), order_(order), indices_(enumerate_multi_indices(arity, order)) {
  weights_.reserve(indices_.size());
  for (const auto& alpha : indices_) weights_.push_back(alpha.multinomial_weight());
}

double DirectionalPower::operator()(const ScalarField& f, std::span<const double> point,
                                    std::span<const double> h) const {
  if (f.arity() != arity_ || point.size() != arity_ || h.size() != arity_) {
    throw ArityError("directional power: point, increment and field arity must agree");
  }
  require_order(f, order_, "directional power");
  return apply_unchecked(f, point, h);
}

double DirectionalPower::apply_unchecked(const ScalarField& f, std::span<const double> point,
                                         std::span<const double> h) const {
  double total = 0.0;
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    const double mono = indices_[i].monomial(h);
    if (mono == 0.0) continue;
    total += weights_[i] * mono * f.derivative_unchecked(point, indices_[i]);
  }
  return total;
}

double directional_power(const ScalarField& f, std::span<const double> point,
                         std::span<const double> h, int n) {
  if (n < 0) throw std::invalid_argument("directional power order must be nonnegative");
  if (h.size() != f.arity()) throw ArityError("increment does not match field arity");
  return DirectionalPower(f.arity(), n)(f, point, h);
}

double partial_sum_multi(const ScalarField& f, std::span<const double> a,
                         std::span<const double> h, int n, int segment_samples) {
  require_positive(n);
  if (a.size() != f.arity() || h.size() != f.arity()) {
    throw ArityError("partial sum: anchor and increment must match field arity");
  }
  require_order(f, n - 1, "partial sum");
  if (!f.domain().contains_segment(a, h, segment_samples)) {
    throw DomainError("segment a + t h leaves the domain of '" + f.name() + "'");
  }
  double sum = f(a);
  double fact = 1.0;
  for (int k = 1; k < n; ++k) {
    fact *= k;
    sum += DirectionalPower(f.arity(), k).apply_unchecked(f, a, h) / fact;
  }
  return sum;
}

Matrix jacobian(const VectorField& F, std::span<const double> x) {
  const std::size_t p = F.input_arity();
  if (x.size() != p) throw ArityError("jacobian: point does not match input arity");
  if (F.max_order() < 1) throw OrderError("jacobian needs first derivatives");
  Matrix J(F.output_arity(), p);
  for (std::size_t r = 0; r < F.output_arity(); ++r) {
    const auto& c = F.component(r);
    if (!c.domain().contains(x)) throw DomainError("jacobian: point outside the domain");
    for (std::size_t q = 0; q < p; ++q) J(r, q) = c.derivative(x, MultiIndex::axis(p, q, 1));
  }
  return J;
}

namespace {

std::vector<double> integrate(const VectorField& F, const DirectionalPower& power,
                              std::span<const double> a, std::span<const double> h, int n,
                              const GaussLegendre& gl) {
  const std::size_t p = F.input_arity();
  std::vector<double> acc(F.output_arity(), 0.0);
  std::vector<double> x(p);
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    const double t = gl.nodes[i];
    for (std::size_t q = 0; q < p; ++q) x[q] = a[q] + t * h[q];
    const double kernel = gl.weights[i] * std::pow(1.0 - t, n - 1);
    for (std::size_t r = 0; r < acc.size(); ++r) {
      acc[r] += kernel * power.apply_unchecked(F.component(r), x, h);
    }
  }
  const double scale = 1.0 / factorial(n - 1);
  for (double& v : acc) v *= scale;
  return acc;
}

}  // namespace

IntegralRemainder integral_remainder_vec(const VectorField& F, std::span<const double> a,
                                         std::span<const double> h, int n,
                                         const QuadratureRule& rule) {
  require_positive(n);
  const std::size_t p = F.input_arity();
  if (a.size() != p || h.size() != p) {
    throw ArityError("integral remainder: anchor and increment must match input arity");
  }
  if (rule.nodes < 1 || !(rule.tolerance > 0.0)) {
    throw std::invalid_argument("quadrature rule needs nodes >= 1 and tolerance > 0");
  }
  for (const auto& c : F.components()) {
    require_order(c, n, "integral remainder");
    if (!c.domain().contains_segment(a, h)) {
      throw DomainError("segment a + t h leaves the domain of '" + c.name() + "'");
    }
  }

  const DirectionalPower power(p, n);
  IntegralRemainder out;
  out.nodes = rule.nodes;
  out.value = integrate(F, power, a, h, n, gauss_legendre(rule.nodes));
  const auto fine = integrate(F, power, a, h, n, gauss_legendre(2 * rule.nodes));
  for (std::size_t r = 0; r < fine.size(); ++r) {
    const double gap = std::abs(fine[r] - out.value[r]) / (1.0 + std::abs(fine[r]));
    out.discrepancy = std::max(out.discrepancy, gap);
  }
  out.converged = out.discrepancy <= rule.tolerance;
  return out;
}

}  // namespace smvt
