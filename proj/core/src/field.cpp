#include "smvt/field.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "smvt/errors.hpp"

namespace smvt {

ScalarField ScalarField::analytic(std::size_t arity, int max_order, Eval eval, Derivative derivative,
                                  Domain domain, std::string name) {
  if (arity == 0) throw std::invalid_argument("field arity must be positive");
  if (max_order < 0) throw std::invalid_argument("max_order must be nonnegative");
  if (!eval || (max_order > 0 && !derivative)) {
    throw std::invalid_argument("analytic field needs eval and derivative callables");
  }
  if (domain.arity() != arity) throw ArityError("domain arity does not match field arity");
  ScalarField f;
  f.arity_ = arity;
  f.max_order_ = max_order;
  f.mode_ = DerivativeMode::analytic;
  f.eval_ = std::move(eval);
  f.derivative_ = std::move(derivative);
  f.domain_ = std::make_shared<const Domain>(std::move(domain));
  f.name_ = std::move(name);
  return f;
}

ScalarField ScalarField::finite_difference(std::size_t arity, int max_order, Eval eval, Domain domain,
                                           double step, std::string name) {
  if (arity == 0) throw std::invalid_argument("field arity must be positive");
  if (max_order < 0) throw std::invalid_argument("max_order must be nonnegative");
  if (!eval) throw std::invalid_argument("finite-difference field needs an eval callable");
  if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("step must be positive");
  if (domain.arity() != arity) throw ArityError("domain arity does not match field arity");
  ScalarField f;
  f.arity_ = arity;
  f.max_order_ = max_order;
  f.mode_ = DerivativeMode::finite_difference;
  f.step_ = step;
  f.eval_ = std::move(eval);
  f.domain_ = std::make_shared<const Domain>(std::move(domain));
  f.name_ = std::move(name);
  return f;
}

double ScalarField::operator()(std::span<const double> x) const {
  if (x.size() != arity_) throw ArityError("point does not match field arity");
  return eval_(x);
}

double ScalarField::operator()(double x) const { return (*this)(std::span<const double>(&x, 1)); }

double ScalarField::derivative(std::span<const double> x, const MultiIndex& alpha) const {
  if (x.size() != arity_ || alpha.arity() != arity_) {
    throw ArityError("point or multi-index does not match field arity");
  }
  if (alpha.order() > max_order_) {
    std::ostringstream os;
    os << "derivative of order " << alpha.order() << " requested but field '" << name_
       << "' supports order " << max_order_;
    throw OrderError(os.str());
  }
  return derivative_unchecked(x, alpha);
}

double ScalarField::derivative(double x, int k) const {
  if (arity_ != 1) throw ArityError("scalar derivative on a multivariate field");
  if (k < 0) throw std::invalid_argument("derivative order must be nonnegative");
  return derivative(std::span<const double>(&x, 1), MultiIndex(std::vector<int>{k}));
}

double ScalarField::derivative_unchecked(std::span<const double> x, const MultiIndex& alpha) const {
  if (alpha.is_zero()) return eval_(x);
  if (mode_ == DerivativeMode::analytic) return derivative_(x, alpha);
  std::vector<double> work(x.begin(), x.end());
  const double coarse = nested_difference(work, alpha, 0, 1.0);
  const double fine = nested_difference(work, alpha, 0, 0.5);
  return (4.0 * fine - coarse) / 3.0;
}

// Product stencil: m-th central difference along each coordinate in turn,
// offsets (m/2 - j) * h for j = 0..m. The error is even in h, so one
// Richardson step on (h, h/2) removes the leading term.
double ScalarField::nested_difference(std::vector<double>& x, const MultiIndex& alpha,
                                      std::size_t q, double shrink) const {
  if (q == arity_) return eval_(x);
  const int m = alpha[q];
  if (m == 0) return nested_difference(x, alpha, q + 1, shrink);

  const double h = shrink * std::pow(step_, 3.0 / (alpha.order() + 4)) * (1.0 + std::abs(x[q]));
  const double centre = x[q];
  double sum = 0.0;
  double binom = 1.0;
  for (int j = 0; j <= m; ++j) {
    x[q] = centre + (0.5 * m - j) * h;
    const double term = binom * nested_difference(x, alpha, q + 1, shrink);
    sum += (j % 2 == 0) ? term : -term;
    binom = binom * (m - j) / (j + 1);
  }
  x[q] = centre;
  return sum / std::pow(h, m);
}

VectorField::VectorField(std::vector<ScalarField> components) : components_(std::move(components)) {
  if (components_.empty()) throw std::invalid_argument("vector field needs at least one component");
  for (const auto& c : components_) {
    if (c.arity() != components_.front().arity()) {
      throw ArityError("vector field components must share arity");
    }
    if (c.max_order() != components_.front().max_order()) {
      throw std::invalid_argument("vector field components must share max_order");
    }
  }
}

std::vector<double> VectorField::operator()(std::span<const double> x) const {
  std::vector<double> out;
  out.reserve(components_.size());
  for (const auto& c : components_) out.push_back(c(x));
  return out;
}

}  // namespace smvt
