#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "smvt/domain.hpp"
#include "smvt/multi_index.hpp"

namespace smvt {

enum class DerivativeMode { analytic, finite_difference };

/// A real function of p variables together with its partial derivatives up
/// to `max_order`.
///
/// The zero multi-index always routes to the function value, so
/// `derivative(x, MultiIndex::zero(p)) == (*this)(x)` holds by construction.
/// Fields are immutable and cheap to copy.
class ScalarField {
 public:
  using Eval = std::function<double(std::span<const double>)>;
  using Derivative = std::function<double(std::span<const double>, const MultiIndex&)>;

  /// `derivative` is only called with 1 <= |alpha| <= max_order.
  static ScalarField analytic(std::size_t arity, int max_order, Eval eval, Derivative derivative,
                              Domain domain, std::string name = {});

  /// Derivatives from nested central differences of `eval`.
  ///
  /// For total order k the step along coordinate q is
  /// step^(3/(k+2)) * (1 + |x_q|), which equals step * (1 + |x_q|) for k = 1
  /// and grows with k to keep round-off in check.
  static ScalarField finite_difference(std::size_t arity, int max_order, Eval eval, Domain domain,
                                       double step = 1e-5, std::string name = {});

  std::size_t arity() const noexcept { return arity_; }
  int max_order() const noexcept { return max_order_; }
  DerivativeMode mode() const noexcept { return mode_; }
  double step() const noexcept { return step_; }
  const Domain& domain() const noexcept { return *domain_; }
  const std::string& name() const noexcept { return name_; }

  double operator()(std::span<const double> x) const;
  double operator()(double x) const;

  /// Throws OrderError past max_order and ArityError on mismatched sizes.
  double derivative(std::span<const double> x, const MultiIndex& alpha) const;
  /// k-th derivative of a univariate field.
  double derivative(double x, int k) const;

  /// Like derivative() but skips the arity and order checks. For hot loops
  /// that validated once up front.
  double derivative_unchecked(std::span<const double> x, const MultiIndex& alpha) const;

 private:
  ScalarField() = default;

  double nested_difference(std::vector<double>& x, const MultiIndex& alpha, std::size_t q,
                           double shrink) const;

  std::size_t arity_ = 0;
  int max_order_ = 0;
  DerivativeMode mode_ = DerivativeMode::analytic;
  double step_ = 0.0;
  Eval eval_;
  Derivative derivative_;
  std::shared_ptr<const Domain> domain_;
  std::string name_;
};

/// Row-major dense matrix, just enough for Jacobians.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

/// f : R^p -> R^{p'} as p' scalar components sharing arity and max order.
class VectorField {
 public:
  explicit VectorField(std::vector<ScalarField> components);

  std::size_t input_arity() const noexcept { return components_.front().arity(); }
  std::size_t output_arity() const noexcept { return components_.size(); }
  int max_order() const noexcept { return components_.front().max_order(); }
  const ScalarField& component(std::size_t i) const { return components_.at(i); }
  const std::vector<ScalarField>& components() const noexcept { return components_; }

  std::vector<double> operator()(std::span<const double> x) const;

 private:
  std::vector<ScalarField> components_;
};

}  // namespace smvt
