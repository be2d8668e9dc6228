#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "smvt/field.hpp"
#include "smvt/multi_index.hpp"

namespace smvt {

/// f(a) + sum_{k=1}^{n-1} f^(k)(a) h^k / k!  (just f(a) when n = 1).
double partial_sum_uni(const ScalarField& f, double a, double h, int n);

/// f^(n)(a + theta h) h^n / n!  with theta strictly inside (0, 1).
double lagrange_remainder_uni(const ScalarField& f, double a, double theta, double h, int n);

/// (h . grad)^n f at a point, expanded over multi-indices:
///   sum_{|alpha| = n} n!/alpha! h^alpha d^alpha f(point).
///
/// Holds the enumerated multi-indices so repeated evaluation along a segment
/// does not re-enumerate them.
class DirectionalPower {
 public:
  DirectionalPower(std::size_t arity, int order);

  std::size_t arity() const noexcept { return arity_; }
  int order() const noexcept { return order_; }

  /// Validates sizes and order against f.
  double operator()(const ScalarField& f, std::span<const double> point,
                    std::span<const double> h) const;
  double apply_unchecked(const ScalarField& f, std::span<const double> point,
                         std::span<const double> h) const;

 private:
  std::size_t arity_;
  int order_;
  std::vector<MultiIndex> indices_;
  std::vector<double> weights_;
};

double directional_power(const ScalarField& f, std::span<const double> point,
                         std::span<const double> h, int n);

/// f(a) + sum_{k=1}^{n-1} (h . grad)^k f(a) / k!.
///
/// The segment a + t h is sampled at `segment_samples` points and must lie in
/// the field's domain.
double partial_sum_multi(const ScalarField& f, std::span<const double> a,
                         std::span<const double> h, int n, int segment_samples = 101);

/// (p' x p) matrix of first partials.
Matrix jacobian(const VectorField& F, std::span<const double> x);

struct QuadratureRule {
  int nodes = 64;
  /// Relative agreement required between the base rule and the doubled rule.
  double tolerance = 1e-8;
};

struct IntegralRemainder {
  std::vector<double> value;  ///< base-rule result, one entry per component
  bool converged = true;
  double discrepancy = 0.0;  ///< max relative gap to the doubled rule
  int nodes = 0;
};

/// (1/(n-1)!) int_0^1 (1-t)^{n-1} D^n F(a + t h) h^(n) dt, componentwise.
/// For n = 1 this is the integral mean value form int_0^1 DF(a + t h) h dt.
IntegralRemainder integral_remainder_vec(const VectorField& F, std::span<const double> a,
                                         std::span<const double> h, int n,
                                         const QuadratureRule& rule = {});

}  // namespace smvt
