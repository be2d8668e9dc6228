#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "smvt/field.hpp"

namespace smvt::builtins {

/// Sum of c_k x^k, analytic derivatives of every order.
ScalarField polynomial(std::vector<double> coefficients);
ScalarField exponential();
ScalarField sine();
ScalarField cosine();
/// log(shift + x) on the open half-line x > -shift + margin.
ScalarField shifted_log(double shift, double margin = 0.0);

struct Monomial {
  double coefficient;
  std::vector<int> powers;
};

/// Multivariate polynomial with exact mixed partials.
ScalarField multivariate_polynomial(std::size_t arity, std::vector<Monomial> terms);
/// exp(w . x)
ScalarField exp_linear(std::vector<double> weights);

/// Univariate factor for separable products: value of the k-th derivative at x.
using Factor = std::function<double(double x, int k)>;
Factor exp_factor();
Factor sin_factor();
Factor cos_factor();
Factor power_factor(int degree);

/// prod_q factor_q(x_q), with partials taken factor by factor.
ScalarField separable_product(std::vector<Factor> factors, std::string name = {});

ScalarField sum(std::vector<ScalarField> terms, std::string name = {});

/// Parses a registry name into a field.
///
///   poly:c0,c1,...   polynomial with the given coefficients
///   exp | sin | cos
///   log:c            log(c + x) for x > -c
///   log1p            log(1 + x) for x > -0.9
///   sqnorm:p         sum of x_q^2 in p variables
///   expdot:w1,...,wp exp(w . x)
///   expxy            exp(x) * y
///   sincos           sin(x) * cos(y)
///   xyz              x * y * z
///
/// Throws std::invalid_argument on unknown names or malformed parameters.
ScalarField from_spec(std::string_view spec);

/// Names accepted by from_spec, for help text.
std::vector<std::string> registry_names();

}  // namespace smvt::builtins
