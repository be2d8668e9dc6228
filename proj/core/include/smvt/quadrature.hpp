#pragma once

#include <vector>

namespace smvt {

/// Gauss-Legendre nodes and weights mapped to [0, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Newton iteration on P_n from the Chebyshev initial guesses; exact for
/// polynomials of degree <= 2n - 1.
GaussLegendre gauss_legendre(int n);

}  // namespace smvt
