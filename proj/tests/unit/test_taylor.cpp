#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "smvt/builtins.hpp"
#include "smvt/domain.hpp"
#include "smvt/errors.hpp"
#include "smvt/multi_index.hpp"
#include "smvt/quadrature.hpp"
#include "smvt/taylor.hpp"

using namespace smvt;
namespace b = smvt::builtins;

TEST(MultiIndex, OrderIsSumOfEntries) {
  MultiIndex m({2, 0, 3});
  EXPECT_EQ(m.order(), 5);
  EXPECT_EQ(m.arity(), 3u);
  EXPECT_THROW(MultiIndex({1, -1}), std::invalid_argument);
}

TEST(MultiIndex, EnumerationMatchesBruteForce) {
  for (std::size_t p = 1; p <= 4; ++p) {
    for (int n = 0; n <= 5; ++n) {
      std::set<std::vector<int>> expected;
      for (auto& t : oracle::brute_multi_indices(p, n)) expected.insert(t);
      std::set<std::vector<int>> got;
      const auto all = enumerate_multi_indices(p, n);
      for (const auto& m : all) {
        EXPECT_EQ(m.order(), n);
        got.insert({m.entries().begin(), m.entries().end()});
      }
      EXPECT_EQ(got, expected) << "p=" << p << " n=" << n;
      EXPECT_EQ(all.size(), expected.size());
      // lexicographic ascending
      for (std::size_t i = 1; i < all.size(); ++i) {
        EXPECT_TRUE(std::lexicographical_compare(all[i - 1].entries().begin(), all[i - 1].entries().end(),
                                                 all[i].entries().begin(), all[i].entries().end()));
      }
    }
  }
}

TEST(MultiIndex, MultinomialWeightsSumToPowerOfArity) {
  for (std::size_t p = 1; p <= 4; ++p) {
    for (int n = 0; n <= 6; ++n) {
      double total = 0.0;
      for (const auto& m : enumerate_multi_indices(p, n)) total += m.multinomial_weight();
      EXPECT_DOUBLE_EQ(total, std::pow(static_cast<double>(p), n));
    }
  }
}

TEST(PartialSumUni, QuadraticEmptySum) {
  EXPECT_DOUBLE_EQ(partial_sum_uni(b::polynomial({0, 0, 1}), 0.0, 2.0, 1), 0.0);
}

TEST(PartialSumUni, ExponentialCoefficients) {
  EXPECT_DOUBLE_EQ(partial_sum_uni(b::exponential(), 0.0, 1.0, 3), 2.5);
}

TEST(PartialSumUni, SineAgainstDirectSeries) {
  const double a = 0.0, h = 0.3;
  const std::vector<double> d{std::sin(a), std::cos(a), -std::sin(a), -std::cos(a), std::sin(a)};
  EXPECT_NEAR(partial_sum_uni(b::sine(), a, h, 5), oracle::direct_series(d, h, 5), 1e-15);
  const double a2 = 0.7;
  const std::vector<double> d2{std::sin(a2), std::cos(a2), -std::sin(a2), -std::cos(a2), std::sin(a2),
                               std::cos(a2)};
  EXPECT_NEAR(partial_sum_uni(b::sine(), a2, -1.1, 6), oracle::direct_series(d2, -1.1, 6), 1e-14);
}

TEST(PartialSumUni, RejectsOutOfDomainAndBadOrder) {
  EXPECT_THROW(partial_sum_uni(b::exponential(), 0.0, 1.0, 0), std::invalid_argument);
  EXPECT_THROW(partial_sum_uni(b::from_spec("log1p"), 0.0, -0.95, 2), DomainError);
  const auto limited = ScalarField::finite_difference(
      1, 2, [](std::span<const double> x) { return std::exp(x[0]); }, Domain::whole(1));
  EXPECT_THROW(partial_sum_uni(limited, 0.0, 1.0, 5), OrderError);
}

TEST(LagrangeRemainderUni, Examples) {
  EXPECT_DOUBLE_EQ(lagrange_remainder_uni(b::polynomial({0, 0, 1}), 0.0, 0.5, 2.0, 1), 4.0);
  EXPECT_DOUBLE_EQ(lagrange_remainder_uni(b::sine(), 0.4, 0.3, 0.0, 3), 0.0);
  EXPECT_NEAR(lagrange_remainder_uni(b::exponential(), 0.0, 0.5, 1.0, 2), std::exp(0.5) / 2.0, 1e-15);
  EXPECT_NEAR(std::exp(0.5) / 2.0, 0.824361, 1e-6);
  EXPECT_THROW(lagrange_remainder_uni(b::exponential(), 0.0, 0.0, 1.0, 2), std::invalid_argument);
  EXPECT_THROW(lagrange_remainder_uni(b::exponential(), 0.0, 1.0, 1.0, 2), std::invalid_argument);
}

TEST(DirectionalPower, SquaredNormBinomial) {
  const auto f = b::from_spec("sqnorm:2");
  const std::vector<double> pt{0, 0}, h{1, 1};
  EXPECT_DOUBLE_EQ(directional_power(f, pt, h, 2), 4.0);
}

TEST(DirectionalPower, OrderZeroIsEvaluation) {
  const auto f = b::from_spec("expxy");
  const std::vector<double> pt{0.3, -0.2}, h{1.5, 2.5};
  EXPECT_DOUBLE_EQ(directional_power(f, pt, h, 0), f(pt));
}

TEST(DirectionalPower, ProductOnlyMixedIndexSurvives) {
  const auto f = b::from_spec("xyz");
  const std::vector<double> h{1, 2, 3};
  for (const auto& pt : {std::vector<double>{0, 0, 0}, std::vector<double>{1.5, -2, 0.25}}) {
    EXPECT_DOUBLE_EQ(directional_power(f, pt, h, 3), 36.0);
    auto deriv = [&](std::span<const double> x, const std::vector<int>& c) {
      return f.derivative(x, MultiIndex(c));
    };
    EXPECT_DOUBLE_EQ(oracle::ordered_directional(deriv, pt, h, 3), 36.0);
  }
}

TEST(DirectionalPower, MatchesOrderedSequenceSum) {
  const auto f = b::from_spec("sincos");
  const std::vector<double> pt{0.4, -0.7}, h{0.9, -1.3};
  auto deriv = [&](std::span<const double> x, const std::vector<int>& c) {
    return f.derivative(x, MultiIndex(c));
  };
  for (int n = 0; n <= 6; ++n) {
    EXPECT_NEAR(directional_power(f, pt, h, n), oracle::ordered_directional(deriv, pt, h, n), 1e-12)
        << "n=" << n;
  }
}

TEST(DirectionalPower, MatchesFiniteDifferencesAlongLine) {
  const auto f = b::exp_linear({0.5, -0.25, 1.0});
  const std::vector<double> pt{0.1, 0.2, -0.3}, h{0.7, 0.4, -0.5};
  for (int n = 1; n <= 4; ++n) {
    const double exact = directional_power(f, pt, h, n);
    const double fd = oracle::fd_directional([&](std::span<const double> x) { return f(x); }, pt, h, n);
    EXPECT_NEAR(fd, exact, 1e-4 * std::abs(exact)) << "n=" << n;
  }
}

TEST(PartialSumMulti, Examples) {
  const auto f = b::from_spec("expxy");
  const std::vector<double> a{0.2, 0.3}, h{1, 1};
  EXPECT_DOUBLE_EQ(partial_sum_multi(f, a, h, 1), f(a));

  const auto affine = b::multivariate_polynomial(2, {{1.0, {1, 0}}, {1.0, {0, 1}}});
  const std::vector<double> z{0, 0}, h12{1, 2};
  EXPECT_DOUBLE_EQ(partial_sum_multi(affine, z, h12, 2), 3.0);
}

TEST(PartialSumMulti, ReducesToUnivariateSeries) {
  const auto f = b::exp_linear({1.0, 2.0});
  const std::vector<double> a{0, 0}, h{0.1, 0.1};
  // t -> exp(0.3 t); k-th derivative at 0 is 0.3^k
  std::vector<double> d;
  for (int k = 0; k < 4; ++k) d.push_back(std::pow(0.3, k));
  EXPECT_NEAR(partial_sum_multi(f, a, h, 4), oracle::direct_series(d, 1.0, 4), 1e-15);
}

TEST(Jacobian, Examples) {
  {
    VectorField F({b::polynomial({0, 0, 1}), b::polynomial({0, 0, 0, 1})});
    const std::vector<double> x{1.0};
    const auto J = jacobian(F, x);
    ASSERT_EQ(J.rows, 2u);
    ASSERT_EQ(J.cols, 1u);
    EXPECT_DOUBLE_EQ(J(0, 0), 2.0);
    EXPECT_DOUBLE_EQ(J(1, 0), 3.0);
  }
  {
    std::vector<ScalarField> comps;
    for (std::size_t q = 0; q < 3; ++q) {
      std::vector<int> pw(3, 0);
      pw[q] = 1;
      comps.push_back(b::multivariate_polynomial(3, {{1.0, pw}}));
    }
    const auto J = jacobian(VectorField(comps), std::vector<double>{0.3, -1, 4});
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 3; ++c) EXPECT_DOUBLE_EQ(J(r, c), r == c ? 1.0 : 0.0);
  }
  {
    VectorField F({b::multivariate_polynomial(2, {{1.0, {1, 1}}}),
                   b::multivariate_polynomial(2, {{1.0, {1, 0}}, {1.0, {0, 1}}})});
    const auto J = jacobian(F, std::vector<double>{2, 3});
    EXPECT_DOUBLE_EQ(J(0, 0), 3.0);
    EXPECT_DOUBLE_EQ(J(0, 1), 2.0);
    EXPECT_DOUBLE_EQ(J(1, 0), 1.0);
    EXPECT_DOUBLE_EQ(J(1, 1), 1.0);
  }
}

TEST(IntegralRemainder, PolynomialIntegral) {
  VectorField F({b::polynomial({0, 0, 1}), b::polynomial({0, 0, 0, 1})});
  const std::vector<double> a{0}, h{1};
  const auto r = integral_remainder_vec(F, a, h, 1);
  ASSERT_EQ(r.value.size(), 2u);
  EXPECT_NEAR(r.value[0], 1.0, 1e-14);
  EXPECT_NEAR(r.value[1], 1.0, 1e-14);
  EXPECT_TRUE(r.converged);
}

TEST(IntegralRemainder, ZeroIncrement) {
  VectorField F({b::from_spec("sincos"), b::from_spec("expxy")});
  const std::vector<double> a{0.2, 0.1}, h{0, 0};
  const auto r = integral_remainder_vec(F, a, h, 3);
  for (double v : r.value) EXPECT_EQ(v, 0.0);
}

TEST(IntegralRemainder, ClosesTaylorIdentity) {
  VectorField F({b::from_spec("sincos")});
  const std::vector<double> a{0, 0}, h{0.2, 0.3};
  for (int n = 1; n <= 4; ++n) {
    const auto r = integral_remainder_vec(F, a, h, n);
    const double lhs = F.component(0)(std::vector<double>{0.2, 0.3});
    const double rhs = partial_sum_multi(F.component(0), a, h, n) + r.value[0];
    EXPECT_NEAR(lhs, rhs, 1e-12) << "n=" << n;
    EXPECT_TRUE(r.converged);
  }
}

TEST(GaussLegendre, ClosedFormSmallRules) {
  const auto g2 = gauss_legendre(2);
  const double d = 0.5 / std::sqrt(3.0);
  EXPECT_NEAR(g2.nodes[0], 0.5 - d, 1e-15);
  EXPECT_NEAR(g2.nodes[1], 0.5 + d, 1e-15);
  EXPECT_NEAR(g2.weights[0], 0.5, 1e-15);
  const auto g3 = gauss_legendre(3);
  EXPECT_NEAR(g3.nodes[1], 0.5, 1e-15);
  EXPECT_NEAR(g3.nodes[0], 0.5 - 0.5 * std::sqrt(0.6), 1e-15);
  EXPECT_NEAR(g3.weights[0], 5.0 / 18.0, 1e-15);
  EXPECT_NEAR(g3.weights[1], 8.0 / 18.0, 1e-15);
}

TEST(GaussLegendre, ExactOnPolynomialsUpToDegree2nMinus1) {
  for (int n : {1, 4, 16, 64, 128}) {
    const auto g = gauss_legendre(n);
    for (int deg = 0; deg <= std::min(2 * n - 1, 40); ++deg) {
      std::vector<double> c(static_cast<std::size_t>(deg + 1), 0.0);
      c.back() = 1.0;
      double q = 0.0;
      for (std::size_t i = 0; i < g.nodes.size(); ++i) q += g.weights[i] * std::pow(g.nodes[i], deg);
      EXPECT_NEAR(q, oracle::poly_integral01(c), 1e-14) << "n=" << n << " deg=" << deg;
    }
  }
}
