#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smvt/errors.hpp"
#include "smvt/field.hpp"
#include "smvt/probability.hpp"

namespace smvt {

/// The admissible set for the intermediate offset: [0, x], [x, 0] or {0}.
struct CandidateBracket {
  double lo = 0.0;
  double hi = 0.0;
  bool degenerate = true;  ///< lo == hi == 0

  bool contains(double s, double slack = 0.0) const { return lo - slack <= s && s <= hi + slack; }
};

/// Rejects non-finite x.
CandidateBracket candidate_bracket(double x);

enum class SelectorVariant { sup, inf };

/// How a root is picked when the remainder equation has several.
struct SelectionPolicy {
  SelectorVariant variant = SelectorVariant::sup;
  /// Uniform scan resolution over the search interval (>= 2).
  int scan_points = 4097;
  /// Bisection stops once the bracketing cell is this narrow (absolute, in
  /// the search parameter).
  double refine_tol = 1e-12;
  /// Acceptance threshold on |g - pi| relative to 1 + |pi|; also the gate
  /// for admitting scan nodes as tangential roots.
  double residual_tol = 1e-10;

  /// Throws std::invalid_argument on out-of-range fields.
  void validate() const;

  friend bool operator==(const SelectionPolicy&, const SelectionPolicy&) = default;
};

std::string to_string(SelectorVariant v);
SelectorVariant parse_selector_variant(const std::string& s);

/// pi = g(u) in one real unknown u.
///
/// Univariate: u is the offset s in the candidate bracket and
///   g(s) = f^(n)(a + s) x^n / n!.
/// Multivariate: u is the segment parameter t in [0, 1] and
///   g(t) = (x . grad)^n f(a + t x) / n!.
/// In both cases pi = f(a + x) - (Taylor partial sum of order n - 1).
struct RemainderEquation {
  enum class Parameter { offset, segment };

  double pi = 0.0;
  std::function<double(double)> g;
  int order = 1;
  std::vector<double> increment;
  Parameter parameter = Parameter::offset;
  double lo = 0.0;  ///< search interval for u
  double hi = 0.0;
  bool degenerate = false;  ///< zero increment: pi = 0, g = 0

  double gap(double u) const { return g(u) - pi; }
};

RemainderEquation build_remainder_equation(const ScalarField& f, double a, double x, int n);
RemainderEquation build_remainder_equation(const ScalarField& f, std::span<const double> a,
                                           std::span<const double> x, int n);

struct SelectionResult {
  /// Offset from the anchor: xi in the bracket [0, x] (univariate) or
  /// xi = theta * x (multivariate). The intermediate point is a + xi.
  std::vector<double> xi;
  double theta = 0.0;     ///< segment parameter in [0, 1]
  double residual = 0.0;  ///< pi - g(solution), signed
  double pi = 0.0;
  CandidateBracket bracket;  ///< in the offset (univariate) or in theta (multivariate)
  SelectionPolicy policy;
  int root_count_estimate = 0;  ///< sign changes plus tangential nodes seen by the scan

  double relative_residual() const;
};

/// Core solve over [eq.lo, eq.hi]: uniform scan, bisection on the chosen
/// sign change, tangential nodes admitted when no sign change brackets them.
/// Returns the chosen parameter u and fills residual / root count.
struct ParameterRoot {
  double u = 0.0;
  double residual = 0.0;
  int root_count_estimate = 0;
};
ParameterRoot solve_remainder_equation(const RemainderEquation& eq, const SelectionPolicy& policy);

SelectionResult solve_selector_uni(const ScalarField& f, double a, double x, int n,
                                   const SelectionPolicy& policy = {});

SelectionResult solve_selector_multi(const ScalarField& f, std::span<const double> a,
                                     std::span<const double> x, int n,
                                     const SelectionPolicy& policy = {});

/// Dense re-scan with `nodes` points over the search interval, counting
/// strict sign changes of g - pi strictly above (sup) or below (inf) the
/// selected parameter. `guard` excludes a neighbourhood of the selection
/// where the computed root sits within rounding of the true one.
struct SelectionCertificate {
  int sign_changes_beyond = 0;
  int nodes = 0;
  bool certified() const { return sign_changes_beyond == 0; }
};
SelectionCertificate certify_selection(const RemainderEquation& eq, double u, SelectorVariant variant,
                                       int nodes, double guard);

/// One entry per outcome, in outcome order; failed outcomes are empty.
struct SampleSolve {
  std::vector<std::optional<SelectionResult>> results;
  std::vector<OutcomeFailure> failures;
};

/// Selector applied to every outcome of X. The univariate solver is used
/// when f has arity 1 (X must be scalar), the segment solver otherwise
/// (X must have dimension f.arity()). `anchor` has f.arity() entries.
SampleSolve solve_over_sample(const ScalarField& f, std::span<const double> anchor,
                              const RandomVariable& X, int n, const SelectionPolicy& policy = {});

/// omega -> xi(omega) on the same space as X, built outcome by outcome from
/// X(omega) alone. Throws SampleSolveError listing every failed outcome.
RandomVariable apply_over_sample(const ScalarField& f, std::span<const double> anchor,
                                 const RandomVariable& X, int n,
                                 const SelectionPolicy& policy = {});
RandomVariable apply_over_sample(const ScalarField& f, double anchor, const RandomVariable& X,
                                 int n, const SelectionPolicy& policy = {});

}  // namespace smvt
