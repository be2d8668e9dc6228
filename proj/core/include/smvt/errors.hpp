#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace smvt {

/// A point or segment left the domain a field was declared on.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A derivative of higher order than the field supports was requested.
class OrderError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Vector lengths disagree with the arity of a field.
class ArityError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The selector scan found neither a sign change nor a node within tolerance.
///
/// Existence of the intermediate point is guaranteed for continuous
/// derivatives, so this almost always means a bad derivative oracle or a
/// function evaluated outside its domain.
class NoRootFound : public std::runtime_error {
 public:
  NoRootFound(const std::string& what, double lo, double hi, double min_abs_gap);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double min_abs_gap() const noexcept { return min_abs_gap_; }

 private:
  double lo_;
  double hi_;
  double min_abs_gap_;
};

struct OutcomeFailure {
  std::string outcome_id;
  std::string message;
};

/// Per-outcome failures collected while solving over a whole sample.
class SampleSolveError : public std::runtime_error {
 public:
  explicit SampleSolveError(std::vector<OutcomeFailure> failures);

  const std::vector<OutcomeFailure>& failures() const noexcept { return failures_; }

 private:
  std::vector<OutcomeFailure> failures_;
};

/// Configuration rejected; `path` is a JSON-pointer-like field path such as
/// `$.policy.scan_points`.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string path, const std::string& message);

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace smvt
