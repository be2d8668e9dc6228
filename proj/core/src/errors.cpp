#include "smvt/errors.hpp"

#include <sstream>

namespace smvt {

NoRootFound::NoRootFound(const std::string& what, double lo, double hi, double min_abs_gap)
    : std::runtime_error(what), lo_(lo), hi_(hi), min_abs_gap_(min_abs_gap) {}

namespace {

std::string summarize(const std::vector<OutcomeFailure>& failures) {
  std::ostringstream os;
  os << failures.size() << " outcome(s) failed";
  std::size_t shown = 0;
  for (const auto& f : failures) {
    if (shown++ == 5) {
      os << "; ...";
      break;
    }
    os << "; [" << f.outcome_id << "] " << f.message;
  }
  return os.str();
}

}  // namespace

SampleSolveError::SampleSolveError(std::vector<OutcomeFailure> failures)
    : std::runtime_error(summarize(failures)), failures_(std::move(failures)) {}

ConfigError::ConfigError(std::string path, const std::string& message)
    : std::invalid_argument(path + ": " + message), path_(std::move(path)) {}

}  // namespace smvt
