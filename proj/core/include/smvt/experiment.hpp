#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "smvt/selector.hpp"

namespace smvt {

enum class Command { expand, solve, verify, measurability, mle_demo, delta_demo, two_rv };

std::string to_string(Command c);
/// Accepts the CLI spellings: expand, solve, verify, measurability,
/// mle-demo, delta-demo, two-rv.
Command parse_command(const std::string& s);
bool is_stochastic(Command c);

/// Declarative description of one run. The JSON form uses the keys listed
/// in to_json(); unknown keys are rejected.
struct ExperimentConfig {
  Command command = Command::solve;
  std::string function = "exp";
  std::vector<double> anchor{0.0};
  std::vector<double> increment;
  int order = 1;
  SelectionPolicy policy;
  /// Pass threshold on the recomputed relative residual (verify, mle-demo).
  double verify_tol = 1e-9;
  std::optional<std::uint64_t> seed;
  std::string distribution = "uniform:-1,1";
  std::string y_distribution;
  std::size_t count = 1000;
  std::size_t replicates = 1000;
  std::size_t sample_size = 100;
  std::string model = "bernoulli:0.3";
  std::optional<double> mu;
  std::string space_path;
  std::string y_space_path;
  /// Empty means $SMVT_OUTPUT_DIR, then the working directory.
  std::string output_dir;
  /// Empty means the command name.
  std::string output_prefix;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Throws ConfigError naming the offending field path.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& config);
/// Cross-field checks: finite numbers, mandatory seed for stochastic runs,
/// arity agreement, required inputs per command.
void validate(const ExperimentConfig& config);

std::string resolve_output_dir(const ExperimentConfig& config);

struct RunOutcome {
  int exit_code = 0;  ///< 0 ok, 1 validation error, 2 per-outcome solver failure
  nlohmann::json summary;
  std::string csv;
  std::string csv_path;
  std::string json_path;
  std::vector<std::string> messages;  ///< human-readable lines for the terminal
};

/// Validates, executes, and writes <dir>/<prefix>.csv and <dir>/<prefix>.json.
/// On a validation error nothing is written.
RunOutcome run(const ExperimentConfig& config);

}  // namespace smvt
