#include "smvt/report.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <stdexcept>

#include "smvt/errors.hpp"
#include "smvt/experiment.hpp"

namespace smvt::report {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), ptr);
}

std::string format_vector(std::span<const double> v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += format_number(v[i]);
  }
  return out;
}

std::string to_csv(std::span<const CsvRow> rows) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += r.id;
    out += ',';
    out += format_vector(r.increment);
    out += ',';
    out += format_vector(r.point);
    out += ',';
    out += format_number(r.theta);
    out += ',';
    out += format_number(r.residual);
    out += '\n';
  }
  return out;
}

namespace {

using nlohmann::json;

struct Checker {
  std::vector<std::string> errors;

  const json* field(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.contains(key)) {
      errors.push_back(path + "." + key + ": required");
      return nullptr;
    }
    return &obj[key];
  }

  void number(const json& obj, const std::string& path, const std::string& key, bool nonneg = false) {
    const json* v = field(obj, path, key);
    if (!v) return;
    if (!v->is_number()) {
      errors.push_back(path + "." + key + ": expected a number");
    } else if (nonneg && v->get<double>() < 0.0) {
      errors.push_back(path + "." + key + ": expected a nonnegative number");
    }
  }

  void integer(const json& obj, const std::string& path, const std::string& key) {
    const json* v = field(obj, path, key);
    if (v && !v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0)) {
      errors.push_back(path + "." + key + ": expected a nonnegative integer");
    }
  }

  void boolean(const json& obj, const std::string& path, const std::string& key) {
    const json* v = field(obj, path, key);
    if (v && !v->is_boolean()) errors.push_back(path + "." + key + ": expected a boolean");
  }

  void number_array(const json& obj, const std::string& path, const std::string& key) {
    const json* v = field(obj, path, key);
    if (!v) return;
    if (!v->is_array() || v->empty()) {
      errors.push_back(path + "." + key + ": expected a nonempty array of numbers");
      return;
    }
    for (const auto& e : *v) {
      if (!e.is_number()) {
        errors.push_back(path + "." + key + ": expected a nonempty array of numbers");
        return;
      }
    }
  }
};

}  // namespace

std::vector<std::string> validate_summary(const json& summary) {
  Checker c;
  if (!summary.is_object()) return {"$: summary must be an object"};

  if (const json* v = c.field(summary, "$", "schema_version")) {
    if (!v->is_number_integer() || v->get<int>() != kSchemaVersion) {
      c.errors.push_back("$.schema_version: expected " + std::to_string(kSchemaVersion));
    }
  }
  std::optional<Command> command;
  if (const json* v = c.field(summary, "$", "command")) {
    try {
      command = parse_command(v->get<std::string>());
    } catch (const std::exception&) {
      c.errors.push_back("$.command: unknown command");
    }
  }
  if (const json* v = c.field(summary, "$", "config")) {
    try {
      const auto cfg = config_from_json(*v);
      if (command && cfg.command != *command) {
        c.errors.push_back("$.config.command: does not match $.command");
      }
    } catch (const ConfigError& e) {
      c.errors.push_back("$.config" + e.path().substr(1) + ": " + e.what());
    } catch (const std::exception& e) {
      c.errors.push_back(std::string("$.config: ") + e.what());
    }
  }
  c.integer(summary, "$", "outcomes");
  c.integer(summary, "$", "failures");
  c.number(summary, "$", "max_residual", true);
  if (const json* v = c.field(summary, "$", "failed_outcomes")) {
    if (!v->is_array()) {
      c.errors.push_back("$.failed_outcomes: expected an array");
    } else {
      for (std::size_t i = 0; i < v->size(); ++i) {
        const auto& e = (*v)[i];
        const std::string p = "$.failed_outcomes[" + std::to_string(i) + "]";
        if (!e.is_object() || !e.contains("id") || !e["id"].is_string() || !e.contains("message") ||
            !e["message"].is_string()) {
          c.errors.push_back(p + ": expected {id: string, message: string}");
        }
      }
      if (summary.contains("failures") && summary["failures"].is_number_integer() &&
          summary["failures"].get<std::size_t>() != v->size()) {
        c.errors.push_back("$.failures: does not match the length of $.failed_outcomes");
      }
    }
  }

  const json* results = c.field(summary, "$", "results");
  if (results && !results->is_object()) {
    c.errors.push_back("$.results: expected an object");
    results = nullptr;
  }
  if (!results || !command) return c.errors;
  // A failed single-outcome solve has nothing to report.
  const bool single = *command == Command::solve || *command == Command::expand;
  if (single && summary.contains("failures") && summary["failures"].is_number_integer() &&
      summary["failures"].get<long long>() > 0) {
    return c.errors;
  }

  const std::string r = "$.results";
  switch (*command) {
    case Command::solve:
      c.number_array(*results, r, "xi");
      c.number_array(*results, r, "point");
      c.number(*results, r, "theta", true);
      c.number(*results, r, "residual");
      c.number(*results, r, "pi");
      c.integer(*results, r, "root_count_estimate");
      break;
    case Command::expand:
      c.number(*results, r, "value");
      c.number(*results, r, "partial_sum");
      c.number(*results, r, "lagrange_remainder");
      c.number_array(*results, r, "point");
      c.number(*results, r, "theta", true);
      c.number(*results, r, "integral_remainder");
      c.boolean(*results, r, "integral_converged");
      c.number(*results, r, "lagrange_identity_residual", true);
      c.number(*results, r, "integral_identity_residual", true);
      break;
    case Command::verify:
      c.integer(*results, r, "passed");
      c.number(*results, r, "pass_rate", true);
      c.integer(*results, r, "containment_failures");
      c.number(*results, r, "residual_tol", true);
      break;
    case Command::measurability:
      c.boolean(*results, r, "measurable");
      c.integer(*results, r, "sigma_x_atoms");
      c.integer(*results, r, "sigma_xi_atoms");
      break;
    case Command::mle_demo:
      c.integer(*results, r, "boundary_count");
      c.number(*results, r, "strictly_between_fraction", true);
      c.number(*results, r, "between_fraction", true);
      c.number(*results, r, "root_n_deviation_mean");
      c.number(*results, r, "root_n_deviation_variance", true);
      c.number(*results, r, "ks_distance", true);
      c.number(*results, r, "theta_star_mean");
      c.number(*results, r, "theta_star_stddev", true);
      c.integer(*results, r, "residual_failures");
      break;
    case Command::delta_demo:
      c.number(*results, r, "ks_distance", true);
      c.number(*results, r, "ks_critical_1pct", true);
      c.number(*results, r, "max_abs_xi_deviation", true);
      c.boolean(*results, r, "all_between");
      c.number(*results, r, "mu");
      c.number(*results, r, "sigma", true);
      break;
    case Command::two_rv:
      c.boolean(*results, r, "measurable");
      c.integer(*results, r, "joint_atoms");
      c.boolean(*results, r, "all_between");
      break;
  }
  return c.errors;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace smvt::report
