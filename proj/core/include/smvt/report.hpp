#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace smvt::report {

/// Shortest round-trip decimal form of a double (std::to_chars), so the same
/// value always prints the same bytes.
std::string format_number(double v);
/// Components joined by ';' for vector cells.
std::string format_vector(std::span<const double> v);

/// One row of the per-outcome CSV: id,X,xi,theta,residual.
struct CsvRow {
  std::string id;
  std::vector<double> increment;
  std::vector<double> point;  ///< intermediate point, anchor + offset
  double theta = 0.0;
  double residual = 0.0;
};

inline constexpr const char* kCsvHeader = "id,X,xi,theta,residual";

std::string to_csv(std::span<const CsvRow> rows);

inline constexpr int kSchemaVersion = 1;

/// Structural check of a JSON summary against the published report schema.
/// Returns human-readable violations with field paths; empty means valid.
std::vector<std::string> validate_summary(const nlohmann::json& summary);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace smvt::report
