#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "blx/bandlimit.hpp"
#include "blx/harness.hpp"
#include "blx/simulate.hpp"

namespace blx {

using ColumnRef = std::variant<std::string, std::size_t>;  // header name or 0-based index

struct ColumnSpec {
  ColumnRef column = std::size_t{0};
  bool skip_header = true;
  std::optional<ColumnRef> date_column{};
};

std::string describe(const ColumnRef& ref);

/// Reads one numeric column of a comma-separated file as a Series with
/// start_t = 1, rows in file order. Empty or unparsable cells are errors
/// (NonNumericCell); there is no imputation. Dates, when requested, are
/// returned verbatim through `dates`.
Series load_series_csv(const std::filesystem::path& path, const ColumnSpec& spec,
                       std::vector<std::string>* dates = nullptr);
Series parse_series_csv(const std::string& text, const ColumnSpec& spec,
                        std::vector<std::string>* dates = nullptr);

struct NamedSeries {
  std::string name;
  Series series;
};

struct RunReport {
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::vector<ResidualReport> reports;
  std::optional<ComparisonReport> comparison;
  std::optional<TrialAggregate> simulation;
  std::vector<NamedSeries> series;
  nlohmann::ordered_json diagnostics = nlohmann::ordered_json::object();
  std::string version;
  double elapsed_ms = 0.0;  // wall time; the only field not reproducible from config

  const ResidualReport* find_report(std::string_view label) const;
  const Series* find_series(std::string_view name) const;
};

enum class ReportFormat { json, csv };

/// json: one document with a stable key order; doubles are written in the
/// shortest form that parses back to the same bits.
/// csv: long-format "series,t,value" rows for plotting.
std::string emit_report(const RunReport& report, ReportFormat format);

/// Inverse of emit_report(json).
RunReport parse_report(const std::string& json_text);

nlohmann::ordered_json to_json(const ResidualReport& r);
ResidualReport residual_report_from_json(const nlohmann::ordered_json& j);

std::string format_double(double v);

}  // namespace blx
