#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "citefit/distributions.hpp"
#include "citefit/sample.hpp"

namespace citefit {

/// Table cell: NA, integer, real, or text.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  /// Footnotes: failures, NA explanations, accounting.
  std::vector<std::string> notes;

  bool operator==(const Table&) const = default;
};

struct ReportHeader {
  std::string tool_version;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> reps;
  std::string command;
  std::string data_source;

  bool operator==(const ReportHeader&) const = default;
};

struct Report {
  ReportHeader header;
  Table table;

  bool operator==(const Report&) const = default;
};

enum class ReportFormat { Tsv, Json };

ReportFormat parse_report_format(std::string_view name);

/// Shortest rendering with four significant figures ("0.4401", "329.5",
/// "9994"). NA cells render as "NA".
std::string format_sig4(double value);

/// TSV: '#'-prefixed header block, one tab-separated column line, rows with
/// four significant figures, then '#'-prefixed notes.
/// JSON: {"header": {...}, "columns": [...], "rows": [{column: value}...],
/// "notes": [...]} with reals at full precision.
///
/// Throws ParameterError when a row's width differs from the column count.
void emit_report(const Report& report, ReportFormat format, std::ostream& out);
void emit_report(const Report& report, ReportFormat format,
                 const std::filesystem::path& destination);

/// Inverse of the JSON writer.
Report parse_json_report(std::string_view text);

/// CSV with columns x, empirical_cdf, model_cdf for x = 1 .. max(sample).
void emit_plot_data(const ModelSpec& model, const CitationSample& sample, std::ostream& out);
void emit_plot_data(const ModelSpec& model, const CitationSample& sample,
                    const std::filesystem::path& destination);

}  // namespace citefit
