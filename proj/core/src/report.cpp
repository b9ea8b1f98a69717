#include "citefit/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "citefit/errors.hpp"
#include "json.hpp"

namespace citefit {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string shortest(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return ec == std::errc() ? std::string(buf, end) : std::string("NA");
}

std::string sanitize(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return out;
}

std::string tsv_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "NA";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_sig4(v);
        } else {
          return sanitize(v);
        }
      },
      cell);
}

ordered_json json_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else {
          return v;
        }
      },
      cell);
}

Cell cell_from_json(const ordered_json& value) {
  switch (value.type()) {
    case ordered_json::value_t::null:
      return std::monostate{};
    case ordered_json::value_t::number_integer:
    case ordered_json::value_t::number_unsigned:
      return value.get<std::int64_t>();
    case ordered_json::value_t::number_float:
      return value.get<double>();
    case ordered_json::value_t::string:
      return value.get<std::string>();
    default:
      throw ParseError(1, "unsupported JSON cell type");
  }
}

void check_widths(const Table& table) {
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) {
      throw ParameterError("row has " + std::to_string(row.size()) + " cells but the table has " +
                           std::to_string(table.columns.size()) + " columns");
    }
  }
}

void emit_tsv(const Report& report, std::ostream& out) {
  const auto& h = report.header;
  out << "# tool: citefit " << h.tool_version << '\n';
  out << "# command: " << sanitize(h.command) << '\n';
  out << "# seed: " << h.seed << '\n';
  out << "# reps: " << (h.reps ? std::to_string(*h.reps) : std::string("NA")) << '\n';
  out << "# data: " << sanitize(h.data_source) << '\n';
  for (std::size_t i = 0; i < report.table.columns.size(); ++i) {
    out << (i ? "\t" : "") << sanitize(report.table.columns[i]);
  }
  out << '\n';
  for (const auto& row : report.table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "\t" : "") << tsv_cell(row[i]);
    out << '\n';
  }
  for (const auto& note : report.table.notes) out << "# note: " << sanitize(note) << '\n';
}

void emit_json(const Report& report, std::ostream& out) {
  const auto& h = report.header;
  ordered_json doc;
  doc["header"] = {{"tool", "citefit " + h.tool_version},
                   {"command", h.command},
                   {"seed", h.seed},
                   {"reps", h.reps ? ordered_json(*h.reps) : ordered_json(nullptr)},
                   {"data", h.data_source}};
  doc["columns"] = report.table.columns;
  doc["rows"] = ordered_json::array();
  for (const auto& row : report.table.rows) {
    ordered_json object = ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) object[report.table.columns[i]] = json_cell(row[i]);
    doc["rows"].push_back(std::move(object));
  }
  doc["notes"] = report.table.notes;
  out << doc.dump(2) << '\n';
}

template <class Writer>
void write_file(const std::filesystem::path& destination, Writer&& writer) {
  std::ofstream out(destination);
  if (!out) throw IoError("cannot open " + destination.string() + " for writing");
  writer(out);
  out.flush();
  if (!out) throw IoError("failed writing " + destination.string());
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
  if (name == "tsv") return ReportFormat::Tsv;
  if (name == "json") return ReportFormat::Json;
  throw ParameterError("unknown report format '" + std::string(name) + "'");
}

std::string format_sig4(double value) {
  if (std::isnan(value)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", value);
  return buf;
}

void emit_report(const Report& report, ReportFormat format, std::ostream& out) {
  check_widths(report.table);
  if (format == ReportFormat::Tsv) {
    emit_tsv(report, out);
  } else {
    emit_json(report, out);
  }
  if (!out) throw IoError("failed writing report");
}

void emit_report(const Report& report, ReportFormat format, const std::filesystem::path& destination) {
  write_file(destination, [&](std::ostream& out) { emit_report(report, format, out); });
}

Report parse_json_report(std::string_view text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(1, e.what());
  }

  try {
    Report report;
    const auto& h = doc.at("header");
    std::string tool = h.at("tool").get<std::string>();
    constexpr std::string_view prefix = "citefit ";
    if (tool.rfind(prefix, 0) == 0) tool.erase(0, prefix.size());
    report.header.tool_version = tool;
    report.header.command = h.at("command").get<std::string>();
    report.header.seed = h.at("seed").get<std::uint64_t>();
    if (!h.at("reps").is_null()) report.header.reps = h.at("reps").get<std::uint64_t>();
    report.header.data_source = h.at("data").get<std::string>();

    report.table.columns = doc.at("columns").get<std::vector<std::string>>();
    for (const auto& object : doc.at("rows")) {
      std::vector<Cell> row;
      for (const auto& column : report.table.columns) row.push_back(cell_from_json(object.at(column)));
      report.table.rows.push_back(std::move(row));
    }
    report.table.notes = doc.at("notes").get<std::vector<std::string>>();
    return report;
  } catch (const ordered_json::exception& e) {
    throw ParseError(1, std::string("malformed report: ") + e.what());
  }
}

void emit_plot_data(const ModelSpec& model, const CitationSample& sample, std::ostream& out) {
  require_fittable(sample);
  const auto table = CountTable::from(sample);
  const auto n = static_cast<double>(table.total);
  out << "x,empirical_cdf,model_cdf\n";
  std::size_t cumulative = 0;
  std::size_t next = 0;
  for (Count x = 1; x <= table.max(); ++x) {
    if (next < table.values.size() && table.values[next] == x) cumulative += table.multiplicity[next++];
    out << x << ',' << shortest(static_cast<double>(cumulative) / n) << ',' << shortest(model.cdf(x))
        << '\n';
  }
  if (!out) throw IoError("failed writing plot data");
}

void emit_plot_data(const ModelSpec& model, const CitationSample& sample,
                    const std::filesystem::path& destination) {
  write_file(destination, [&](std::ostream& out) { emit_plot_data(model, sample, out); });
}

}  // namespace citefit
