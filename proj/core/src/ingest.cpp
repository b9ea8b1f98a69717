#include "citefit/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <string_view>

#include "citefit/errors.hpp"

namespace citefit {
namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && is_space(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && is_space(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

bool looks_integer(std::string_view s) {
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::int64_t parse_count(std::string_view field, std::size_t line) {
  field = trim(field);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  std::int64_t value = 0;
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || end != field.data() + field.size()) {
    throw ParseError(line, "not an integer count: '" + std::string(field) + "'");
  }
  if (value < 0) throw ParseError(line, "negative count " + std::to_string(value));
  return value;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (comma == std::string_view::npos) return fields;
    start = comma + 1;
  }
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

RawCountFile parse_counts(std::istream& in, CountFileFormat format, std::string source) {
  RawCountFile file{std::move(source), format, {}};
  std::optional<std::size_t> column;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = trim(raw);
    if (text.empty()) continue;

    if (file.format == CountFileFormat::Auto) {
      file.format = looks_integer(text) ? CountFileFormat::PlainLines : CountFileFormat::CsvWithHeader;
    }
    if (file.format == CountFileFormat::PlainLines) {
      file.counts.push_back(parse_count(text, line));
      continue;
    }

    const auto fields = split_commas(text);
    if (!column) {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (lowercase(trim(fields[i])) == "citations") column = i;
      }
      if (!column) throw ParseError(line, "CSV header has no 'citations' column");
      continue;
    }
    if (*column >= fields.size()) throw ParseError(line, "row is missing the citations field");
    file.counts.push_back(parse_count(fields[*column], line));
  }
  if (file.counts.empty()) throw ParseError(std::max<std::size_t>(line, 1), "no citation counts found");
  return file;
}

RawCountFile read_count_file(const std::filesystem::path& path, CountFileFormat format) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_counts(in, format, path.string());
}

CitationSample ingest(const RawCountFile& file, Count offset) {
  if (offset < 0) throw OffsetError("offset must be non-negative");
  CitationSample sample;
  sample.offset_applied = offset;
  sample.label = file.path;
  sample.counts.reserve(file.counts.size());
  for (const auto c : file.counts) {
    if (c + offset < 1) {
      throw OffsetError("count " + std::to_string(c) + " with offset " + std::to_string(offset) +
                        " falls outside the support {1, 2, ...}");
    }
    sample.counts.push_back(c + offset);
  }
  return sample;
}

}  // namespace citefit
