#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "citefit/sample.hpp"

namespace citefit {

enum class CountFileFormat {
  PlainLines,     // one non-negative integer per line
  CsvWithHeader,  // comma separated, one header column named "citations"
  Auto,           // CSV if the first non-blank line is not an integer
};

/// Raw (pre-offset) citation counts as read from disk.
struct RawCountFile {
  std::string path;
  CountFileFormat format = CountFileFormat::PlainLines;
  std::vector<std::int64_t> counts;
};

/// Parses counts, rejecting negatives, non-integers and inputs without any
/// count. Blank lines are skipped. Errors carry the 1-based line number.
RawCountFile parse_counts(std::istream& in, CountFileFormat format = CountFileFormat::Auto,
                          std::string source = "<stream>");
RawCountFile read_count_file(const std::filesystem::path& path,
                             CountFileFormat format = CountFileFormat::Auto);

/// Maps c to c + offset. Throws OffsetError if a zero count would land
/// outside the support {1, 2, ...}.
CitationSample ingest(const RawCountFile& file, Count offset = 1);

}  // namespace citefit
