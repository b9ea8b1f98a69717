#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace citefit {

using Count = std::int64_t;

/// Offset-adjusted citation counts. Every element is at least 1.
struct CitationSample {
  std::vector<Count> counts;
  Count offset_applied = 1;
  std::string label;

  std::size_t size() const noexcept { return counts.size(); }
  bool empty() const noexcept { return counts.empty(); }
};

/// Throws EmptySample or DomainError when the sample cannot be fitted.
void require_fittable(const CitationSample& sample);

/// Distinct values in ascending order with their multiplicities.
///
/// Likelihoods and empirical CDFs only depend on this table, and citation
/// data has far fewer distinct values than observations.
struct CountTable {
  std::vector<Count> values;
  std::vector<std::size_t> multiplicity;
  std::size_t total = 0;

  static CountTable from(std::span<const Count> counts);
  static CountTable from(const CitationSample& sample) { return from(sample.counts); }

  bool empty() const noexcept { return total == 0; }
  std::size_t distinct() const noexcept { return values.size(); }
  Count max() const { return values.back(); }
};

}  // namespace citefit
