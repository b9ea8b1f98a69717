#include "citefit/sample.hpp"

#include <algorithm>

#include "citefit/errors.hpp"

namespace citefit {

void require_fittable(const CitationSample& sample) {
  if (sample.empty()) throw EmptySample();
  for (const Count c : sample.counts) {
    if (c < 1) throw DomainError("counts must be >= 1 after the offset, got " + std::to_string(c));
  }
}

CountTable CountTable::from(std::span<const Count> counts) {
  std::vector<Count> sorted(counts.begin(), counts.end());
  std::sort(sorted.begin(), sorted.end());

  CountTable table;
  table.total = sorted.size();
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    table.values.push_back(sorted[i]);
    table.multiplicity.push_back(j - i);
    i = j;
  }
  return table;
}

}  // namespace citefit
