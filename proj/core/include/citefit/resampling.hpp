#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "citefit/sample.hpp"

namespace citefit {

/// Smallest replicate count with a non-empty 2.5% tail.
inline constexpr std::size_t kMinReps = 40;

/// Draws `size` values with replacement. Deterministic given the seed.
CitationSample resample(const CitationSample& sample, std::size_t size, std::uint64_t seed);

/// Either the size of the source sample or a fixed size.
class ResampleSize {
 public:
  static ResampleSize same() { return ResampleSize(0); }
  static ResampleSize fixed(std::size_t n);

  bool is_same() const noexcept { return fixed_ == 0; }
  std::size_t resolve(std::size_t source_size) const noexcept {
    return is_same() ? source_size : fixed_;
  }

 private:
  explicit ResampleSize(std::size_t n) : fixed_(n) {}
  std::size_t fixed_;
};

struct StudySummary {
  std::string statistic_name;
  double median;
  double lo95;
  double hi95;
  std::size_t reps;
  /// Replicates whose statistic failed; excluded from the order statistics.
  std::size_t failed = 0;
  /// Successful replicate values in replicate order.
  std::vector<double> raw;
};

/// k = ceil(0.025 * n): the 95% interval runs from the k-th smallest to the
/// k-th largest of n values (25 for n = 1000).
std::size_t ci_rank(std::size_t n) noexcept;

/// Median (mean of the two central values for even n) and order-statistic
/// 95% interval of `values`. Throws AllStatisticsFailed if `values` is empty.
StudySummary summarize(std::string name, std::vector<double> values, std::size_t reps,
                       std::size_t failed);

/// Returns nullopt when the statistic is undefined for a replicate.
using Statistic = std::function<std::optional<double>(const CitationSample&)>;

struct BootstrapConfig {
  std::size_t reps = 1000;
  ResampleSize size = ResampleSize::same();
  std::uint64_t seed = 0;
  unsigned workers = 0;
};

/// Evaluates `statistic` on `reps` resamples (replicate r uses
/// derive_seed(seed, r)) and summarises the successes.
///
/// Throws TooFewReps below kMinReps, EmptySample for an empty source and
/// AllStatisticsFailed when nothing succeeded. A statistic that throws counts
/// as a failed replicate.
StudySummary bootstrap_study(const CitationSample& sample, std::string statistic_name,
                             const Statistic& statistic, const BootstrapConfig& config);

}  // namespace citefit
