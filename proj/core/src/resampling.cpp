#include "citefit/resampling.hpp"

#include <algorithm>
#include <cmath>

#include "citefit/errors.hpp"
#include "citefit/parallel.hpp"
#include "citefit/random.hpp"

namespace citefit {

CitationSample resample(const CitationSample& sample, std::size_t size, std::uint64_t seed) {
  if (sample.empty()) throw EmptySample();
  if (size == 0) throw ParameterError("resample size must be positive");
  CitationSample out;
  out.offset_applied = sample.offset_applied;
  out.label = sample.label;
  out.counts.reserve(size);
  Rng rng(seed);
  for (std::size_t i = 0; i < size; ++i) out.counts.push_back(sample.counts[rng.index(sample.size())]);
  return out;
}

ResampleSize ResampleSize::fixed(std::size_t n) {
  if (n == 0) throw ParameterError("fixed resample size must be positive");
  return ResampleSize(n);
}

std::size_t ci_rank(std::size_t n) noexcept { return (n * 25 + 999) / 1000; }

StudySummary summarize(std::string name, std::vector<double> values, std::size_t reps,
                       std::size_t failed) {
  if (values.empty()) throw AllStatisticsFailed();
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size();
  const double median = m % 2 == 1 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
  const std::size_t k = ci_rank(m);
  return {std::move(name), median, sorted[k - 1], sorted[m - k], reps, failed, std::move(values)};
}

StudySummary bootstrap_study(const CitationSample& sample, std::string statistic_name,
                             const Statistic& statistic, const BootstrapConfig& config) {
  if (config.reps < kMinReps) {
    throw TooFewReps("bootstrap needs at least " + std::to_string(kMinReps) + " reps, got " +
                     std::to_string(config.reps));
  }
  if (sample.empty()) throw EmptySample();

  const std::size_t size = config.size.resolve(sample.size());
  std::vector<std::optional<double>> outcome(config.reps);
  parallel_for(
      config.reps,
      [&](std::size_t r) {
        const auto draw = resample(sample, size, derive_seed(config.seed, r));
        try {
          const auto value = statistic(draw);
          if (value && std::isfinite(*value)) outcome[r] = value;
        } catch (const Error&) {
          // counted as a failed replicate below
        }
      },
      config.workers);

  std::vector<double> values;
  values.reserve(config.reps);
  for (const auto& v : outcome) {
    if (v) values.push_back(*v);
  }
  const std::size_t failed = config.reps - values.size();
  return summarize(std::move(statistic_name), std::move(values), config.reps, failed);
}

}  // namespace citefit
