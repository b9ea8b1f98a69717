#pragma once

#include <cstddef>
#include <span>

#include "citefit/distributions.hpp"
#include "citefit/sample.hpp"

namespace citefit {

/// Two-sided 5% critical value of the standard normal.
inline constexpr double kVuongCritical = 1.96;

enum class Favored { ModelA, ModelB, Neither };

struct VuongResult {
  /// Positive values favour model A.
  double z;
  double p_two_sided;
  Favored favored;
  std::size_t n;
};

/// Vuong's non-nested likelihood-ratio test. Both families have two
/// parameters, so no information-criterion correction is applied.
///
/// Throws EmptySample for n < 2 and IdenticalModels when every pointwise
/// log-likelihood difference is the same.
VuongResult vuong(const ModelSpec& model_a, const ModelSpec& model_b,
                  const CitationSample& sample, double critical = kVuongCritical);

VuongResult vuong(const ModelSpec& model_a, const ModelSpec& model_b, const CountTable& table,
                  double critical = kVuongCritical);

/// The same test from precomputed differences log f_A(c_i) - log f_B(c_i).
VuongResult vuong_from_differences(std::span<const double> differences,
                                   double critical = kVuongCritical);

struct SignificanceTally {
  std::size_t a_wins = 0;
  std::size_t b_wins = 0;
  std::size_t neither = 0;

  std::size_t total() const noexcept { return a_wins + b_wins + neither; }
  bool operator==(const SignificanceTally&) const = default;
};

SignificanceTally tally_significance(std::span<const VuongResult> results);

}  // namespace citefit
