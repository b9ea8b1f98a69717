#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>

#include "citefit/distributions.hpp"
#include "citefit/fitting.hpp"
#include "citefit/sample.hpp"

namespace citefit {

using CdfFunction = std::function<double(Count)>;

/// Discrete Kolmogorov-Smirnov distance: the largest |F(x) - Fn(x)| over the
/// atoms x = 1 .. max(sample).
///
/// Fn is constant between observed values and F is non-decreasing, so only
/// the atoms at and just before each observed value need evaluating.
double ks_statistic(const CdfFunction& cdf, const CountTable& table);
double ks_statistic(const CdfFunction& cdf, const CitationSample& sample);
double ks_statistic(const ModelSpec& model, const CitationSample& sample);
double ks_statistic(const ModelSpec& model, const CountTable& table);

enum class RefitMode { FixedParams, Refit };

std::string_view to_string(RefitMode mode) noexcept;

/// (exceedances + 1) / (n_sim + 1); never zero.
double monte_carlo_p_value(std::size_t exceedances, std::size_t n_sim);

struct GofConfig {
  std::size_t n_sim = 1000;
  std::uint64_t seed = 0;
  RefitMode refit = RefitMode::FixedParams;
  FitConfig fit;
  unsigned workers = 0;
};

struct GofResult {
  double ks_stat;
  double p_value;
  /// Simulations that entered the p-value.
  std::size_t n_sim;
  std::size_t exceedances;
  RefitMode refit_mode;
  /// Refit simulations whose fit failed; they are left out of n_sim.
  std::size_t failed_sims = 0;
  /// The fit the statistic was measured against, when the family was fitted.
  std::optional<FitResult> fit;
  /// False when the fitted model came from a NonConverged search.
  bool fit_converged = true;
};

/// Monte-Carlo p-value of `sample` against a fully specified model.
/// Simulation i uses seed derive_seed(seed, i).
GofResult ks_p_value(const ModelSpec& model, const CitationSample& sample,
                     std::size_t n_sim, std::uint64_t seed, unsigned workers = 0);

/// Fits `family`, then compares the observed distance with n_sim samples of
/// the same size drawn from the fitted model. With RefitMode::Refit every
/// simulated sample is refitted before its distance is measured.
///
/// Throws FitFailed when the family cannot be fitted (Degenerate data).
GofResult ks_p_value(Family family, const CitationSample& sample, const GofConfig& config);

enum class ShapeSign { Plus, Equal, Minus };

char symbol(ShapeSign sign) noexcept;

/// Where the empirical CDF sits relative to a model at the bottom (x = 1),
/// the empirical median, and the empirical 99th-percentile atom.
struct ShapeReport {
  ShapeSign bottom;
  ShapeSign middle;
  ShapeSign top;
  double epsilon;
  /// Fn(x) - F(x) at the three evaluation atoms.
  std::array<double, 3> delta;
  std::array<Count, 3> atoms;
};

ShapeReport shape_classify(const CdfFunction& cdf, const CitationSample& sample,
                           double epsilon = 0.01);
ShapeReport shape_classify(const ModelSpec& model, const CitationSample& sample,
                           double epsilon = 0.01);

}  // namespace citefit
