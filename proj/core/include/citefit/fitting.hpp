#pragma once

#include <optional>
#include <string>

#include "citefit/distributions.hpp"
#include "citefit/sample.hpp"

namespace citefit {

enum class FitStatus { Converged, NonConverged, Degenerate };

std::string_view to_string(FitStatus status) noexcept;

struct FitConfig {
  double ftol_rel = 1e-8;
  double xtol = 1e-6;
  int max_evaluations = 10000;
  /// Hooked power law ridge guard: the search stops once B exceeds this.
  double max_hook_b = 1e7;
};

struct FitResult {
  Family family;
  /// Best point found. Empty only for Degenerate fits.
  std::optional<ModelSpec> model;
  double log_likelihood;
  FitStatus status;
  int evaluations = 0;
  std::string message;

  bool converged() const noexcept { return status == FitStatus::Converged; }
};

/// Maximum-likelihood fit of one family.
///
/// Lognormal: simplex search over (mu, log sigma) from the moments of
/// ln(counts). Hooked: search over (log(alpha - 1), log B) from alpha = 3,
/// B = mean(counts). All-equal samples are reported as Degenerate; the ridge
/// guard and an exhausted budget are reported as NonConverged with the best
/// point found.
///
/// Throws EmptySample or DomainError for invalid samples.
FitResult fit(Family family, const CitationSample& sample, const FitConfig& config = {});
FitResult fit(Family family, const CountTable& table, const FitConfig& config = {});

double log_likelihood(const ModelSpec& model, const CitationSample& sample);
double log_likelihood(const ModelSpec& model, const CountTable& table);

}  // namespace citefit
