#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace citefit {

struct SimplexOptions {
  /// Converged when the spread of vertex values is below
  /// ftol_rel * max(1, |best value|).
  double ftol_rel = 1e-8;
  /// Converged when every vertex is within xtol of the best vertex.
  double xtol = 1e-6;
  int max_evaluations = 10000;
  /// Extra restarts from the best point after convergence, to guard against
  /// a collapsed simplex.
  int restarts = 2;
};

enum class SimplexStop { Converged, BudgetExhausted, Aborted };

struct SimplexResult {
  std::vector<double> x;
  double value;
  int evaluations;
  SimplexStop stop;
};

/// Derivative-free Nelder-Mead minimisation (standard coefficients 1, 2, 1/2,
/// 1/2). Non-finite objective values are treated as +inf.
///
/// `abort_when` is checked against every new best vertex; returning true
/// stops the search with SimplexStop::Aborted and the best point so far.
SimplexResult nelder_mead(
    const std::function<double(std::span<const double>)>& objective,
    std::vector<double> start, std::vector<double> steps,
    const SimplexOptions& options = {},
    const std::function<bool(std::span<const double>)>& abort_when = {});

}  // namespace citefit
