#include "citefit/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace citefit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Vertex {
  std::vector<double> x;
  double f;
};

class Search {
 public:
  Search(const std::function<double(std::span<const double>)>& objective,
         const std::function<bool(std::span<const double>)>& abort_when,
         const SimplexOptions& options)
      : objective_(objective), abort_when_(abort_when), options_(options) {}

  double eval(const std::vector<double>& x) {
    ++evaluations_;
    const double f = objective_(x);
    return std::isfinite(f) ? f : kInf;
  }

  bool budget_left() const { return evaluations_ < options_.max_evaluations; }
  int evaluations() const { return evaluations_; }

  bool aborts(const Vertex& best) const { return abort_when_ && abort_when_(best.x); }

  // One Nelder-Mead run from `start`; returns the best vertex and the stop reason.
  std::pair<Vertex, SimplexStop> run(const std::vector<double>& start,
                                     const std::vector<double>& steps) {
    const std::size_t dim = start.size();
    std::vector<Vertex> simplex;
    simplex.push_back({start, eval(start)});
    for (std::size_t i = 0; i < dim; ++i) {
      auto x = start;
      x[i] += steps[i];
      simplex.push_back({x, eval(x)});
    }

    auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
    while (true) {
      std::sort(simplex.begin(), simplex.end(), by_value);
      const Vertex& best = simplex.front();
      if (aborts(best)) return {best, SimplexStop::Aborted};
      if (converged(simplex)) return {best, SimplexStop::Converged};
      if (!budget_left()) return {best, SimplexStop::BudgetExhausted};

      std::vector<double> centroid(dim, 0.0);
      for (std::size_t v = 0; v < dim; ++v) {
        for (std::size_t i = 0; i < dim; ++i) centroid[i] += simplex[v].x[i] / static_cast<double>(dim);
      }
      Vertex& worst = simplex.back();
      auto along = [&](double t) {
        std::vector<double> x(dim);
        for (std::size_t i = 0; i < dim; ++i) x[i] = centroid[i] + t * (worst.x[i] - centroid[i]);
        return x;
      };

      Vertex reflected{along(-1.0), 0.0};
      reflected.f = eval(reflected.x);
      if (reflected.f < simplex.front().f) {
        Vertex expanded{along(-2.0), 0.0};
        expanded.f = eval(expanded.x);
        worst = expanded.f < reflected.f ? std::move(expanded) : std::move(reflected);
        continue;
      }
      if (reflected.f < simplex[dim - 1].f) {
        worst = std::move(reflected);
        continue;
      }

      const bool outside = reflected.f < worst.f;
      Vertex contracted{along(outside ? -0.5 : 0.5), 0.0};
      contracted.f = eval(contracted.x);
      if (outside ? contracted.f <= reflected.f : contracted.f < worst.f) {
        worst = std::move(contracted);
        continue;
      }

      for (std::size_t v = 1; v <= dim; ++v) {
        for (std::size_t i = 0; i < dim; ++i) {
          simplex[v].x[i] = simplex[0].x[i] + 0.5 * (simplex[v].x[i] - simplex[0].x[i]);
        }
        simplex[v].f = eval(simplex[v].x);
      }
    }
  }

 private:
  bool converged(const std::vector<Vertex>& simplex) const {
    const double best = simplex.front().f;
    const double worst = simplex.back().f;
    if (std::isfinite(worst) && worst - best <= options_.ftol_rel * std::max(1.0, std::abs(best))) {
      return true;
    }
    double diameter = 0.0;
    for (std::size_t v = 1; v < simplex.size(); ++v) {
      for (std::size_t i = 0; i < simplex[v].x.size(); ++i) {
        diameter = std::max(diameter, std::abs(simplex[v].x[i] - simplex[0].x[i]));
      }
    }
    return diameter < options_.xtol;
  }

  const std::function<double(std::span<const double>)>& objective_;
  const std::function<bool(std::span<const double>)>& abort_when_;
  const SimplexOptions& options_;
  int evaluations_ = 0;
};

}  // namespace

SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                          std::vector<double> start, std::vector<double> steps,
                          const SimplexOptions& options,
                          const std::function<bool(std::span<const double>)>& abort_when) {
  Search search(objective, abort_when, options);
  auto [best, stop] = search.run(start, steps);

  for (int r = 0; r < options.restarts && stop == SimplexStop::Converged; ++r) {
    auto [again, again_stop] = search.run(best.x, steps);
    const double gain = best.f - again.f;
    const bool improved = again.f < best.f;
    if (!improved) break;
    best = std::move(again);
    stop = again_stop;
    if (gain <= options.ftol_rel * std::max(1.0, std::abs(best.f))) break;
  }
  return {std::move(best.x), best.f, search.evaluations(), stop};
}

}  // namespace citefit
