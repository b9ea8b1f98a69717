#include "citefit/goodness_of_fit.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "citefit/errors.hpp"
#include "citefit/parallel.hpp"
#include "citefit/random.hpp"

namespace citefit {
namespace {

double empirical_cdf(const CountTable& table, Count x) {
  const auto end = std::upper_bound(table.values.begin(), table.values.end(), x);
  std::size_t below = 0;
  for (auto it = table.values.begin(); it != end; ++it) {
    below += table.multiplicity[static_cast<std::size_t>(it - table.values.begin())];
  }
  return static_cast<double>(below) / static_cast<double>(table.total);
}

// Smallest observed value whose empirical CDF reaches `level`.
Count empirical_atom(const CountTable& table, double level) {
  std::size_t cumulative = 0;
  for (std::size_t i = 0; i < table.values.size(); ++i) {
    cumulative += table.multiplicity[i];
    if (static_cast<double>(cumulative) >= level * static_cast<double>(table.total)) {
      return table.values[i];
    }
  }
  return table.values.back();
}

ShapeSign classify(double delta, double epsilon) {
  if (delta > epsilon) return ShapeSign::Plus;
  if (delta < -epsilon) return ShapeSign::Minus;
  return ShapeSign::Equal;
}

std::size_t count_exceedances(const std::vector<double>& simulated, double observed) {
  return static_cast<std::size_t>(
      std::count_if(simulated.begin(), simulated.end(), [observed](double d) { return d >= observed; }));
}

}  // namespace

double ks_statistic(const CdfFunction& cdf, const CountTable& table) {
  if (table.empty()) throw EmptySample();
  const auto n = static_cast<double>(table.total);
  double d = 0.0;
  std::size_t cumulative = 0;
  Count previous = 0;
  for (std::size_t i = 0; i < table.values.size(); ++i) {
    const Count v = table.values[i];
    const double flat = static_cast<double>(cumulative) / n;
    // Fn is flat on (previous, v); |F - Fn| peaks at one end of that run.
    if (v - 1 > previous) {
      d = std::max(d, std::abs(cdf(previous + 1) - flat));
      d = std::max(d, std::abs(cdf(v - 1) - flat));
    }
    cumulative += table.multiplicity[i];
    d = std::max(d, std::abs(cdf(v) - static_cast<double>(cumulative) / n));
    previous = v;
  }
  return d;
}

double ks_statistic(const CdfFunction& cdf, const CitationSample& sample) {
  require_fittable(sample);
  return ks_statistic(cdf, CountTable::from(sample));
}

double ks_statistic(const ModelSpec& model, const CountTable& table) {
  return ks_statistic([&model](Count x) { return model.cdf(x); }, table);
}

double ks_statistic(const ModelSpec& model, const CitationSample& sample) {
  require_fittable(sample);
  return ks_statistic(model, CountTable::from(sample));
}

std::string_view to_string(RefitMode mode) noexcept {
  return mode == RefitMode::FixedParams ? "FixedParams" : "Refit";
}

double monte_carlo_p_value(std::size_t exceedances, std::size_t n_sim) {
  return static_cast<double>(exceedances + 1) / static_cast<double>(n_sim + 1);
}

GofResult ks_p_value(const ModelSpec& model, const CitationSample& sample, std::size_t n_sim,
                     std::uint64_t seed, unsigned workers) {
  require_fittable(sample);
  if (n_sim == 0) throw ParameterError("n_sim must be positive");
  const double observed = ks_statistic(model, CountTable::from(sample));

  std::vector<double> simulated(n_sim);
  parallel_for(
      n_sim,
      [&](std::size_t i) {
        const auto draw = citefit::sample(model, sample.size(), derive_seed(seed, i));
        simulated[i] = ks_statistic(model, CountTable::from(draw));
      },
      workers);

  const std::size_t r = count_exceedances(simulated, observed);
  GofResult result;
  result.ks_stat = observed;
  result.p_value = monte_carlo_p_value(r, n_sim);
  result.n_sim = n_sim;
  result.exceedances = r;
  result.refit_mode = RefitMode::FixedParams;
  return result;
}

GofResult ks_p_value(Family family, const CitationSample& sample, const GofConfig& config) {
  require_fittable(sample);
  auto fitted = fit(family, sample, config.fit);
  if (!fitted.model) {
    throw FitFailed("cannot fit " + std::string(to_string(family)) + ": " + fitted.message);
  }
  const ModelSpec model = *fitted.model;

  GofResult result;
  if (config.refit == RefitMode::FixedParams) {
    result = ks_p_value(model, sample, config.n_sim, config.seed, config.workers);
  } else {
    if (config.n_sim == 0) throw ParameterError("n_sim must be positive");
    const double observed = ks_statistic(model, sample);
    std::vector<std::optional<double>> simulated(config.n_sim);
    parallel_for(
        config.n_sim,
        [&](std::size_t i) {
          const auto draw = citefit::sample(model, sample.size(), derive_seed(config.seed, i));
          const auto table = CountTable::from(draw);
          const auto refit = fit(family, table, config.fit);
          if (refit.model) simulated[i] = ks_statistic(*refit.model, table);
        },
        config.workers);

    std::vector<double> usable;
    for (const auto& d : simulated) {
      if (d) usable.push_back(*d);
    }
    if (usable.empty()) throw AllStatisticsFailed();
    const std::size_t r = count_exceedances(usable, observed);
    result.ks_stat = observed;
    result.p_value = monte_carlo_p_value(r, usable.size());
    result.n_sim = usable.size();
    result.exceedances = r;
    result.refit_mode = RefitMode::Refit;
    result.failed_sims = config.n_sim - usable.size();
  }
  result.fit_converged = fitted.converged();
  result.fit = std::move(fitted);
  return result;
}

char symbol(ShapeSign sign) noexcept {
  switch (sign) {
    case ShapeSign::Plus:
      return '+';
    case ShapeSign::Minus:
      return '-';
    case ShapeSign::Equal:
      break;
  }
  return '=';
}

ShapeReport shape_classify(const CdfFunction& cdf, const CitationSample& sample, double epsilon) {
  require_fittable(sample);
  if (!(epsilon > 0.0)) throw ParameterError("epsilon must be positive");
  const auto table = CountTable::from(sample);

  const std::array<Count, 3> atoms{1, empirical_atom(table, 0.5), empirical_atom(table, 0.99)};
  std::array<double, 3> delta{};
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    delta[i] = empirical_cdf(table, atoms[i]) - cdf(atoms[i]);
  }
  return {classify(delta[0], epsilon), classify(delta[1], epsilon), classify(delta[2], epsilon),
          epsilon, delta, atoms};
}

ShapeReport shape_classify(const ModelSpec& model, const CitationSample& sample, double epsilon) {
  return shape_classify([&model](Count x) { return model.cdf(x); }, sample, epsilon);
}

}  // namespace citefit
