#include "citefit/fitting.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "citefit/errors.hpp"
#include "citefit/nelder_mead.hpp"
#include "citefit/normal.hpp"

namespace citefit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Negative log-likelihood of the discretised lognormal. Adjacent atoms share
// their interval boundary, so each distinct value costs one log and one erfc.
double lognormal_nll(const CountTable& table, double mu, double sigma) {
  if (!std::isfinite(mu) || !std::isfinite(sigma) || !(sigma > 0.0)) return kInf;
  auto z = [&](double t) { return (std::log(t) - mu) / sigma; };
  const double lower = z(0.5);
  const double normalizer = normal_sf(lower);
  if (!(normalizer > 0.0)) return kInf;

  double ll = 0.0;
  Count previous = 0;
  double previous_upper = lower;
  for (std::size_t i = 0; i < table.values.size(); ++i) {
    const Count v = table.values[i];
    const double a = v == previous + 1 ? previous_upper : z(static_cast<double>(v) - 0.5);
    const double b = z(static_cast<double>(v) + 0.5);
    const double mass = normal_interval(a, b);
    if (!(mass > 0.0)) return kInf;
    ll += static_cast<double>(table.multiplicity[i]) * std::log(mass);
    previous = v;
    previous_upper = b;
  }
  ll -= static_cast<double>(table.total) * std::log(normalizer);
  return -ll;
}

double hooked_nll(const CountTable& table, double alpha, double b) {
  if (!std::isfinite(alpha) || !std::isfinite(b) || !(alpha > 1.0) || !(b > 0.0)) return kInf;
  double ll = 0.0;
  for (std::size_t i = 0; i < table.values.size(); ++i) {
    ll -= static_cast<double>(table.multiplicity[i]) * alpha *
          std::log(b + static_cast<double>(table.values[i]));
  }
  ll -= static_cast<double>(table.total) * HookedPowerLaw::log_normalizer_for(alpha, b);
  return std::isfinite(ll) ? -ll : kInf;
}

struct LogMoments {
  double mean;
  double sd;
};

LogMoments log_moments(const CountTable& table) {
  double sum = 0.0;
  for (std::size_t i = 0; i < table.values.size(); ++i) {
    sum += static_cast<double>(table.multiplicity[i]) * std::log(static_cast<double>(table.values[i]));
  }
  const double mean = sum / static_cast<double>(table.total);
  double ss = 0.0;
  for (std::size_t i = 0; i < table.values.size(); ++i) {
    const double d = std::log(static_cast<double>(table.values[i])) - mean;
    ss += static_cast<double>(table.multiplicity[i]) * d * d;
  }
  return {mean, std::sqrt(ss / static_cast<double>(table.total))};
}

double count_mean(const CountTable& table) {
  double sum = 0.0;
  for (std::size_t i = 0; i < table.values.size(); ++i) {
    sum += static_cast<double>(table.multiplicity[i]) * static_cast<double>(table.values[i]);
  }
  return sum / static_cast<double>(table.total);
}

void require_valid(const CountTable& table) {
  if (table.empty()) throw EmptySample();
  if (table.values.front() < 1) {
    throw DomainError("counts must be >= 1 after the offset, got " +
                      std::to_string(table.values.front()));
  }
}

SimplexOptions simplex_options(const FitConfig& config) {
  SimplexOptions options;
  options.ftol_rel = config.ftol_rel;
  options.xtol = config.xtol;
  options.max_evaluations = config.max_evaluations;
  return options;
}

FitResult finish(Family family, const CountTable& table, const SimplexResult& search,
                 ModelSpec (*make)(std::span<const double>), const FitConfig& config) {
  FitResult result{family, std::nullopt, std::numeric_limits<double>::quiet_NaN(),
                   FitStatus::NonConverged, search.evaluations, {}};
  try {
    result.model = make(search.x);
  } catch (const ParameterError& e) {
    result.message = std::string("no valid model reached: ") + e.what();
    return result;
  }
  result.log_likelihood = log_likelihood(*result.model, table);

  switch (search.stop) {
    case SimplexStop::Converged:
      result.status = std::isfinite(result.log_likelihood) ? FitStatus::Converged
                                                           : FitStatus::NonConverged;
      result.message = result.converged() ? "converged" : "non-finite log-likelihood";
      break;
    case SimplexStop::Aborted:
      result.message = "ridge guard: B exceeded " + std::to_string(config.max_hook_b);
      break;
    case SimplexStop::BudgetExhausted:
      result.message = "evaluation budget of " + std::to_string(config.max_evaluations) +
                       " exhausted";
      break;
  }
  return result;
}

FitResult degenerate(Family family, const CountTable& table) {
  return {family, std::nullopt, std::numeric_limits<double>::quiet_NaN(), FitStatus::Degenerate,
          0, "all counts equal (" + std::to_string(table.values.front()) + "); likelihood unbounded"};
}

FitResult fit_lognormal(const CountTable& table, const FitConfig& config) {
  if (table.distinct() == 1) return degenerate(Family::DiscretisedLognormal, table);
  const auto start = log_moments(table);
  auto objective = [&table](std::span<const double> p) {
    return lognormal_nll(table, p[0], std::exp(p[1]));
  };
  const auto search = nelder_mead(objective, {start.mean, std::log(start.sd)}, {0.2, 0.2},
                                  simplex_options(config));
  return finish(Family::DiscretisedLognormal, table, search,
                [](std::span<const double> p) { return ModelSpec::lognormal(p[0], std::exp(p[1])); },
                config);
}

FitResult fit_hooked(const CountTable& table, const FitConfig& config) {
  if (table.distinct() == 1) return degenerate(Family::HookedPowerLaw, table);
  auto objective = [&table](std::span<const double> p) {
    return hooked_nll(table, 1.0 + std::exp(p[0]), std::exp(p[1]));
  };
  const double log_cap = std::log(config.max_hook_b);
  auto on_ridge = [log_cap](std::span<const double> p) { return p[1] > log_cap; };
  const auto search = nelder_mead(objective, {std::log(2.0), std::log(count_mean(table))},
                                  {0.5, 0.5}, simplex_options(config), on_ridge);
  return finish(Family::HookedPowerLaw, table, search,
                [](std::span<const double> p) {
                  return ModelSpec::hooked(1.0 + std::exp(p[0]), std::exp(p[1]));
                },
                config);
}

}  // namespace

std::string_view to_string(FitStatus status) noexcept {
  switch (status) {
    case FitStatus::Converged:
      return "Converged";
    case FitStatus::NonConverged:
      return "NonConverged";
    case FitStatus::Degenerate:
      return "Degenerate";
  }
  return "unknown";
}

FitResult fit(Family family, const CountTable& table, const FitConfig& config) {
  require_valid(table);
  return family == Family::DiscretisedLognormal ? fit_lognormal(table, config)
                                                : fit_hooked(table, config);
}

FitResult fit(Family family, const CitationSample& sample, const FitConfig& config) {
  require_fittable(sample);
  return fit(family, CountTable::from(sample), config);
}

double log_likelihood(const ModelSpec& model, const CountTable& table) {
  if (table.empty()) throw EmptySample();
  double ll = 0.0;
  for (std::size_t i = 0; i < table.values.size(); ++i) {
    ll += static_cast<double>(table.multiplicity[i]) * model.log_pmf(table.values[i]);
  }
  return ll;
}

double log_likelihood(const ModelSpec& model, const CitationSample& sample) {
  return log_likelihood(model, CountTable::from(sample));
}

}  // namespace citefit
