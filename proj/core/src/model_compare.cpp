#include "citefit/model_compare.hpp"

#include <cmath>
#include <vector>

#include "citefit/errors.hpp"
#include "citefit/normal.hpp"

namespace citefit {
namespace {

Favored decide(double z, double critical) {
  if (z > critical) return Favored::ModelA;
  if (z < -critical) return Favored::ModelB;
  return Favored::Neither;
}

// Weighted form: differences d[i] each occurring weight[i] times.
VuongResult vuong_weighted(std::span<const double> d, std::span<const std::size_t> weight,
                           double critical) {
  std::size_t n = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    n += weight[i];
    sum += static_cast<double>(weight[i]) * d[i];
  }
  if (n < 2) throw EmptySample("Vuong test needs at least two observations");
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double dev = d[i] - mean;
    ss += static_cast<double>(weight[i]) * dev * dev;
  }
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0.0) || !std::isfinite(sd)) throw IdenticalModels();

  const double z = mean * std::sqrt(static_cast<double>(n)) / sd;
  return {z, 2.0 * normal_sf(std::abs(z)), decide(z, critical), n};
}

}  // namespace

VuongResult vuong_from_differences(std::span<const double> differences, double critical) {
  const std::vector<std::size_t> ones(differences.size(), 1);
  return vuong_weighted(differences, ones, critical);
}

VuongResult vuong(const ModelSpec& model_a, const ModelSpec& model_b,
                  const CitationSample& sample, double critical) {
  require_fittable(sample);
  return vuong(model_a, model_b, CountTable::from(sample), critical);
}

VuongResult vuong(const ModelSpec& model_a, const ModelSpec& model_b, const CountTable& table,
                  double critical) {
  std::vector<double> d(table.distinct());
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = model_a.log_pmf(table.values[i]) - model_b.log_pmf(table.values[i]);
  }
  return vuong_weighted(d, table.multiplicity, critical);
}

SignificanceTally tally_significance(std::span<const VuongResult> results) {
  SignificanceTally tally;
  for (const auto& r : results) {
    switch (r.favored) {
      case Favored::ModelA:
        ++tally.a_wins;
        break;
      case Favored::ModelB:
        ++tally.b_wins;
        break;
      case Favored::Neither:
        ++tally.neither;
        break;
    }
  }
  return tally;
}

}  // namespace citefit
