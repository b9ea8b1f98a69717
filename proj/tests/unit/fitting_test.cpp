#include <gtest/gtest.h>

#include <cmath>

#include "citefit/errors.hpp"
#include "citefit/fitting.hpp"
#include "citefit/random.hpp"
#include "test_support.hpp"

namespace citefit {
namespace {

using testing::make_sample;

TEST(Fit, AllEqualCountsAreDegenerate) {
  const auto s = make_sample({5, 5, 5, 5});
  for (const Family f : {Family::DiscretisedLognormal, Family::HookedPowerLaw}) {
    const auto r = fit(f, s);
    EXPECT_EQ(r.status, FitStatus::Degenerate);
    EXPECT_FALSE(r.model.has_value());
    EXPECT_FALSE(r.converged());
  }
}

TEST(Fit, RejectsInvalidSamples) {
  EXPECT_THROW(fit(Family::DiscretisedLognormal, CitationSample{}), EmptySample);
  EXPECT_THROW(fit(Family::HookedPowerLaw, make_sample({0, 3, 4})), DomainError);
}

TEST(Fit, LognormalRoundTrip) {
  const auto truth = ModelSpec::lognormal(2.08, 1.11);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto r = fit(Family::DiscretisedLognormal, sample(truth, 10'000, derive_seed(99, seed)));
    ASSERT_TRUE(r.converged()) << r.message;
    EXPECT_NEAR(r.model->as_lognormal()->mu(), 2.08, 0.05);
    EXPECT_NEAR(r.model->as_lognormal()->sigma(), 1.11, 0.04);
  }
}

TEST(Fit, HookedLikelihoodDominatesTruth) {
  const auto truth = ModelSpec::hooked(5.07, 41.9);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto s = sample(truth, 10'000, derive_seed(7, seed));
    const auto r = fit(Family::HookedPowerLaw, s);
    ASSERT_TRUE(r.model.has_value());
    EXPECT_EQ(r.status, FitStatus::Converged) << r.message;
    EXPECT_GE(r.log_likelihood, log_likelihood(truth, s) - 1e-6 * 10'000);
  }
}

TEST(Fit, LognormalLikelihoodDominatesTruth) {
  const auto truth = ModelSpec::lognormal(-0.38, 1.73);
  const auto s = sample(truth, 4848, 3);
  const auto r = fit(Family::DiscretisedLognormal, s);
  ASSERT_TRUE(r.converged());
  EXPECT_GE(r.log_likelihood, log_likelihood(truth, s) - 1e-6 * 4848);
}

// Dense grid over a box around the fit; the search must not be beaten by
// more than the tolerance.
double grid_best(Family family, const CitationSample& s, const ModelSpec& center) {
  const auto table = CountTable::from(s);
  const auto [p, q] = center.parameters();
  double best = -INFINITY;
  const int steps = 60;
  for (int i = -steps; i <= steps; ++i) {
    for (int j = -steps; j <= steps; ++j) {
      try {
        double a;
        double b;
        if (family == Family::DiscretisedLognormal) {
          a = p + 0.2 * i / steps;
          b = q * std::exp(0.2 * j / steps);
          best = std::max(best, log_likelihood(ModelSpec::lognormal(a, b), table));
        } else {
          a = 1.0 + (p - 1.0) * std::exp(0.3 * i / steps);
          b = q * std::exp(0.3 * j / steps);
          best = std::max(best, log_likelihood(ModelSpec::hooked(a, b), table));
        }
      } catch (const ParameterError&) {
      }
    }
  }
  return best;
}

TEST(Fit, AgreesWithGridOracle) {
  const std::vector<std::pair<Family, ModelSpec>> cases{
      {Family::DiscretisedLognormal, ModelSpec::lognormal(2.08, 1.11)},
      {Family::DiscretisedLognormal, ModelSpec::lognormal(1.22, 1.53)},
      {Family::HookedPowerLaw, ModelSpec::hooked(3.5, 23.8)},
      {Family::HookedPowerLaw, ModelSpec::hooked(2.26, 1.3)},
  };
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto& [family, truth] = cases[k];
    const auto s = sample(truth, 2000, 500 + k);
    const auto r = fit(family, s);
    ASSERT_TRUE(r.converged()) << r.message;
    EXPECT_GE(r.log_likelihood, grid_best(family, s, *r.model) - 1e-3) << truth.describe();
  }
}

TEST(Fit, LocationShiftSeparatesMu) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto low = fit(Family::DiscretisedLognormal,
                         sample(ModelSpec::lognormal(1.5, 1.2), 5000, derive_seed(1, seed)));
    const auto high = fit(Family::DiscretisedLognormal,
                          sample(ModelSpec::lognormal(2.5, 1.2), 5000, derive_seed(2, seed)));
    const auto* a = low.model->as_lognormal();
    const auto* b = high.model->as_lognormal();
    EXPECT_GT(b->mu(), a->mu() + 0.8);
    EXPECT_NEAR(b->sigma(), a->sigma(), 0.05);
  }
}

TEST(Fit, Deterministic) {
  const auto s = sample(ModelSpec::hooked(3.0, 20.0), 3000, 11);
  const auto a = fit(Family::HookedPowerLaw, s);
  const auto b = fit(Family::HookedPowerLaw, s);
  EXPECT_EQ(a.log_likelihood, b.log_likelihood);
  EXPECT_EQ(a.model->parameters(), b.model->parameters());
  EXPECT_EQ(a.evaluations, b.evaluations);
}

TEST(Fit, RidgeGuardReportsNonConverged) {
  // Lognormal-like data with a tight cap on B: the hooked search runs into
  // the guard and keeps the best point seen.
  const auto s = sample(ModelSpec::lognormal(2.81, 0.6), 5000, 5);
  FitConfig config;
  config.max_hook_b = 50.0;
  const auto r = fit(Family::HookedPowerLaw, s, config);
  EXPECT_EQ(r.status, FitStatus::NonConverged);
  ASSERT_TRUE(r.model.has_value());
  EXPECT_TRUE(std::isfinite(r.log_likelihood));
  EXPECT_NE(r.message.find("ridge"), std::string::npos);
}

TEST(Fit, ExhaustedBudgetReportsNonConverged) {
  FitConfig config;
  config.max_evaluations = 8;
  const auto r = fit(Family::DiscretisedLognormal, sample(ModelSpec::lognormal(2, 1), 500, 1), config);
  EXPECT_EQ(r.status, FitStatus::NonConverged);
  EXPECT_TRUE(r.model.has_value());
}

TEST(LogLikelihood, Examples) {
  const auto h = ModelSpec::hooked(2.0, 1.0);
  EXPECT_NEAR(log_likelihood(h, make_sample({1})), -0.94768717176777319, 1e-13);
  EXPECT_NEAR(log_likelihood(h, make_sample({1, 2})), -2.7063045597518751, 1e-13);
  EXPECT_THROW(log_likelihood(h, CitationSample{}), EmptySample);
}

TEST(LogLikelihood, AdditiveOverConcatenation) {
  const auto m = ModelSpec::lognormal(2.0, 1.3);
  const auto a = sample(m, 300, 1);
  const auto b = sample(m, 200, 2);
  CitationSample joined = a;
  joined.counts.insert(joined.counts.end(), b.counts.begin(), b.counts.end());
  EXPECT_NEAR(log_likelihood(m, joined), log_likelihood(m, a) + log_likelihood(m, b), 1e-9);
}

TEST(LogLikelihood, TableAndSampleAgree) {
  const auto m = ModelSpec::hooked(3.0, 10.0);
  const auto s = sample(m, 1000, 3);
  double direct = 0.0;
  for (Count c : s.counts) direct += std::log(m.pmf(c));
  EXPECT_NEAR(log_likelihood(m, s), direct, 1e-9);
}

}  // namespace
}  // namespace citefit
