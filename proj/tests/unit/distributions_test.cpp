#include <gsl/gsl_cdf.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_zeta.h>
#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <thread>

#include "citefit/distributions.hpp"
#include "citefit/errors.hpp"
#include "citefit/experiments.hpp"
#include "citefit/parallel.hpp"

namespace citefit {
namespace {

// Frozen from a 30-digit mpmath evaluation of the defining formulas.
constexpr double kLn01Pmf1 = 0.54680284945048456;
constexpr double kLn01Pmf5 = 0.029316395843267386;
constexpr double kHook21Pmf1 = 0.38763652418260761;
constexpr double kHook21Cdf2 = 0.55991942381932210;

std::vector<ModelSpec> fixture_models() {
  std::vector<ModelSpec> models;
  for (const auto& s : subject_fixtures()) {
    models.push_back(s.lognormal());
    models.push_back(s.hooked());
  }
  return models;
}

TEST(DiscretisedLognormal, PmfAtOneMatchesNormalCdfOracle) {
  const auto m = ModelSpec::lognormal(0.0, 1.0);
  EXPECT_NEAR(pmf(m, 1), kLn01Pmf1, 1e-14);
  EXPECT_NEAR(pmf(m, 5), kLn01Pmf5, 1e-15);
  // Same quantity from GSL's normal CDF.
  const double gsl = (gsl_cdf_ugaussian_P(std::log(1.5)) - gsl_cdf_ugaussian_P(std::log(0.5))) /
                     gsl_cdf_ugaussian_Q(std::log(0.5));
  EXPECT_NEAR(pmf(m, 1), gsl, 1e-13);
}

TEST(DiscretisedLognormal, PmfTimesNormalizerIsNormalCdfDifference) {
  for (const auto& [mu, sigma] : {std::pair{0.0, 1.0}, {2.08, 1.11}, {-0.38, 1.73}, {2.81, 1.05}}) {
    const DiscretisedLognormal d(mu, sigma);
    for (Count x : {1, 2, 3, 7, 20, 150, 1000, 20000}) {
      const double upper = (std::log(x + 0.5) - mu) / sigma;
      const double lower = (std::log(x - 0.5) - mu) / sigma;
      const double oracle = lower > 0 ? gsl_cdf_ugaussian_Q(lower) - gsl_cdf_ugaussian_Q(upper)
                                      : gsl_cdf_ugaussian_P(upper) - gsl_cdf_ugaussian_P(lower);
      EXPECT_NEAR(d.pmf(x) * d.normalizer(), oracle, 1e-12) << mu << " " << sigma << " x=" << x;
      EXPECT_NEAR(d.interval_mass(x), oracle, 1e-12);
    }
  }
}

TEST(DiscretisedLognormal, FarTailIsNearlyAllMass) {
  const auto m = ModelSpec::lognormal(0.0, 1.0);
  EXPECT_GE(cdf(m, 1'000'000), 1.0 - 1e-6);
  EXPECT_LT(m.survival(1'000'000), 1e-30);
  EXPECT_GT(pmf(m, 1'000'000), 0.0);
}

TEST(DiscretisedLognormal, RejectsInvalidParameters) {
  EXPECT_THROW(ModelSpec::lognormal(0.0, 0.0), ParameterError);
  EXPECT_THROW(ModelSpec::lognormal(0.0, -1.0), ParameterError);
  EXPECT_THROW(ModelSpec::lognormal(std::nan(""), 1.0), ParameterError);
  EXPECT_THROW(ModelSpec::lognormal(INFINITY, 1.0), ParameterError);
}

TEST(HookedPowerLaw, PmfRatioNeedsNoNormalizer) {
  const auto m = ModelSpec::hooked(2.0, 1.0);
  EXPECT_NEAR(pmf(m, 1) / pmf(m, 3), 4.0, 1e-14);
  for (const auto& s : subject_fixtures()) {
    const HookedPowerLaw h(s.hook_alpha, s.hook_b);
    for (const auto& [x1, x2] : {std::pair<Count, Count>{1, 2}, {3, 50}, {10, 999}, {5, 5000}}) {
      const double expected = std::pow((s.hook_b + x2) / (s.hook_b + x1), s.hook_alpha);
      EXPECT_NEAR(h.pmf(x1) / h.pmf(x2) / expected, 1.0, 1e-10) << s.name;
    }
  }
}

TEST(HookedPowerLaw, ClosedFormNormalizerAtAlphaTwo) {
  const auto m = ModelSpec::hooked(2.0, 1.0);
  EXPECT_NEAR(pmf(m, 1), kHook21Pmf1, 1e-14);
  EXPECT_NEAR(cdf(m, 2), kHook21Cdf2, 1e-14);
  EXPECT_NEAR(HookedPowerLaw::normalizer_for(2.0, 1.0), M_PI * M_PI / 6.0 - 1.0, 1e-14);
}

TEST(HookedPowerLaw, NormalizerMatchesHurwitzZeta) {
  // sum_{x>=1} (b+x)^-alpha = zeta(alpha, b+1)
  gsl_set_error_handler_off();
  std::vector<std::pair<double, double>> params{{1.05, 0.3}, {1.5, 10.0}, {2.0, 1.0}, {3.0, 1e4},
                                                {40.0, 2.0}, {2.0001, 1e6}};
  for (const auto& s : subject_fixtures()) params.emplace_back(s.hook_alpha, s.hook_b);
  for (const auto& [a, b] : params) {
    gsl_sf_result zeta;
    ASSERT_EQ(gsl_sf_hzeta_e(a, b + 1.0, &zeta), GSL_SUCCESS);
    EXPECT_NEAR(HookedPowerLaw::normalizer_for(a, b) / zeta.val, 1.0, 1e-10)
        << "alpha=" << a << " b=" << b;
    EXPECT_NEAR(HookedPowerLaw::log_normalizer_for(a, b), std::log(zeta.val), 1e-10);
  }
}

TEST(HookedPowerLaw, TailSumMatchesZetaDifference) {
  gsl_set_error_handler_off();
  for (const auto& [a, b] : {std::pair{2.06, 7.1}, {3.94, 67.9}, {1.2, 0.5}}) {
    const double tail = HookedPowerLaw::tail_sum(a, b, 1000);
    const double oracle = gsl_sf_hzeta(a, b + 1001.0);
    EXPECT_NEAR(tail / oracle, 1.0, 1e-11) << a << " " << b;
  }
}

TEST(HookedPowerLaw, RejectsInvalidParameters) {
  EXPECT_THROW(ModelSpec::hooked(1.0, 5.0), ParameterError);
  EXPECT_THROW(ModelSpec::hooked(0.5, 5.0), ParameterError);
  EXPECT_THROW(ModelSpec::hooked(2.0, 0.0), ParameterError);
  EXPECT_THROW(ModelSpec::hooked(2.0, -1.0), ParameterError);
}

TEST(Normalization, FixtureParameterSetsSumToOne) {
  for (const auto& m : fixture_models()) {
    double total = 0.0;
    for (Count x = 1; x <= 1000; ++x) total += m.pmf(x);
    total += m.survival(1000);
    EXPECT_GE(total, 1.0 - 1e-9) << m.describe();
    EXPECT_LE(total, 1.0 + 1e-9) << m.describe();
  }
}

TEST(Cdf, MonotoneAndConsistentWithPmf) {
  for (const auto& m : {ModelSpec::lognormal(2.08, 1.11), ModelSpec::hooked(2.0, 1.0),
                        ModelSpec::hooked(14.74, 329.5), ModelSpec::lognormal(-0.38, 1.73)}) {
    double running = 0.0;
    double previous = 0.0;
    for (Count x = 1; x <= 10'000; ++x) {
      running += m.pmf(x);
      const double c = m.cdf(x);
      ASSERT_GE(c, previous) << m.describe() << " x=" << x;
      ASSERT_NEAR(c, running, 1e-12) << m.describe() << " x=" << x;
      ASSERT_NEAR(c + m.survival(x), 1.0, 1e-14);
      previous = c;
    }
  }
}

TEST(Domain, RejectsNonPositiveAtoms) {
  const auto m = ModelSpec::lognormal(0.0, 1.0);
  EXPECT_THROW(pmf(m, 0), DomainError);
  EXPECT_THROW(cdf(m, -3), DomainError);
  EXPECT_THROW(ModelSpec::hooked(2.0, 1.0).log_pmf(0), DomainError);
}

TEST(Quantile, Examples) {
  const auto h = ModelSpec::hooked(2.0, 1.0);
  EXPECT_EQ(quantile(h, 0.0), 1);
  EXPECT_EQ(quantile(ModelSpec::lognormal(3.0, 2.0), 0.0), 1);
  EXPECT_EQ(quantile(h, 0.3), 1);
  EXPECT_EQ(quantile(h, 0.5), 2);
  EXPECT_EQ(quantile(h, kHook21Pmf1), 1);
  EXPECT_THROW(quantile(h, 1.0), DomainError);
  EXPECT_THROW(quantile(h, -0.1), DomainError);
  EXPECT_THROW(quantile(h, std::nan("")), DomainError);
}

TEST(Quantile, AdjointToCdf) {
  for (const auto& m : fixture_models()) {
    for (Count x : {1, 2, 5, 30, 400, 5000}) {
      EXPECT_LE(m.quantile(m.cdf(x) * (1 - 1e-15)), x) << m.describe();
    }
    for (double u : {0.0, 1e-9, 0.1, 0.5, 0.9, 0.999, 0.999999}) {
      const Count x = m.quantile(u);
      EXPECT_GE(m.cdf(x), u) << m.describe() << " u=" << u;
      if (x > 1) {
        EXPECT_LT(m.cdf(x - 1), u) << m.describe() << " u=" << u;
      }
    }
  }
}

TEST(Quantile, FarTailBeyondCachedTable) {
  // The 1 - 1e-12 quantile lies far beyond the 2^20-entry cached table.
  const auto m = ModelSpec::hooked(2.5, 2.0);
  const double u = 1.0 - 1e-12;
  const Count x = m.quantile(u);
  EXPECT_GT(x, 1 << 21);
  // cdf cannot resolve neighbouring atoms this close to 1; survival can.
  EXPECT_LE(m.survival(x), 1.0 - u);
  EXPECT_GT(m.survival(x - 1), 1.0 - u);
}

TEST(Quantile, SaturatesWhenUnrepresentable) {
  // Survival decays like x^-0.3, so this quantile is near 1e40.
  EXPECT_EQ(ModelSpec::hooked(1.3, 2.0).quantile(1.0 - 1e-12), ModelSpec::kMaxQuantile);
}

TEST(Sample, EmptyAndDeterministic) {
  const auto m = ModelSpec::hooked(3.94, 67.9);
  EXPECT_TRUE(sample(m, 0, 1).empty());
  const auto a = sample(m, 5000, 42);
  const auto b = sample(m, 5000, 42);
  EXPECT_EQ(a.counts, b.counts);
  EXPECT_NE(a.counts, sample(m, 5000, 43).counts);
  for (Count c : a.counts) ASSERT_GE(c, 1);
}

TEST(Sample, FrequencyOfOneMatchesPmf) {
  const auto m = ModelSpec::hooked(2.0, 1.0);
  const auto s = sample(m, 100'000, 7);
  const double ones = static_cast<double>(std::count(s.counts.begin(), s.counts.end(), 1));
  EXPECT_NEAR(ones / 1e5, kHook21Pmf1, 0.005);
}

TEST(Sample, CellCountsAgreeWithPmf) {
  const std::size_t n = 100'000;
  for (const auto& m : {ModelSpec::lognormal(2.08, 1.11), ModelSpec::hooked(3.94, 67.9),
                        ModelSpec::lognormal(-0.38, 1.73)}) {
    const auto s = sample(m, n, 2024);
    std::map<Count, double> observed;
    for (Count c : s.counts) observed[c] += 1.0;
    for (Count x = 1; x <= 20; ++x) {
      const double expected = static_cast<double>(n) * m.pmf(x);
      EXPECT_LE(std::abs(observed[x] - expected), 4.0 * std::sqrt(expected))
          << m.describe() << " x=" << x;
    }
  }
}

TEST(Sample, ConcurrentSamplingMatchesSerial) {
  const auto m = ModelSpec::hooked(1.6, 3.0);
  std::vector<std::vector<Count>> parallel(8);
  parallel_for(8, [&](std::size_t i) { parallel[i] = sample(m, 20'000, i).counts; }, 4);
  // Fresh model: its quantile table is grown independently.
  const auto fresh = ModelSpec::hooked(1.6, 3.0);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(parallel[i], sample(fresh, 20'000, i).counts);
}

TEST(Moments, ClosedForms) {
  const auto food_ln = continuous_moments(ModelSpec::lognormal(2.54, 1.26));
  EXPECT_NEAR(food_ln.mean, 28.044709372284264, 1e-10);
  const double s2 = 1.26 * 1.26;
  EXPECT_NEAR(*food_ln.sd, std::sqrt((std::exp(s2) - 1) * std::exp(2 * 2.54 + s2)), 1e-9);

  const auto food_hook = continuous_moments(ModelSpec::hooked(5.76, 89.8));
  EXPECT_NEAR(food_hook.mean, 18.865546218487395, 1e-12);
  // Lomax: sd^2 = b^2 alpha / ((alpha-1)^2 (alpha-2))
  EXPECT_NEAR(*food_hook.sd, 89.8 * std::sqrt(5.76 / (4.76 * 4.76 * 3.76)), 1e-10);
}

TEST(Moments, HookedSdUndefinedForAlphaAtMostTwo) {
  const auto m = ModelSpec::hooked(1.5, 10.0);
  EXPECT_FALSE(continuous_moments(m).sd.has_value());
  EXPECT_THROW(continuous_sd(m), MomentUndefined);
  EXPECT_THROW(continuous_sd(ModelSpec::hooked(2.0, 10.0)), MomentUndefined);
  EXPECT_NO_THROW(continuous_sd(ModelSpec::hooked(2.01, 10.0)));
}

TEST(Family, ParsesNamesAndDescribes) {
  EXPECT_EQ(parse_family("lognormal"), Family::DiscretisedLognormal);
  EXPECT_EQ(parse_family("hook"), Family::HookedPowerLaw);
  EXPECT_THROW(parse_family("pareto"), ParameterError);
  const auto m = ModelSpec::hooked(3.94, 67.9);
  EXPECT_EQ(m.family(), Family::HookedPowerLaw);
  EXPECT_EQ(m.parameters()[0], 3.94);
  EXPECT_NE(m.as_hooked(), nullptr);
  EXPECT_EQ(m.as_lognormal(), nullptr);
}

}  // namespace
}  // namespace citefit
