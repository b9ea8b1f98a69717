#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "citefit/errors.hpp"
#include "citefit/goodness_of_fit.hpp"
#include "citefit/random.hpp"
#include "test_support.hpp"

namespace citefit {
namespace {

using testing::make_sample;
using testing::repeat;

constexpr double kHook21Cdf1 = 0.38763652418260761;
constexpr double kHook21Cdf2 = 0.55991942381932210;

// Brute-force oracle: every atom from 1 to max.
double ks_brute(const ModelSpec& m, const CitationSample& s) {
  const Count top = *std::max_element(s.counts.begin(), s.counts.end());
  double d = 0.0;
  for (Count x = 1; x <= top; ++x) {
    const double fn = static_cast<double>(std::count_if(s.counts.begin(), s.counts.end(),
                                                        [x](Count c) { return c <= x; })) /
                      static_cast<double>(s.size());
    d = std::max(d, std::abs(m.cdf(x) - fn));
  }
  return d;
}

TEST(KsStatistic, TwoPointHookedOracle) {
  const auto d = ks_statistic(ModelSpec::hooked(2.0, 1.0), make_sample({1, 2}));
  EXPECT_NEAR(d, 1.0 - kHook21Cdf2, 1e-14);
  EXPECT_NEAR(d, 0.4401, 1e-4);
}

TEST(KsStatistic, ZeroForMatchingCdf) {
  const CdfFunction all_at_one = [](Count) { return 1.0; };
  EXPECT_EQ(ks_statistic(all_at_one, make_sample({1, 1, 1})), 0.0);
}

TEST(KsStatistic, InvariantUnderDuplication) {
  const auto m = ModelSpec::lognormal(2.0, 1.2);
  const auto s = sample(m, 700, 3);
  const double d = ks_statistic(m, s);
  for (std::size_t k : {2, 3, 7}) EXPECT_DOUBLE_EQ(ks_statistic(m, repeat(s, k)), d);
}

TEST(KsStatistic, MatchesBruteForceAndStaysInUnitInterval) {
  for (const auto& m : {ModelSpec::lognormal(2.08, 1.11), ModelSpec::hooked(2.26, 1.3),
                        ModelSpec::hooked(14.74, 329.5)}) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const auto s = sample(m, 60 + 40 * seed, seed);
      const double d = ks_statistic(m, s);
      EXPECT_NEAR(d, ks_brute(m, s), 1e-15);
      EXPECT_GE(d, 0.0);
      EXPECT_LE(d, 1.0);
    }
    // A sample far from the model.
    const auto off = make_sample({1, 500, 500, 900});
    EXPECT_NEAR(ks_statistic(m, off), ks_brute(m, off), 1e-15);
  }
}

TEST(KsStatistic, RejectsEmptySample) {
  EXPECT_THROW(ks_statistic(ModelSpec::hooked(2, 1), CitationSample{}), EmptySample);
}

TEST(PValue, Formula) {
  EXPECT_DOUBLE_EQ(monte_carlo_p_value(49, 999), 0.05);
  EXPECT_DOUBLE_EQ(monte_carlo_p_value(0, 999), 0.001);
  EXPECT_DOUBLE_EQ(monte_carlo_p_value(999, 999), 1.0);
}

TEST(PValue, RangeAndExceedanceIdentity) {
  const auto m = ModelSpec::lognormal(2.0, 1.0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto r = ks_p_value(m, sample(m, 300, seed), 99, seed);
    EXPECT_GT(r.p_value, 0.0);
    EXPECT_LE(r.p_value, 1.0);
    EXPECT_DOUBLE_EQ(r.p_value, (r.exceedances + 1.0) / (r.n_sim + 1.0));
    EXPECT_EQ(r.refit_mode, RefitMode::FixedParams);
  }
}

TEST(PValue, ReproducibleAndWorkerIndependent) {
  const auto s = sample(ModelSpec::hooked(3.5, 23.8), 697, 1);
  GofConfig config;
  config.n_sim = 150;
  config.seed = 77;
  config.workers = 1;
  const auto a = ks_p_value(Family::HookedPowerLaw, s, config);
  config.workers = 4;
  const auto b = ks_p_value(Family::HookedPowerLaw, s, config);
  EXPECT_EQ(a.ks_stat, b.ks_stat);
  EXPECT_EQ(a.p_value, b.p_value);
  EXPECT_EQ(a.exceedances, b.exceedances);

  config.refit = RefitMode::Refit;
  config.n_sim = 60;
  const auto c = ks_p_value(Family::HookedPowerLaw, s, config);
  config.workers = 1;
  const auto d = ks_p_value(Family::HookedPowerLaw, s, config);
  EXPECT_EQ(c.p_value, d.p_value);
  EXPECT_EQ(c.refit_mode, RefitMode::Refit);
  EXPECT_EQ(c.n_sim + c.failed_sims, 60U);
}

TEST(PValue, SelfSimulatedDataIsPlausible) {
  const auto truth = ModelSpec::lognormal(2.08, 1.11);
  int plausible = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    GofConfig config;
    config.n_sim = 199;
    config.seed = derive_seed(1000, t);
    const auto r = ks_p_value(Family::DiscretisedLognormal, sample(truth, 1043, derive_seed(2000, t)),
                              config);
    ASSERT_TRUE(r.fit_converged);
    plausible += r.p_value > 0.05 ? 1 : 0;
  }
  EXPECT_GE(plausible, 90);
}

TEST(PValue, CalibratedAgainstTheGeneratingModel) {
  const auto truth = ModelSpec::lognormal(2.08, 1.11);
  int rejected = 0;
  for (std::uint64_t t = 0; t < 200; ++t) {
    const auto r = ks_p_value(truth, sample(truth, 1043, derive_seed(3000, t)), 199,
                              derive_seed(4000, t));
    rejected += r.p_value < 0.05 ? 1 : 0;
  }
  EXPECT_GE(rejected, 2);
  EXPECT_LE(rejected, 24);
}

TEST(PValue, RefitIsLessConservative) {
  // Fitted parameters pull the observed distance down; refitting each
  // simulation restores a comparable reference distribution.
  const auto truth = ModelSpec::lognormal(2.0, 1.2);
  double fixed_sum = 0.0;
  double refit_sum = 0.0;
  for (std::uint64_t t = 0; t < 20; ++t) {
    const auto s = sample(truth, 800, derive_seed(5, t));
    GofConfig config;
    config.n_sim = 99;
    config.seed = t;
    fixed_sum += ks_p_value(Family::DiscretisedLognormal, s, config).p_value;
    config.refit = RefitMode::Refit;
    refit_sum += ks_p_value(Family::DiscretisedLognormal, s, config).p_value;
  }
  EXPECT_LT(refit_sum, fixed_sum);
}

TEST(PValue, DegenerateDataCannotBeTested) {
  GofConfig config;
  config.n_sim = 10;
  EXPECT_THROW(ks_p_value(Family::DiscretisedLognormal, make_sample({3, 3, 3}), config), FitFailed);
}

TEST(Shape, MatchingCdfIsEqualEverywhere) {
  const auto s = make_sample({1, 1, 2, 3, 3, 3, 5});
  const auto table = CountTable::from(s);
  const CdfFunction empirical = [&](Count x) {
    std::size_t below = 0;
    for (std::size_t i = 0; i < table.values.size(); ++i) {
      if (table.values[i] <= x) below += table.multiplicity[i];
    }
    return static_cast<double>(below) / static_cast<double>(table.total);
  };
  const auto r = shape_classify(empirical, s, 0.01);
  EXPECT_EQ(r.bottom, ShapeSign::Equal);
  EXPECT_EQ(r.middle, ShapeSign::Equal);
  EXPECT_EQ(r.top, ShapeSign::Equal);
}

TEST(Shape, TwoPointHookedExample) {
  const auto r = shape_classify(ModelSpec::hooked(2.0, 1.0), make_sample({1, 2}), 0.01);
  EXPECT_EQ(r.bottom, ShapeSign::Plus);
  EXPECT_EQ(r.middle, ShapeSign::Plus);
  EXPECT_EQ(r.top, ShapeSign::Plus);
  EXPECT_NEAR(r.delta[0], 0.5 - kHook21Cdf1, 1e-14);
  EXPECT_NEAR(r.delta[2], 1.0 - kHook21Cdf2, 1e-14);
  EXPECT_EQ(r.atoms[0], 1);
  EXPECT_EQ(r.atoms[2], 2);
  EXPECT_EQ(symbol(ShapeSign::Plus), '+');
  EXPECT_EQ(symbol(ShapeSign::Equal), '=');
  EXPECT_EQ(symbol(ShapeSign::Minus), '-');
}

TEST(Shape, AtomsAreMedianAndNinetyNinthPercentile) {
  CitationSample s;
  for (Count c = 1; c <= 200; ++c) s.counts.push_back(c);
  const auto r = shape_classify(ModelSpec::lognormal(4.0, 1.0), s, 0.01);
  EXPECT_EQ(r.atoms[1], 100);
  EXPECT_EQ(r.atoms[2], 198);
}

TEST(Shape, NegativeWhenModelIsAboveData) {
  const auto r = shape_classify(ModelSpec::lognormal(0.0, 0.5), make_sample({10, 20, 30}), 0.01);
  EXPECT_EQ(r.bottom, ShapeSign::Minus);
  EXPECT_THROW(shape_classify(ModelSpec::lognormal(0, 1), make_sample({1}), 0.0), ParameterError);
  EXPECT_THROW(shape_classify(ModelSpec::lognormal(0, 1), CitationSample{}, 0.01), EmptySample);
}

TEST(Shape, SelfFitIsEqualAtAllThreePoints) {
  const auto truth = ModelSpec::lognormal(2.5, 1.2);
  int all_equal = 0;
  for (std::uint64_t t = 0; t < 100; ++t) {
    const auto s = sample(truth, 10'000, derive_seed(8, t));
    const auto f = fit(Family::DiscretisedLognormal, s);
    const auto r = shape_classify(*f.model, s, 0.01);
    all_equal += (r.bottom == ShapeSign::Equal && r.middle == ShapeSign::Equal &&
                  r.top == ShapeSign::Equal)
                     ? 1
                     : 0;
  }
  EXPECT_GE(all_equal, 95);
}

}  // namespace
}  // namespace citefit
