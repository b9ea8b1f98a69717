#include <benchmark/benchmark.h>

#include "citefit/experiments.hpp"
#include "citefit/random.hpp"

namespace {

using namespace citefit;

const ModelSpec kLognormal = ModelSpec::lognormal(2.08, 1.11);
const ModelSpec kHooked = ModelSpec::hooked(3.94, 67.9);

void BM_LognormalPmf(benchmark::State& state) {
  Count x = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kLognormal.pmf(x));
    x = x % 5000 + 1;
  }
}
BENCHMARK(BM_LognormalPmf);

void BM_HookedCdf(benchmark::State& state) {
  Count x = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kHooked.cdf(x));
    x = x % 5000 + 1;
  }
}
BENCHMARK(BM_HookedCdf);

// Normalizer recomputation dominates each likelihood evaluation during a fit.
void BM_HookedNormalizer(benchmark::State& state) {
  double b = 10.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(HookedPowerLaw::normalizer_for(3.0, b));
    b += 1e-3;
  }
}
BENCHMARK(BM_HookedNormalizer);

void BM_Sample(benchmark::State& state) {
  const auto& model = state.range(1) == 0 ? kLognormal : kHooked;
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample(model, static_cast<std::size_t>(state.range(0)), seed++));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Sample)->ArgsProduct({{1'000, 10'000}, {0, 1}});

void BM_Fit(benchmark::State& state) {
  const auto family = state.range(1) == 0 ? Family::DiscretisedLognormal : Family::HookedPowerLaw;
  const auto& truth = state.range(1) == 0 ? kLognormal : kHooked;
  const auto data = sample(truth, static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(fit(family, data));
}
BENCHMARK(BM_Fit)->ArgsProduct({{1'000, 10'000}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_KsStatistic(benchmark::State& state) {
  const auto data = sample(kLognormal, 10'000, 3);
  for (auto _ : state) benchmark::DoNotOptimize(ks_statistic(kLognormal, data));
}
BENCHMARK(BM_KsStatistic)->Unit(benchmark::kMicrosecond);

void BM_KsPValueRefit(benchmark::State& state) {
  const auto data = sample(kLognormal, 1'043, 5);
  GofConfig config;
  config.n_sim = 99;
  config.refit = RefitMode::Refit;
  config.seed = 11;
  config.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(ks_p_value(Family::DiscretisedLognormal, data, config));
}
BENCHMARK(BM_KsPValueRefit)->Unit(benchmark::kMillisecond);

void BM_VuongSimulationStudy(benchmark::State& state) {
  StudyOptions options;
  options.workers = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulation_study(kHooked, 9'994, 10, 21, options));
  }
}
BENCHMARK(BM_VuongSimulationStudy)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
