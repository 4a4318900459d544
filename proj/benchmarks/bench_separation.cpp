#include <benchmark/benchmark.h>

#include <vector>

#include "bdsep/chain.hpp"
#include "bdsep/distances.hpp"
#include "bdsep/families.hpp"
#include "bdsep/hitting.hpp"
#include "bdsep/spectral.hpp"

namespace {

std::vector<double> sample_times(const bdsep::Spectrum& spectrum, int count) {
  const auto mo = bdsep::moments(spectrum, bdsep::TimeMode::Continuous);
  std::vector<double> times(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    times[static_cast<std::size_t>(i)] = 3.0 * mo.mean * (i + 1) / count;
  }
  return times;
}

void BM_ContinuousTailGrid(benchmark::State& state) {
  const auto spectrum = bdsep::closed_form_spectrum(
      bdsep::SrwLazyEnds{static_cast<int>(state.range(0))});
  const auto times = sample_times(spectrum, 32);
  for (auto _ : state) {
    // Construction counts: the cached survival prefix is the expensive part.
    bdsep::HypoexponentialTail tail(spectrum);
    benchmark::DoNotOptimize(tail.tail_grid(times));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ContinuousTailGrid)
    ->RangeMultiplier(2)
    ->Range(64, 512)
    ->Complexity()
    ->Unit(benchmark::kMillisecond);

void BM_DiscreteTailSweep(benchmark::State& state) {
  const auto spectrum = bdsep::closed_form_spectrum(
      bdsep::BernoulliLaplace{4 * static_cast<int>(state.range(0)),
                              static_cast<int>(state.range(0))});
  const auto k_max = static_cast<std::int64_t>(
      8.0 * bdsep::moments(spectrum, bdsep::TimeMode::Discrete).mean);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bdsep::sep_discrete_grid(spectrum, k_max));
  }
}
BENCHMARK(BM_DiscreteTailSweep)->RangeMultiplier(2)->Range(32, 256);

void BM_EvolveContinuous(benchmark::State& state) {
  const auto chain =
      bdsep::build(bdsep::SrwLazyEnds{static_cast<int>(state.range(0))});
  const auto spectrum = bdsep::eigenvalues(chain);
  const auto times = sample_times(spectrum, 8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bdsep::evolve_continuous_grid(chain, times));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EvolveContinuous)
    ->RangeMultiplier(2)
    ->Range(32, 256)
    ->Complexity()
    ->Unit(benchmark::kMillisecond);

}  // namespace
