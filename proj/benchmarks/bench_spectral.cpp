#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "bdsep/chain.hpp"
#include "bdsep/families.hpp"
#include "bdsep/spectral.hpp"

namespace {

bdsep::BirthDeathChain random_chain(int m) {
  std::mt19937_64 rng(0xbe7c4 + static_cast<unsigned>(m));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> up(static_cast<std::size_t>(m));
  std::vector<double> down(static_cast<std::size_t>(m));
  std::vector<double> hold(static_cast<std::size_t>(m) + 1);
  for (int x = 0; x <= m; ++x) {
    const double a = x < m ? 0.05 + 0.45 * unit(rng) : 0.0;
    const double b = x > 0 ? 0.05 + 0.45 * unit(rng) : 0.0;
    if (x < m) up[static_cast<std::size_t>(x)] = a;
    if (x > 0) down[static_cast<std::size_t>(x - 1)] = b;
    hold[static_cast<std::size_t>(x)] = 1.0 - a - b;
  }
  return {std::move(up), std::move(down), std::move(hold)};
}

void BM_EigenvaluesSrw(benchmark::State& state) {
  const auto chain =
      bdsep::build(bdsep::SrwLazyEnds{static_cast<int>(state.range(0))});
  for (auto _ : state) {
    // A fresh copy defeats the per-chain spectrum cache.
    bdsep::BirthDeathChain scratch(chain.up_rates(), chain.down_rates(),
                                   chain.hold_rates());
    benchmark::DoNotOptimize(bdsep::eigenvalues(scratch));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EigenvaluesSrw)->RangeMultiplier(2)->Range(64, 1024)->Complexity();

void BM_EigenvaluesRandom(benchmark::State& state) {
  const auto chain = random_chain(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    bdsep::BirthDeathChain scratch(chain.up_rates(), chain.down_rates(),
                                   chain.hold_rates());
    benchmark::DoNotOptimize(bdsep::eigenvalues(scratch));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EigenvaluesRandom)
    ->RangeMultiplier(2)
    ->Range(64, 1024)
    ->Complexity();

void BM_Stationary(benchmark::State& state) {
  const auto chain = random_chain(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(bdsep::stationary(chain));
  }
}
BENCHMARK(BM_Stationary)->RangeMultiplier(4)->Range(64, 4096);

}  // namespace

BENCHMARK_MAIN();
