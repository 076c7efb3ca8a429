#include <benchmark/benchmark.h>

#include <random>

#include "spdc/coincidence.hpp"

namespace {

spdc::FrameStack poisson_stack(int side, std::size_t frames) {
  std::mt19937_64 rng(1);
  std::poisson_distribution<int> pd(0.05);
  std::vector<std::uint16_t> counts(static_cast<std::size_t>(side) * side * frames);
  for (auto& c : counts) c = static_cast<std::uint16_t>(pd(rng));
  return spdc::FrameStack(side, side, frames, 1, "", std::move(counts));
}

void BM_CoincidenceXPairs(benchmark::State& state) {
  const auto stack = poisson_stack(48, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(spdc::coincidence_map(stack, spdc::XPairs{}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CoincidenceXPairs)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_CoincidenceRow(benchmark::State& state) {
  const auto stack = poisson_stack(48, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(spdc::coincidence_map(stack, spdc::ConditionalRow{24, 24}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_CoincidenceRow)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
