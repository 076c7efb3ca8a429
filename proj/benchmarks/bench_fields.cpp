#include <benchmark/benchmark.h>

#include <numbers>

#include "spdc/direct.hpp"
#include "spdc/fields.hpp"

namespace {

spdc::TwoPhotonSource source() {
  spdc::CrystalSetup setup;
  setup.kind = spdc::SingleCrystal{5e-3};
  setup.theta_p = 32.94 * std::numbers::pi / 180.0;
  return spdc::TwoPhotonSource(spdc::SellmeierModel::bbo(), spdc::PumpSpec{}, setup);
}

void BM_BuildAmplitude(benchmark::State& state) {
  const auto src = source();
  const auto grid = spdc::auto_grid(static_cast<int>(state.range(0)), src);
  spdc::FieldOptions loose;
  loose.truncation_tolerance = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(spdc::build_amplitude(grid, src, loose));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}
BENCHMARK(BM_BuildAmplitude)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_PropagateAndTransform(benchmark::State& state) {
  const auto src = source();
  const auto grid = spdc::auto_grid(static_cast<int>(state.range(0)), src);
  spdc::FieldOptions loose;
  loose.truncation_tolerance = 1.0;
  const auto amp = spdc::build_amplitude(grid, src, loose);
  for (auto _ : state) benchmark::DoNotOptimize(spdc::to_position(spdc::propagate(amp, 5e-3)));
}
BENCHMARK(BM_PropagateAndTransform)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_ConditionalDirect(benchmark::State& state) {
  const auto src = source();
  const auto grid = spdc::auto_grid(static_cast<int>(state.range(0)), src);
  for (auto _ : state) benchmark::DoNotOptimize(spdc::conditional_position_direct(grid, src, 5e-3));
}
BENCHMARK(BM_ConditionalDirect)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace
