#include <benchmark/benchmark.h>

#include <numbers>

#include "spdc/entanglement.hpp"

namespace {

void BM_EvaluateEf(benchmark::State& state) {
  spdc::EntanglementConfig config;
  config.setup.theta_p = 32.9 * std::numbers::pi / 180.0;
  config.grid.points = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(spdc::evaluate_ef(config, 5e-3));
}
BENCHMARK(BM_EvaluateEf)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_EfFromJoints(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  std::vector<double> v(m * m, 1.0 / double(m * m));
  const spdc::DiscreteJoint pos(m, v, spdc::Basis::position, 1.0);
  const spdc::DiscreteJoint mom(m, v, spdc::Basis::momentum, 2.0 * std::numbers::pi / double(m));
  for (auto _ : state) benchmark::DoNotOptimize(spdc::ef_min(pos, mom));
}
BENCHMARK(BM_EfFromJoints)->Arg(64)->Arg(256)->Arg(512);

}  // namespace
