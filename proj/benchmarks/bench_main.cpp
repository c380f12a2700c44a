#include <benchmark/benchmark.h>

#include <random>

#include "hdc/engine.hpp"
#include "hdc/fields.hpp"

namespace {

void BM_AdiStep(benchmark::State& state) {
  const hdc::GridGeometry g(static_cast<int>(state.range(0)));
  hdc::ScalarField f(g, hdc::FieldKind::Drug);
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double& v : f.values) v = u(gen);
  for (auto _ : state) {
    f = hdc::adi_step(f, 0.5, hdc::Reaction{}, 0.1);
    benchmark::DoNotOptimize(f.values.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}
BENCHMARK(BM_AdiStep)->Arg(50)->Arg(100)->Arg(200);

void BM_MoveCoefficients(benchmark::State& state) {
  const hdc::GridGeometry g(100);
  const auto c = hdc::init_linear_taf(5.0, g);
  const hdc::ModelParameters p;
  int i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hdc::move_coefficients(c, i, 50, 0.001, p));
    i = (i + 1) % 100;
  }
}
BENCHMARK(BM_MoveCoefficients);

// Macro-steps of a tumour run, measured from the state reached at t = 15.
void BM_MacroStep(benchmark::State& state) {
  hdc::SimConfig config;
  config.t_end = 1000.0;
  hdc::Simulation sim(config);
  while (sim.state().t < 15.0) sim.step();
  for (auto _ : state) sim.step();
  state.counters["cells"] = static_cast<double>(sim.state().cells.size());
}
BENCHMARK(BM_MacroStep)->Unit(benchmark::kMillisecond);

void BM_AngioRun(benchmark::State& state) {
  auto config = hdc::scenario_defaults(hdc::Scenario::AngioOnly);
  for (auto _ : state) {
    hdc::Simulation sim(config);
    sim.run();
    benchmark::DoNotOptimize(sim.state().network.size());
  }
}
BENCHMARK(BM_AngioRun)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
