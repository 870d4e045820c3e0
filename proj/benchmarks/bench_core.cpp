#include <benchmark/benchmark.h>

#include <random>

#include "resobeam/cavity_sim.hpp"
#include "resobeam/fir.hpp"
#include "resobeam/gain_dynamics.hpp"
#include "resobeam/modem.hpp"

using namespace resobeam;

static void BM_CascadeStep(benchmark::State& state) {
  GainMediumParams p;
  p.n_slices = static_cast<int>(state.range(0));
  GainCascade cascade(p);
  cascade.set_pump(60);
  double r = 1e16, l = 1e16;
  for (auto _ : state) {
    const auto out = cascade.step(r, l);
    r = 0.9 * out.right;
    l = 0.9 * out.left;
    benchmark::DoNotOptimize(r);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_CascadeStep)->Arg(1)->Arg(10)->Arg(40);

static void BM_SimulatorStep(benchmark::State& state) {
  CavitySimulator sim{CavityConfig{}};
  sim.set_pump(60);
  for (auto _ : state) benchmark::DoNotOptimize(sim.step(1.0, 1.0).p_out);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SimulatorStep);

static void BM_LowpassFilter(benchmark::State& state) {
  Waveform w;
  w.dt = 1e-3 / 3e8;
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  w.samples.resize(static_cast<std::size_t>(state.range(0)));
  for (auto& v : w.samples) v = g(rng);
  const FilterSpec spec;
  for (auto _ : state) benchmark::DoNotOptimize(lowpass(w, spec).wave.samples.data());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LowpassFilter)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

static void BM_Adc(benchmark::State& state) {
  Waveform w;
  w.dt = 1e-3 / 3e8;
  w.samples.assign(1 << 20, 0.44);
  DemodConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(adc(w, cfg).levels.samples.data());
  state.SetItemsProcessed(state.iterations() * (1 << 20));
}
BENCHMARK(BM_Adc)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
