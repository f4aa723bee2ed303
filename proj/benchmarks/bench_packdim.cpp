#include <benchmark/benchmark.h>

#include "packdim/brownian.hpp"
#include "packdim/gallery.hpp"
#include "packdim/geometry.hpp"
#include "packdim/martingale.hpp"
#include "packdim/spine.hpp"

using namespace packdim;

static void BM_SampleRandCantor(benchmark::State& state) {
  const auto ex = random_cantor_law();
  Stream s(1);
  for (auto _ : state) benchmark::DoNotOptimize(sample_offspring(ex.law, s));
}
BENCHMARK(BM_SampleRandCantor);

static void BM_SampleBridgeDensity(benchmark::State& state) {
  Stream s(2);
  for (auto _ : state) benchmark::DoNotOptimize(sample_bridge_density(s));
}
BENCHMARK(BM_SampleBridgeDensity);

static void BM_SampleBridgePath(benchmark::State& state) {
  Stream s(3);
  for (auto _ : state) benchmark::DoNotOptimize(sample_bridge_ratios_path(s));
}
BENCHMARK(BM_SampleBridgePath)->Unit(benchmark::kMillisecond);

static void BM_SimulateX(benchmark::State& state) {
  const auto ex = random_cantor_law();
  MartingaleOptions o;
  o.eps_rel = 1.0 / static_cast<double>(state.range(0));
  Stream s(4);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_X(ex.law, *ex.oracles.alpha, o, s));
}
BENCHMARK(BM_SimulateX)->Arg(100)->Arg(333)->Arg(1000)->Unit(benchmark::kMicrosecond);

static void BM_Spine(benchmark::State& state) {
  const auto ex = random_cantor_law();
  SpineOptions o;
  o.depth = static_cast<int>(state.range(0));
  Stream s(5);
  for (auto _ : state) benchmark::DoNotOptimize(sample_spine(ex.law, *ex.oracles.alpha, o, s));
}
BENCHMARK(BM_Spine)->Arg(10)->Arg(40)->Unit(benchmark::kMicrosecond);

static void BM_Realize(benchmark::State& state) {
  const auto ex = random_cantor_law();
  Stream s(6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(realize(ex.law, Placement::kLeftRightEnds, static_cast<int>(state.range(0)), s));
  }
}
BENCHMARK(BM_Realize)->Arg(12)->Arg(18)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
