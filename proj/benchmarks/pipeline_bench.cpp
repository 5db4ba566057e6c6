#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "arstack/detect.hpp"
#include "arstack/estimate.hpp"
#include "arstack/synth.hpp"
#include "arstack/timeseries.hpp"

using namespace arstack;

static void BM_FitYuleWalker(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<double> y(static_cast<std::size_t>(state.range(0)));
  for (auto& v : y) v = g(rng);
  const Series s(y);
  const int p = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(fit_yule_walker(s, p));
}
BENCHMARK(BM_FitYuleWalker)->Args({8, 1})->Args({8, 3})->Args({64, 3})->Args({1024, 8});

static void BM_EstimateGround(benchmark::State& state) {
  const auto scene = generate(reference_scene_spec());
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_ground(scene.stack, 1, 1, threads));
  state.SetItemsProcessed(state.iterations() * 100 * 100);
}
BENCHMARK(BM_EstimateGround)->Arg(1)->Arg(4)->UseRealTime();

static BinaryMask noisy_mask(std::size_t side) {
  std::mt19937_64 rng(3);
  std::bernoulli_distribution bit(0.3);
  BinaryMask m(side, side);
  for (std::size_t y = 0; y < side; ++y) {
    for (std::size_t x = 0; x < side; ++x) m.set(x, y, bit(rng));
  }
  return m;
}

static void BM_MorphOpen(benchmark::State& state) {
  const auto m = noisy_mask(512);
  const int r = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(morph_open(m, r));
}
BENCHMARK(BM_MorphOpen)->Arg(1)->Arg(3)->Arg(8);

static void BM_Cluster(benchmark::State& state) {
  const auto m = noisy_mask(512);
  const Raster diff(512, 512, 1.0, 1.0f);
  for (auto _ : state) benchmark::DoNotOptimize(cluster(m, diff, 2));
}
BENCHMARK(BM_Cluster);

BENCHMARK_MAIN();
