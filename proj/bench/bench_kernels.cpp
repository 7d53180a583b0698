#include "silcorr/kernels.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace silcorr;

namespace
{

std::vector<kernels::SeriesPair> make_pairs(std::size_t count, std::size_t length)
{
  std::mt19937_64 rng(1);
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<kernels::SeriesPair> pairs(count);
  for (auto & p : pairs) {
    for (std::size_t i = 0; i < length; ++i) {
      p.m.push_back(10.0 + d(rng));
      p.g.push_back(p.m.back() + 0.1 * d(rng));
    }
  }
  return pairs;
}

std::vector<sim::SensorScene> make_scenes(std::size_t count)
{
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> x(6.0, 150.0);
  std::uniform_real_distribution<double> y(-6.0, 6.0);
  std::vector<sim::SensorScene> scenes(count);
  for (auto & s : scenes) {
    s.ego_footprint = {{{0.0, 0.0}, 0.0}, 4.8, 1.9};
    for (int k = 0; k < 3; ++k) {
      sim::ActorState a;
      a.actor_id = std::to_string(k);
      a.lane = {x(rng), y(rng)};
      a.footprint = {{{a.lane.station, a.lane.lateral}, 0.0}, 4.8, 1.9};
      s.actors.push_back(a);
    }
  }
  return scenes;
}

void BM_MetricsSerial(benchmark::State & state)
{
  const auto pairs = make_pairs(static_cast<std::size_t>(state.range(0)), 1500);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::evaluate_pairs_serial(pairs));
}

void BM_MetricsParallel(benchmark::State & state)
{
  const auto pairs = make_pairs(static_cast<std::size_t>(state.range(0)), 1500);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::evaluate_pairs_parallel(pairs));
}

void BM_VisibilitySerial(benchmark::State & state)
{
  const auto scenes = make_scenes(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::visibility_batch_serial(scenes, sim::SensorConfig{}));
}

void BM_VisibilityParallel(benchmark::State & state)
{
  const auto scenes = make_scenes(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::visibility_batch_parallel(scenes, sim::SensorConfig{}));
}

}  // namespace

BENCHMARK(BM_MetricsSerial)->Arg(24)->Arg(240);
BENCHMARK(BM_MetricsParallel)->Arg(24)->Arg(240);
BENCHMARK(BM_VisibilitySerial)->Arg(1000)->Arg(10000);
BENCHMARK(BM_VisibilityParallel)->Arg(1000)->Arg(10000);

BENCHMARK_MAIN();
