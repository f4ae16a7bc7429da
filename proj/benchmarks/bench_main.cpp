#include <benchmark/benchmark.h>

#include "iep/changepoint.hpp"
#include "iep/coupling.hpp"
#include "iep/gof.hpp"
#include "iep/localtime.hpp"

namespace {

void BM_KsIntegrated(benchmark::State& state) {
  const auto model = iep::DistributionModel::normal(0.0, 1.0);
  const auto sample = model.sample(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(iep::ks_integrated(sample, model));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KsIntegrated)->RangeMultiplier(4)->Range(256, 65536)->Complexity();

void BM_Tau(benchmark::State& state) {
  const auto sample = iep::DistributionModel::uniform().sample(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(iep::tau(sample).value);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Tau)->RangeMultiplier(2)->Range(128, 2048)->Complexity(benchmark::oNSquared);

void BM_SelfIntersection(benchmark::State& state) {
  const auto walk = iep::random_walk(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(iep::self_intersection(walk, 1.0));
}
BENCHMARK(BM_SelfIntersection)->RangeMultiplier(4)->Range(1024, 65536);

void BM_DyadicCoupledPair(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const unsigned depth = iep::default_depth(n);
  iep::Seed seed = 4;
  for (auto _ : state) benchmark::DoNotOptimize(iep::dyadic_coupled_pair(n, depth, seed++).n);
}
BENCHMARK(BM_DyadicCoupledPair)->RangeMultiplier(4)->Range(256, 16384);

void BM_SimulateNullKs(benchmark::State& state) {
  const auto grid = iep::Grid::dyadic(static_cast<unsigned>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(iep::simulate_null_ks(grid, 100, 5, 1));
}
BENCHMARK(BM_SimulateNullKs)->DenseRange(8, 12, 2)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
