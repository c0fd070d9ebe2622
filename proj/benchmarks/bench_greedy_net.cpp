#include "hullmod/generators.hpp"
#include "hullmod/nets.hpp"

#include <benchmark/benchmark.h>

namespace {

hullmod::SampledClass ball(std::size_t m) {
  hullmod::GeneratorSpec spec;
  spec.kind = hullmod::GeneratorKind::ball;
  spec.dimension = 2;
  spec.n = 64;
  spec.m = m;
  spec.seed = 3;
  return hullmod::generate(spec);
}

void BM_GreedyNetGram(benchmark::State& state) {
  const auto cls = ball(static_cast<std::size_t>(state.range(0)));
  const hullmod::EmpiricalGeometry geometry(cls);
  for (auto _ : state) benchmark::DoNotOptimize(hullmod::greedy_net(cls, geometry, 0.02));
}
BENCHMARK(BM_GreedyNetGram)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_GreedyNetCoordinates(benchmark::State& state) {
  const auto cls = ball(static_cast<std::size_t>(state.range(0)));
  const hullmod::RowCoordinates coords(cls);
  for (auto _ : state) benchmark::DoNotOptimize(hullmod::greedy_net(cls, coords, 0.02));
}
BENCHMARK(BM_GreedyNetCoordinates)->Arg(500)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

}  // namespace
