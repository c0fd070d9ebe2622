#include "hullmod/generators.hpp"
#include "hullmod/hullopt.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

void BM_HullPairSup(benchmark::State& state) {
  hullmod::GeneratorSpec spec;
  spec.kind = hullmod::GeneratorKind::ball;
  spec.dimension = 3;
  spec.n = 64;
  spec.m = static_cast<std::size_t>(state.range(0));
  spec.seed = 1;
  const auto cls = hullmod::generate(spec);
  const hullmod::EmpiricalGeometry geometry(cls);
  const hullmod::HullPairSolver solver(geometry);
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal;
  std::vector<double> c(spec.m);
  for (auto _ : state) {
    for (auto& v : c) v = normal(rng);
    benchmark::DoNotOptimize(solver.solve(c, 0.1 * geometry.diameter()));
  }
}
BENCHMARK(BM_HullPairSup)->Arg(20)->Arg(60)->Arg(200)->Unit(benchmark::kMicrosecond);

}  // namespace
