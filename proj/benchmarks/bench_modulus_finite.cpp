#include "hullmod/generators.hpp"
#include "hullmod/nets.hpp"
#include "hullmod/process.hpp"

#include <benchmark/benchmark.h>

namespace {

void BM_ModulusFinite(benchmark::State& state) {
  hullmod::GeneratorSpec spec;
  spec.kind = hullmod::GeneratorKind::interval_indicators;
  spec.n = 200;
  spec.m = static_cast<std::size_t>(state.range(0));
  const auto cls = hullmod::generate(spec);
  const auto deltas = hullmod::geometric_grid(0.6, 0.03, 10);
  for (auto _ : state) benchmark::DoNotOptimize(hullmod::modulus_finite(cls, deltas, 100, 1));
}
BENCHMARK(BM_ModulusFinite)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace
