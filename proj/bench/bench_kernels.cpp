// Serial reference vs OpenMP path for the sampling kernels.

#include <benchmark/benchmark.h>

#include "probe/moments.hpp"
#include "probe/sampling.hpp"
#include "probe/scatter.hpp"

using namespace probe;

namespace {

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void BM_SkewSamples(benchmark::State& state) {
  const DensityMatrix rho = random_density(3, 3, 9, RandomSeed{1, 0});
  const SkewKernel kernel(rho);
  const Spectrum spec = harmonic_spectrum(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(skew_samples(kernel, spec, 1 << 16, {1, 1}, mode(state)));
  }
  state.SetItemsProcessed(state.iterations() * (1 << 16));
}
BENCHMARK(BM_SkewSamples)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_Scatter(benchmark::State& state) {
  RunConfig cfg;
  cfg.count = 10000;
  cfg.seed = {2, 0};
  cfg.execution = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(generate_scatter(cfg));
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_Scatter)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_ScatterWithVariance(benchmark::State& state) {
  RunConfig cfg;
  cfg.count = 2000;
  cfg.seed = {3, 0};
  cfg.withVariance = true;
  cfg.execution = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(generate_scatter(cfg));
  state.SetItemsProcessed(state.iterations() * 2000);
}
BENCHMARK(BM_ScatterWithVariance)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_ClosedFormVariance(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const DensityMatrix rho = random_density(n, 2, 2 * n, RandomSeed{4, 0});
  const Spectrum spec = harmonic_spectrum(n);
  for (auto _ : state) benchmark::DoNotOptimize(variance(rho, spec));
}
BENCHMARK(BM_ClosedFormVariance)->Arg(2)->Arg(3)->Arg(4)->ArgName("N_A");

}  // namespace

BENCHMARK_MAIN();
