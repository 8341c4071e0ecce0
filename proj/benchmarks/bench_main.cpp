#include <benchmark/benchmark.h>

#include "bcnorm/bcnorm.hpp"

using namespace bcnorm;

namespace {

Sample lognormal(std::size_t n) {
  ReplicateStream s(1, n, 0);
  return generate_lognormal(n, 0.0, 0.3, s);
}

void BM_Fit1p(benchmark::State& state) {
  const Sample x = lognormal(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fit_1p(x));
}
BENCHMARK(BM_Fit1p)->Arg(40)->Arg(200)->Arg(2000);

void BM_Fit2p(benchmark::State& state) {
  const Sample x = lognormal(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fit_2p(x));
}
BENCHMARK(BM_Fit2p)->Arg(40)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_ShapiroWilk(benchmark::State& state) {
  const Sample x = lognormal(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(shapiro_wilk(x));
}
BENCHMARK(BM_ShapiroWilk)->Arg(40)->Arg(200)->Arg(2000);

void BM_AndersonDarling(benchmark::State& state) {
  const Sample x = lognormal(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(anderson_darling(x));
}
BENCHMARK(BM_AndersonDarling)->Arg(40)->Arg(200)->Arg(2000);

// every model and test on one sample, as in the simulation grid
void BM_Replicate(benchmark::State& state) {
  const Sample x = lognormal(static_cast<std::size_t>(state.range(0)));
  const std::vector<SimModel> models = {SimModel::TrueLambda, SimModel::OneParam, SimModel::TwoParam};
  const std::vector<NormalityTest> tests = {NormalityTest::SW, NormalityTest::AD};
  for (auto _ : state) benchmark::DoNotOptimize(run_replicate(x, models, tests));
}
BENCHMARK(BM_Replicate)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
