#include <benchmark/benchmark.h>

#include "gridstats/distributions.hpp"
#include "gridstats/fitting.hpp"
#include "gridstats/synth_sampler.hpp"

using namespace gridstats;

namespace {

const DistSpec kMva115 = DistSpec::gev(41.08, 27.38, 0.3732);

void BM_SampleGev(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sample(kMva115, 1, static_cast<std::size_t>(state.range(0))));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleGev)->Arg(1000)->Arg(100000);

void BM_SampleTls(benchmark::State& state) {
  const auto d = DistSpec::tls(0.1291, 0.04, 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(sample(d, 1, static_cast<std::size_t>(state.range(0))));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleTls)->Arg(1000)->Arg(100000);

void BM_FitGev(benchmark::State& state) {
  const auto draws = sample(kMva115, 2, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fit_mle(Family::Gev, draws));
}
BENCHMARK(BM_FitGev)->Arg(1000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_FitTls(benchmark::State& state) {
  const auto draws = sample(DistSpec::tls(0.1291, 0.04, 3.0), 3, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fit_mle(Family::Tls, draws));
}
BENCHMARK(BM_FitTls)->Arg(1000)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_HistogramAndKl(benchmark::State& state) {
  const auto draws = sample(kMva115, 4, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kl_divergence(histogram(draws), kMva115));
}
BENCHMARK(BM_HistogramAndKl)->Arg(5000)->Arg(50000);

void BM_GenerateTransformers(benchmark::State& state) {
  const auto profile = builtin_profile();
  for (auto _ : state)
    benchmark::DoNotOptimize(generate_transformers(115, static_cast<std::size_t>(state.range(0)), 5, profile, 100.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateTransformers)->Arg(5000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
