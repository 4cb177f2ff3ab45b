#include <benchmark/benchmark.h>

#include <seqclt/asclt.hpp>

namespace {

using namespace seqclt;

void BM_AscltEstimate(benchmark::State& state) {
  const double xs[] = {-1.0, 0.0, 1.0};
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    BitStream s(SourceSpec::prng(1));
    benchmark::DoNotOptimize(asclt_estimate(s, n, xs, WeightSeq::harmonic()));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_AscltEstimate)->Arg(10'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

void BM_BinomialExpectation(benchmark::State& state) {
  const TestFunction f = clip_function();
  const auto k = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(binomial_expectation(f, k));
}
BENCHMARK(BM_BinomialExpectation)->Arg(100)->Arg(10'000)->Arg(1'000'000);

void BM_ExpectationCache(benchmark::State& state) {
  const TestFunction f = clip_function();
  for (auto _ : state) benchmark::DoNotOptimize(ExpectationCache(f, static_cast<std::uint64_t>(state.range(0))));
}
BENCHMARK(BM_ExpectationCache)->Arg(10'000)->Unit(benchmark::kMillisecond);

void BM_Subsequence(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(subsequence(1.5, subsequence_limit(1.5)));
}
BENCHMARK(BM_Subsequence)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
