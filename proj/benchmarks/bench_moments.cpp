#include <benchmark/benchmark.h>

#include <random>

#include <seqclt/cdf.hpp>
#include <seqclt/moments.hpp>

namespace {

using namespace seqclt;

void BM_ExactMoment(benchmark::State& state) {
  const auto m = static_cast<unsigned>(state.range(0));
  std::uint64_t n = 1;
  for (auto _ : state) benchmark::DoNotOptimize(exact_rademacher_moment(n++ % 100'000 + 1, m));
}
BENCHMARK(BM_ExactMoment)->Arg(4)->Arg(8)->Arg(16);

void BM_BruteForceMoment(benchmark::State& state) {
  const auto n = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_moment(n, 10));
}
BENCHMARK(BM_BruteForceMoment)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_MomentTable(benchmark::State& state) {
  MomentTable table(8);
  double x = 0.1;
  for (auto _ : state) {
    table.observe(x);
    x = -x * 1.0000001;
  }
  benchmark::DoNotOptimize(table.empirical_moment(8));
}
BENCHMARK(BM_MomentTable);

void BM_KsDistance(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<double> xs(static_cast<std::size_t>(state.range(0)));
  for (double& x : xs) x = g(rng);
  EmpiricalCDF ecdf(xs);
  ecdf.freeze();
  for (auto _ : state) benchmark::DoNotOptimize(ks_distance(ecdf));
}
BENCHMARK(BM_KsDistance)->Arg(1000)->Arg(100'000);

}  // namespace

BENCHMARK_MAIN();
