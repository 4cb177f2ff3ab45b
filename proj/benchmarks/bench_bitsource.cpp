#include <benchmark/benchmark.h>

#include <seqclt/bitsource.hpp>
#include <seqclt/sampling.hpp>

namespace {

using namespace seqclt;

void BM_PopcountPrng(benchmark::State& state) {
  BitStream s(SourceSpec::prng(1));
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(s.popcount_block(n));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(n / 8));
}
BENCHMARK(BM_PopcountPrng)->Arg(64)->Arg(4096)->Arg(1 << 20);

void BM_PopcountChampernowne(benchmark::State& state) {
  BitStream s(SourceSpec::champernowne());
  for (auto _ : state) benchmark::DoNotOptimize(s.popcount_block(1 << 16));
  state.SetBytesProcessed(state.iterations() * (1 << 13));
}
BENCHMARK(BM_PopcountChampernowne);

void BM_NextBits(benchmark::State& state) {
  BitStream s(SourceSpec::prng(2));
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(s.next_bits(n));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(n / 8));
}
BENCHMARK(BM_NextBits)->Arg(100)->Arg(1 << 16);

// Samples 1..k of the triangular scheme, k(k+1)/2 bits.
void BM_TriangularRun(benchmark::State& state) {
  const auto k = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    BitStream s(SourceSpec::prng(3));
    benchmark::DoNotOptimize(sample_run(s, BlockScheme::triangular(), k, {}));
  }
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(k * (k + 1) / 16));
}
BENCHMARK(BM_TriangularRun)->Arg(1000)->Arg(20000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
