// Serial reference scan against the OpenMP scan, plus the kernels they spend time in.
#include <benchmark/benchmark.h>

#include "ugo/forms.hpp"
#include "ugo/search.hpp"

namespace {

ugo::ScanConfig table_scan(std::int64_t n_max, int jobs) {
  ugo::ScanConfig c;
  c.families = {ugo::ScanFamily::plus, ugo::ScanFamily::minus};
  c.n_min = 0;
  c.n_max = n_max;
  c.filter = ugo::ScanFilter::two_torsion_wide;
  c.jobs = jobs;
  return c;
}

void BM_ScanSerial(benchmark::State& state) {
  const auto c = table_scan(state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(ugo::scan_serial(c));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(ugo::scan_items(c).size()));
}
BENCHMARK(BM_ScanSerial)->Arg(1000)->Arg(3163)->Unit(benchmark::kMillisecond);

void BM_ScanParallel(benchmark::State& state) {
  const auto c = table_scan(state.range(0), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(ugo::scan_parallel(c));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(ugo::scan_items(c).size()));
}
BENCHMARK(BM_ScanParallel)
    ->ArgsProduct({{1000, 3163}, {1, 2, 4, 8}})
    ->ArgNames({"n_max", "jobs"})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

// Unfiltered scan: every item pays for a full class group.
void BM_ScanAllSerial(benchmark::State& state) {
  auto c = table_scan(state.range(0), 1);
  c.filter = ugo::ScanFilter::all;
  for (auto _ : state) benchmark::DoNotOptimize(ugo::scan_serial(c));
}
BENCHMARK(BM_ScanAllSerial)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_ScanAllParallel(benchmark::State& state) {
  auto c = table_scan(state.range(0), static_cast<int>(state.range(1)));
  c.filter = ugo::ScanFilter::all;
  for (auto _ : state) benchmark::DoNotOptimize(ugo::scan_parallel(c));
}
BENCHMARK(BM_ScanAllParallel)
    ->ArgsProduct({{1000}, {1, 2, 4, 8}})
    ->ArgNames({"n_max", "jobs"})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

void BM_EnumerateReduced(benchmark::State& state) {
  const std::int64_t delta = state.range(0);
  const bool with_sieve = state.range(1) != 0;
  const auto sieve = with_sieve ? ugo::intarith::FactorSieve::shared(static_cast<std::uint64_t>(delta / 4 + 1)) : nullptr;
  for (auto _ : state) benchmark::DoNotOptimize(ugo::enumerate_reduced(delta, sieve.get()));
}
BENCHMARK(BM_EnumerateReduced)
    ->ArgsProduct({{68640, 10004573, 4000004}, {0, 1}})
    ->ArgNames({"delta", "sieve"})
    ->Unit(benchmark::kMicrosecond);

void BM_ClassGroupStructure(benchmark::State& state) {
  const std::int64_t delta = state.range(0);
  const auto sieve = ugo::intarith::FactorSieve::shared(static_cast<std::uint64_t>(delta / 4 + 1));
  for (auto _ : state) {
    const ugo::FormClassGroup g(delta, sieve.get());
    benchmark::DoNotOptimize(g.wide_structure());
    benchmark::DoNotOptimize(g.narrow_structure());
  }
}
BENCHMARK(BM_ClassGroupStructure)->Arg(68640)->Arg(3999996)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
