// Serial reference vs OpenMP kernels on a 2-D grid. Both variants must
// produce identical numbers; the benchmark aborts if they do not.

#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdlib>
#include <iostream>

#include "scaleon/kernels.hpp"
#include "scaleon/spacetime.hpp"

namespace {

using namespace scaleon;

FlatGrid make_grid(std::size_t n) {
  return FlatGrid(GridSpec{2, {n, n, 1, 1}, {1.0 / static_cast<double>(n), 1.0 / static_cast<double>(n), 1.0, 1.0}, {}});
}

double field(const Point& x) { return std::sin(3.0 * x[0]) * std::cos(2.0 * x[1]) + std::exp(0.1 * x[0] * x[1]); }

Complex term_at(const FlatGrid& grid, std::size_t i) {
  const Point x = grid.point(i);
  return {field(x), std::cos(x[0] - x[1])};
}

template <class Fn>
void bench_sample(benchmark::State& state, Fn sample) {
  const FlatGrid grid = make_grid(static_cast<std::size_t>(state.range(0)));
  const kernels::RealSiteFunction f = field;
  for (auto _ : state) benchmark::DoNotOptimize(sample(grid, f));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * static_cast<std::int64_t>(grid.size()));
}

template <class Fn>
void bench_sum(benchmark::State& state, Fn sum) {
  const FlatGrid grid = make_grid(static_cast<std::size_t>(state.range(0)));
  const Region region = Region::whole(grid);
  const kernels::ComplexTerm term = [&grid](std::size_t i) { return term_at(grid, i); };
  for (auto _ : state) benchmark::DoNotOptimize(sum(grid, region, term));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * static_cast<std::int64_t>(grid.size()));
}

void BM_sample_serial(benchmark::State& s) {
  bench_sample(s, [](const FlatGrid& g, const kernels::RealSiteFunction& f) { return kernels::serial::sample(g, f); });
}
void BM_sample_omp(benchmark::State& s) {
  bench_sample(s, [](const FlatGrid& g, const kernels::RealSiteFunction& f) { return kernels::omp::sample(g, f); });
}
void BM_sum_serial(benchmark::State& s) { bench_sum(s, kernels::serial::sum); }
void BM_sum_omp(benchmark::State& s) { bench_sum(s, kernels::omp::sum); }

BENCHMARK(BM_sample_serial)->Arg(128)->Arg(512);
BENCHMARK(BM_sample_omp)->Arg(128)->Arg(512);
BENCHMARK(BM_sum_serial)->Arg(128)->Arg(512);
BENCHMARK(BM_sum_omp)->Arg(128)->Arg(512);

// Bit-identity gate run before timing.
bool variants_agree() {
  const FlatGrid grid = make_grid(200);
  const kernels::RealSiteFunction f = field;
  const kernels::ComplexTerm term = [&grid](std::size_t i) { return term_at(grid, i); };
  const Region region = Region::whole(grid);
  return kernels::serial::sample(grid, f) == kernels::omp::sample(grid, f) &&
         kernels::serial::sum(grid, region, term) == kernels::omp::sum(grid, region, term);
}

}  // namespace

int main(int argc, char** argv) {
  if (!variants_agree()) {
    std::cerr << "serial and OpenMP kernels disagree\n";
    return EXIT_FAILURE;
  }
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return EXIT_FAILURE;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return EXIT_SUCCESS;
}
