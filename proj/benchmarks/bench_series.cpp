#include <benchmark/benchmark.h>

#include <random>

#include "furry/series.hpp"

using namespace furry;

namespace {

MatrixSeries random_series(Index dim, int order, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  MatrixSeries s(dim, order);
  for (int n = 0; n <= order; ++n)
    for (Index i = 0; i < dim; ++i)
      for (Index j = 0; j < dim; ++j) s.coeff(n)(i, j) = Complex(nd(rng), nd(rng)) * 0.1;
  return s;
}

void BM_SeriesMul(benchmark::State& state) {
  const Index dim = state.range(0);
  const MatrixSeries a = random_series(dim, 12, 1), b = random_series(dim, 12, 2);
  for (auto _ : state) benchmark::DoNotOptimize(series_mul(a, b));
}
BENCHMARK(BM_SeriesMul)->Arg(40)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_SeriesInvSqrt(benchmark::State& state) {
  const Index dim = state.range(0);
  MatrixSeries h = random_series(dim, 12, 3);
  for (int n = 0; n <= 12; ++n) h.coeff(n) = 0.5 * (h[n] + h[n].adjoint()).eval();
  h.coeff(0) = CMatrix::Identity(dim, dim);
  for (auto _ : state) benchmark::DoNotOptimize(series_inv_sqrt(h));
}
BENCHMARK(BM_SeriesInvSqrt)->Arg(40)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
