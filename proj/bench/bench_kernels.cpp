// Serial reference vs OpenMP kernels, plus the Monte-Carlo driver under
// both execution policies. Sizes are the grid edge length.

#include "gradsurf/kernels.hpp"
#include "gradsurf/simulate.hpp"
#include "gradsurf/stats.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

using gradsurf::Index;
using gradsurf::Matrix;
using gradsurf::Vector;
namespace k = gradsurf::kernels;

Matrix random_matrix(Index m, Index n, std::uint64_t seed) {
  gradsurf::Rng rng(seed);
  Matrix a(m, n);
  for (Index i = 0; i < a.size(); ++i) a(i) = rng.normal();
  return a;
}

Vector positive_vector(Index n, std::uint64_t seed) {
  gradsurf::Rng rng(seed);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = 0.5 + rng.uniform();
  return v;
}

template <bool Parallel>
void BM_DiagonalSylvester(benchmark::State& state) {
  const Index n = state.range(0);
  const Matrix c = random_matrix(n, n, 1);
  const Vector l = positive_vector(n, 2);
  const Vector r = positive_vector(n, 3);
  Matrix out;
  for (auto _ : state) {
    if constexpr (Parallel) {
      k::omp::diagonal_sylvester(c, l, r, 1e-12, out);
    } else {
      k::serial::diagonal_sylvester(c, l, r, 1e-12, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_Reflect(benchmark::State& state) {
  const Index n = state.range(0);
  Matrix a = random_matrix(n, n, 4);
  const Vector w = random_matrix(n, 1, 5).col(0);
  for (auto _ : state) {
    if constexpr (Parallel) {
      k::omp::reflect_left(a, w);
      k::omp::reflect_right(a, w);
    } else {
      k::serial::reflect_left(a, w);
      k::serial::reflect_right(a, w);
    }
    benchmark::DoNotOptimize(a.data());
  }
}

template <bool Parallel>
void BM_LCurve(benchmark::State& state) {
  const Index n = state.range(0);
  const Vector alpha = positive_vector(n, 6);
  const Vector beta = positive_vector(n, 7);
  const Matrix p = random_matrix(n, n, 8);
  const Matrix q = random_matrix(n, n, 9);
  std::vector<double> lambdas(64);
  for (std::size_t i = 0; i < lambdas.size(); ++i) lambdas[i] = 1e-3 * static_cast<double>(i + 1);
  std::vector<k::LCurvePoint> out(lambdas.size());
  for (auto _ : state) {
    if constexpr (Parallel) {
      k::omp::lcurve(alpha, beta, p, q, lambdas, out);
    } else {
      k::serial::lcurve(alpha, beta, p, q, lambdas, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_TikhonovCoefficients(benchmark::State& state) {
  const Index n = state.range(0);
  const Vector alpha = positive_vector(n, 10);
  const Vector beta = positive_vector(n, 11);
  const Matrix p = random_matrix(n, n, 12);
  const Matrix q = random_matrix(n, n, 13);
  Matrix m;
  for (auto _ : state) {
    if constexpr (Parallel) {
      k::omp::tikhonov_coefficients(alpha, beta, p, q, 0.1, m);
    } else {
      k::serial::tikhonov_coefficients(alpha, beta, p, q, 0.1, m);
    }
    benchmark::DoNotOptimize(m.data());
  }
}

template <gradsurf::Execution E>
void BM_MonteCarlo(benchmark::State& state) {
  gradsurf::MonteCarloConfig cfg;
  cfg.surface = gradsurf::BumpSurfaceSpec::standard(state.range(0), state.range(0));
  cfg.levels = {0.05, 0.1};
  cfg.trials = 4;
  cfg.execution = E;
  for (auto _ : state) {
    auto table = gradsurf::monte_carlo(cfg);
    benchmark::DoNotOptimize(table.rows.data());
  }
}

}  // namespace

BENCHMARK(BM_DiagonalSylvester<false>)->Name("diagonal_sylvester/serial")->RangeMultiplier(2)->Range(128, 1024);
BENCHMARK(BM_DiagonalSylvester<true>)->Name("diagonal_sylvester/omp")->RangeMultiplier(2)->Range(128, 1024);
BENCHMARK(BM_Reflect<false>)->Name("reflect/serial")->RangeMultiplier(2)->Range(128, 1024);
BENCHMARK(BM_Reflect<true>)->Name("reflect/omp")->RangeMultiplier(2)->Range(128, 1024);
BENCHMARK(BM_TikhonovCoefficients<false>)->Name("tikhonov_coefficients/serial")->RangeMultiplier(2)->Range(128, 1024);
BENCHMARK(BM_TikhonovCoefficients<true>)->Name("tikhonov_coefficients/omp")->RangeMultiplier(2)->Range(128, 1024);
BENCHMARK(BM_LCurve<false>)->Name("lcurve/serial")->RangeMultiplier(2)->Range(128, 512);
BENCHMARK(BM_LCurve<true>)->Name("lcurve/omp")->RangeMultiplier(2)->Range(128, 512);
BENCHMARK(BM_MonteCarlo<gradsurf::Execution::serial>)->Name("monte_carlo/serial")->Arg(48)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarlo<gradsurf::Execution::parallel>)->Name("monte_carlo/omp")->Arg(48)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
