// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "netdyn/graph.hpp"
#include "netdyn/kernels.hpp"
#include "netdyn/matrix.hpp"

namespace {

using netdyn::Matrix;
using netdyn::Vector;

Matrix random_matrix(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Matrix m(n, n);
  for (double& x : m.data()) x = netdyn::uniform01(rng()) - 0.5;
  return m;
}

Vector decay(std::size_t n) {
  Vector f(n);
  for (std::size_t k = 0; k < n; ++k) f[k] = std::exp(-0.01 * static_cast<double>(k));
  return f;
}

std::vector<std::size_t> cells(std::size_t n, std::size_t k) {
  std::vector<std::size_t> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = (i * 7) % k;
  return c;
}

template <Matrix (*Gemm)(const Matrix&, const Matrix&)>
void bm_gemm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix a = random_matrix(n, 1), b = random_matrix(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(Gemm(a, b));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n * n));
}

template <Matrix (*Spectral)(const Matrix&, std::span<const double>, std::span<const double>,
                             std::span<const double>)>
void bm_spectral(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix v = random_matrix(n, 3);
  const Vector f = decay(n);
  const Vector scale(n, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(Spectral(v, f, scale, scale));
}

template <Matrix (*Sandwich)(const Matrix&, std::span<const std::size_t>, std::size_t)>
void bm_sandwich(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix m = random_matrix(n, 4);
  const auto c = cells(n, 8);
  for (auto _ : state) benchmark::DoNotOptimize(Sandwich(m, c, 8));
}

namespace serial = netdyn::kernels::serial;
namespace omp = netdyn::kernels::omp;

BENCHMARK(bm_gemm<serial::gemm>)->Name("gemm/serial")->RangeMultiplier(2)->Range(64, 512);
BENCHMARK(bm_gemm<omp::gemm>)->Name("gemm/omp")->RangeMultiplier(2)->Range(64, 512)->UseRealTime();
BENCHMARK(bm_spectral<serial::spectral_function>)->Name("spectral_function/serial")->RangeMultiplier(2)->Range(64, 512);
BENCHMARK(bm_spectral<omp::spectral_function>)
    ->Name("spectral_function/omp")
    ->RangeMultiplier(2)
    ->Range(64, 512)
    ->UseRealTime();
BENCHMARK(bm_sandwich<serial::cell_sandwich>)->Name("cell_sandwich/serial")->RangeMultiplier(4)->Range(256, 2048);
BENCHMARK(bm_sandwich<omp::cell_sandwich>)
    ->Name("cell_sandwich/omp")
    ->RangeMultiplier(4)
    ->Range(256, 2048)
    ->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
