#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "bfamily/spectral.hpp"

using namespace bfam;

namespace {

Field gaussian(std::size_t n) {
  return Field::from_function(make_grid(20.0, n), [](double x) { return std::exp(-x * x); });
}

void BM_Derivative(benchmark::State& state) {
  const auto f = gaussian(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(derivative(f, 1));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Derivative)->RangeMultiplier(2)->Range(256, 4096)->Complexity(benchmark::oNLogN);

void BM_HelmholtzInv(benchmark::State& state) {
  const auto f = gaussian(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(helmholtz_inv(f));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_HelmholtzInv)->RangeMultiplier(2)->Range(256, 4096)->Complexity(benchmark::oNLogN);

void BM_DxHelmholtzInv(benchmark::State& state) {
  const auto f = gaussian(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dx_helmholtz_inv(f));
}
BENCHMARK(BM_DxHelmholtzInv)->Arg(1024)->Arg(4096);

void BM_Dealias(benchmark::State& state) {
  const auto f = gaussian(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dealias(f));
}
BENCHMARK(BM_Dealias)->Arg(1024)->Arg(4096);

// Direct convolution is the O(N^2) reference route.
void BM_GreenConvolve(benchmark::State& state) {
  const auto f = gaussian(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(green_convolve(f, Kernel::P));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GreenConvolve)->RangeMultiplier(2)->Range(256, 2048)->Complexity(benchmark::oNSquared);

void BM_Interpolate(benchmark::State& state) {
  const auto f = gaussian(1024);
  std::vector<double> points(state.range(0));
  for (std::size_t i = 0; i < points.size(); ++i) points[i] = -15.0 + 30.0 * (i + 0.37) / points.size();
  for (auto _ : state) benchmark::DoNotOptimize(interpolate(f, points));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Interpolate)->Arg(64)->Arg(256)->Arg(1024);

void BM_SobolevNorm(benchmark::State& state) {
  const auto f = gaussian(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sobolev_norm_sq(f, 2.0));
}
BENCHMARK(BM_SobolevNorm)->Arg(1024)->Arg(4096);

}  // namespace
