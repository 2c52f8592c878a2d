// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "ssalab/kernels.hpp"

namespace k = ssalab::kernels;

namespace {

std::vector<double> random_vector(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist;
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

// Window is 0.35 N, as in the experiments.
struct Shape {
  std::size_t N, L, K;
  explicit Shape(std::size_t n) : N(n), L(n * 35 / 100), K(n - n * 35 / 100 + 1) {}
};

template <auto Kernel>
void hankel_apply(benchmark::State& state) {
  const Shape s(static_cast<std::size_t>(state.range(0)));
  const auto series = random_vector(s.N, 1), x = random_vector(s.K, 2);
  std::vector<double> out(s.L);
  for (auto _ : state) {
    Kernel(series, s.L, x, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(s.L * s.K));
}

template <auto Kernel>
void hankel_apply_t(benchmark::State& state) {
  const Shape s(static_cast<std::size_t>(state.range(0)));
  const auto series = random_vector(s.N, 1), y = random_vector(s.L, 3);
  std::vector<double> out(s.K);
  for (auto _ : state) {
    Kernel(series, s.L, y, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(s.L * s.K));
}

template <auto Kernel>
void outer_hankelize(benchmark::State& state) {
  const Shape s(static_cast<std::size_t>(state.range(0)));
  const auto u = random_vector(s.L, 4), v = random_vector(s.K, 5);
  std::vector<double> out(s.N);
  for (auto _ : state) {
    Kernel(u, v, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(s.L * s.K));
}

template <auto Kernel>
void dense_apply(benchmark::State& state) {
  const Shape s(static_cast<std::size_t>(state.range(0)));
  const auto m = random_vector(s.L * s.K, 6), x = random_vector(s.K, 7);
  std::vector<double> out(s.L);
  for (auto _ : state) {
    Kernel(m, s.L, s.K, x, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(s.L * s.K));
}

}  // namespace

BENCHMARK(hankel_apply<k::serial::hankel_apply>)->Name("hankel_apply/serial")->RangeMultiplier(4)->Range(256, 16384)->UseRealTime();
BENCHMARK(hankel_apply<k::parallel::hankel_apply>)->Name("hankel_apply/omp")->RangeMultiplier(4)->Range(256, 16384)->UseRealTime();
BENCHMARK(hankel_apply_t<k::serial::hankel_apply_t>)->Name("hankel_apply_t/serial")->RangeMultiplier(4)->Range(256, 16384)->UseRealTime();
BENCHMARK(hankel_apply_t<k::parallel::hankel_apply_t>)->Name("hankel_apply_t/omp")->RangeMultiplier(4)->Range(256, 16384)->UseRealTime();
BENCHMARK(outer_hankelize<k::serial::outer_hankelize>)->Name("outer_hankelize/serial")->RangeMultiplier(4)->Range(256, 16384)->UseRealTime();
BENCHMARK(outer_hankelize<k::parallel::outer_hankelize>)->Name("outer_hankelize/omp")->RangeMultiplier(4)->Range(256, 16384)->UseRealTime();
BENCHMARK(dense_apply<k::serial::dense_apply>)->Name("dense_apply/serial")->RangeMultiplier(4)->Range(256, 4096)->UseRealTime();
BENCHMARK(dense_apply<k::parallel::dense_apply>)->Name("dense_apply/omp")->RangeMultiplier(4)->Range(256, 4096)->UseRealTime();

BENCHMARK_MAIN();
