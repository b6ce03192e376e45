// Serial reference against the OpenMP version of each cell kernel.
// Run with OMP_NUM_THREADS set to compare thread counts.

#include <benchmark/benchmark.h>

#include <complex>
#include <random>
#include <vector>

#include "mbo/grid.hpp"
#include "mbo/heat.hpp"
#include "mbo/kernels.hpp"

using namespace mbo;
namespace ks = mbo::kernels::serial;
namespace kp = mbo::kernels::parallel;

namespace {

GridSpec grid_for(const benchmark::State& state) { return GridSpec{2, static_cast<int>(state.range(0)), 1.0, true}; }

std::vector<double> noise(std::size_t n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

template <bool Parallel>
void threshold(benchmark::State& state) {
  const auto g = grid_for(state);
  const auto v = noise(g.size());
  std::vector<std::uint8_t> bits(g.size());
  for (auto _ : state) {
    Parallel ? kp::threshold(v, bits) : ks::threshold(v, bits);
    benchmark::DoNotOptimize(bits.data());
  }
  state.SetItemsProcessed(state.iterations() * g.size());
}

template <bool Parallel>
void sum(benchmark::State& state) {
  const auto v = noise(grid_for(state).size());
  for (auto _ : state) benchmark::DoNotOptimize(Parallel ? kp::sum(v) : ks::sum(v));
  state.SetItemsProcessed(state.iterations() * v.size());
}

template <bool Parallel>
void heat_symbol(benchmark::State& state) {
  const auto g = grid_for(state);
  std::vector<std::complex<double>> spec(kernels::spectrum_size(g), {1.0, 0.0});
  for (auto _ : state) {
    Parallel ? kp::heat_symbol(g, spec, 1e-6, 1.0) : ks::heat_symbol(g, spec, 1e-6, 1.0);
    benchmark::DoNotOptimize(spec.data());
  }
  state.SetItemsProcessed(state.iterations() * spec.size());
}

template <bool Parallel>
void box_smooth(benchmark::State& state) {
  const auto g = grid_for(state);
  const auto v = noise(g.size());
  std::vector<double> out(g.size());
  for (auto _ : state) {
    Parallel ? kp::box_smooth(g, v, out) : ks::box_smooth(g, v, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * g.size());
}

template <bool Parallel>
void segment_distance(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<Point> a(n), b(n), q(4096);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = {u(rng), u(rng), 0};
    b[i] = {a[i][0] + 0.01, a[i][1] + 0.01, 0};
  }
  for (auto& p : q) p = {u(rng), u(rng), 0};
  std::vector<double> d(q.size());
  std::vector<int> idx(q.size());
  for (auto _ : state) {
    Parallel ? kp::segment_distance(q, a, b, d, idx) : ks::segment_distance(q, a, b, d, idx);
    benchmark::DoNotOptimize(d.data());
  }
  state.SetItemsProcessed(state.iterations() * q.size() * n);
}

// the whole step, for scale
void diffuse(benchmark::State& state) {
  const auto g = grid_for(state);
  ScalarField f(g);
  f.values = noise(g.size());
  for (auto _ : state) benchmark::DoNotOptimize(heat::diffuse(f, 1e-4).values.data());
}

}  // namespace

BENCHMARK(threshold<false>)->Name("threshold/serial")->Arg(256)->Arg(1024);
BENCHMARK(threshold<true>)->Name("threshold/parallel")->Arg(256)->Arg(1024);
BENCHMARK(sum<false>)->Name("sum/serial")->Arg(256)->Arg(1024);
BENCHMARK(sum<true>)->Name("sum/parallel")->Arg(256)->Arg(1024);
BENCHMARK(heat_symbol<false>)->Name("heat_symbol/serial")->Arg(256)->Arg(1024);
BENCHMARK(heat_symbol<true>)->Name("heat_symbol/parallel")->Arg(256)->Arg(1024);
BENCHMARK(box_smooth<false>)->Name("box_smooth/serial")->Arg(256)->Arg(1024);
BENCHMARK(box_smooth<true>)->Name("box_smooth/parallel")->Arg(256)->Arg(1024);
BENCHMARK(segment_distance<false>)->Name("segment_distance/serial")->Arg(64)->Arg(512);
BENCHMARK(segment_distance<true>)->Name("segment_distance/parallel")->Arg(64)->Arg(512);
BENCHMARK(diffuse)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
