#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "cjtk/kernels.hpp"

namespace {

using cjtk::Index;
using cjtk::Transform;
using cjtk::Vertex;

std::vector<Vertex> make_vertices(std::size_t n) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> x(84000.0, 86000.0), y(446000.0, 448000.0), z(-5.0, 60.0);
  std::vector<Vertex> v(n);
  for (auto& p : v) p = {x(rng), y(rng), z(rng)};
  return v;
}

std::vector<Index> make_indices(std::size_t n, std::size_t range) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<Index> pick(0, range - 1);
  std::vector<Index> idx(n);
  for (auto& i : idx) i = pick(rng);
  return idx;
}

const Transform kTransform{{0.001, 0.001, 0.001}, {84000.0, 446000.0, -5.0}};

template <auto Kernel>
void BM_Quantize(benchmark::State& state) {
  const auto in = make_vertices(static_cast<std::size_t>(state.range(0)));
  std::vector<Vertex> out(in.size());
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(in, kTransform, out));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void BM_Dequantize(benchmark::State& state) {
  const auto in = make_vertices(static_cast<std::size_t>(state.range(0)));
  std::vector<Vertex> out(in.size());
  for (auto _ : state) {
    Kernel(in, kTransform, out);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void BM_Bounds(benchmark::State& state) {
  const auto in = make_vertices(static_cast<std::size_t>(state.range(0)));
  std::vector<std::uint8_t> mask(in.size(), 1);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(in, mask));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void BM_MarkUsed(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto idx = make_indices(n * 4, n);
  std::vector<std::uint8_t> used(n);
  for (auto _ : state) {
    std::fill(used.begin(), used.end(), 0);
    benchmark::DoNotOptimize(Kernel(idx, used));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 4);
}

namespace serial = cjtk::kernels::serial;
namespace parallel = cjtk::kernels::parallel;

}  // namespace

BENCHMARK(BM_Quantize<serial::quantize>)->Name("quantize/serial")->Range(1 << 12, 1 << 21);
BENCHMARK(BM_Quantize<parallel::quantize>)->Name("quantize/parallel")->Range(1 << 12, 1 << 21);
BENCHMARK(BM_Dequantize<serial::dequantize>)->Name("dequantize/serial")->Range(1 << 12, 1 << 21);
BENCHMARK(BM_Dequantize<parallel::dequantize>)->Name("dequantize/parallel")->Range(1 << 12, 1 << 21);
BENCHMARK(BM_Bounds<serial::bounds>)->Name("bounds/serial")->Range(1 << 12, 1 << 21);
BENCHMARK(BM_Bounds<parallel::bounds>)->Name("bounds/parallel")->Range(1 << 12, 1 << 21);
BENCHMARK(BM_MarkUsed<serial::mark_used>)->Name("mark_used/serial")->Range(1 << 12, 1 << 21);
BENCHMARK(BM_MarkUsed<parallel::mark_used>)->Name("mark_used/parallel")->Range(1 << 12, 1 << 21);

BENCHMARK_MAIN();
