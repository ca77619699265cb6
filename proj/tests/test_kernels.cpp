#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cjtk/kernels.hpp"

using namespace cjtk;
namespace serial = cjtk::kernels::serial;
namespace parallel = cjtk::kernels::parallel;

namespace {

std::vector<Vertex> random_vertices(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-1e5, 1e5);
  std::vector<Vertex> v(n);
  for (auto& p : v) p = {d(rng), d(rng), d(rng) * 1e-3};
  return v;
}

}  // namespace

TEST(Kernels, QuantizeAgreesBitForBit) {
  const auto in = random_vertices(100003, 1);
  const Transform t{{0.001, 0.01, 0.1}, {-1e5, -1e5, -100}};
  std::vector<Vertex> a(in.size()), b(in.size());
  const double ma = serial::quantize(in, t, a);
  const double mb = parallel::quantize(in, t, b);
  EXPECT_EQ(ma, mb);
  EXPECT_EQ(a, b);
}

TEST(Kernels, QuantizeRoundsHalfAwayFromZero) {
  const std::vector<Vertex> in = {{0.5, -0.5, 1.5}, {2.5, -2.5, 0.49}};
  std::vector<Vertex> out(2);
  serial::quantize(in, Transform{}, out);
  EXPECT_EQ(out[0], (Vertex{1, -1, 2}));
  EXPECT_EQ(out[1], (Vertex{3, -3, 0}));
  parallel::quantize(in, Transform{}, out);
  EXPECT_EQ(out[0], (Vertex{1, -1, 2}));
}

TEST(Kernels, DequantizeAgrees) {
  const auto in = random_vertices(50001, 2);
  const Transform t{{0.01, 0.01, 0.01}, {4424648.79, 5482614.69, 310.19}};
  std::vector<Vertex> a(in.size()), b(in.size());
  serial::dequantize(in, t, a);
  parallel::dequantize(in, t, b);
  EXPECT_EQ(a, b);
}

TEST(Kernels, BoundsWithAndWithoutMask) {
  const auto in = random_vertices(70001, 3);
  std::vector<std::uint8_t> mask(in.size());
  for (std::size_t i = 0; i < mask.size(); i += 3) mask[i] = 1;
  for (const auto& m : {std::span<const std::uint8_t>{}, std::span<const std::uint8_t>(mask)}) {
    const auto a = serial::bounds(in, m);
    const auto b = parallel::bounds(in, m);
    EXPECT_EQ(a.min, b.min);
    EXPECT_EQ(a.max, b.max);
    EXPECT_EQ(a.count, b.count);
  }
  EXPECT_EQ(serial::bounds(in, mask).count, (in.size() + 2) / 3);
}

TEST(Kernels, BoundsOfNothing) {
  const std::vector<Vertex> in = {{1, 2, 3}};
  const std::vector<std::uint8_t> mask = {0};
  EXPECT_EQ(serial::bounds(in, mask).count, 0u);
  EXPECT_EQ(parallel::bounds(in, mask).count, 0u);
}

TEST(Kernels, MarkUsedCountsOutOfRange) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<Index> d(0, 1099);
  std::vector<Index> idx(200000);
  for (auto& i : idx) i = d(rng);
  std::vector<std::uint8_t> a(1000), b(1000);
  const auto bad_a = serial::mark_used(idx, a);
  const auto bad_b = parallel::mark_used(idx, b);
  EXPECT_EQ(bad_a, bad_b);
  EXPECT_EQ(a, b);
  std::size_t expected_bad = 0;
  for (Index i : idx) expected_bad += i >= 1000;
  EXPECT_EQ(bad_a, expected_bad);
}
