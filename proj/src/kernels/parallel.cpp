#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include <omp.h>

#include "cjtk/kernels.hpp"

namespace cjtk::kernels::parallel {
namespace {

using Signed = std::int64_t;

Signed ssize(std::size_t n) { return static_cast<Signed>(n); }

}  // namespace

double quantize(std::span<const Vertex> in, const Transform& t, std::span<Vertex> out) {
  double worst = 0.0;
  const Signed n = ssize(in.size());
#pragma omp parallel for reduction(max : worst) schedule(static)
  for (Signed i = 0; i < n; ++i) {
    for (int a = 0; a < 3; ++a) {
      const double q = std::round((in[i][a] - t.translate[a]) / t.scale[a]);
      out[i][a] = q;
      worst = std::max(worst, std::fabs(q));
    }
  }
  return worst;
}

void dequantize(std::span<const Vertex> in, const Transform& t, std::span<Vertex> out) {
  const Signed n = ssize(in.size());
#pragma omp parallel for schedule(static)
  for (Signed i = 0; i < n; ++i) {
    for (int a = 0; a < 3; ++a) out[i][a] = in[i][a] * t.scale[a] + t.translate[a];
  }
}

Bounds bounds(std::span<const Vertex> v, std::span<const std::uint8_t> mask) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  double lo0 = inf, lo1 = inf, lo2 = inf;
  double hi0 = -inf, hi1 = -inf, hi2 = -inf;
  std::size_t count = 0;
  const Signed n = ssize(v.size());
  const bool all = mask.empty();
#pragma omp parallel for schedule(static) reduction(min : lo0, lo1, lo2) reduction(max : hi0, hi1, hi2) \
    reduction(+ : count)
  for (Signed i = 0; i < n; ++i) {
    if (!all && !mask[i]) continue;
    lo0 = std::min(lo0, v[i][0]);
    lo1 = std::min(lo1, v[i][1]);
    lo2 = std::min(lo2, v[i][2]);
    hi0 = std::max(hi0, v[i][0]);
    hi1 = std::max(hi1, v[i][1]);
    hi2 = std::max(hi2, v[i][2]);
    ++count;
  }
  Bounds b;
  b.count = count;
  if (count > 0) {
    b.min = {lo0, lo1, lo2};
    b.max = {hi0, hi1, hi2};
  }
  return b;
}

std::size_t mark_used(std::span<const Index> indices, std::span<std::uint8_t> used) {
  std::size_t bad = 0;
  const Signed n = ssize(indices.size());
  const std::size_t limit = used.size();
#pragma omp parallel for schedule(static) reduction(+ : bad)
  for (Signed k = 0; k < n; ++k) {
    const Index i = indices[k];
    if (i < limit) {
#pragma omp atomic write
      used[i] = 1;
    } else {
      ++bad;
    }
  }
  return bad;
}

}  // namespace cjtk::kernels::parallel
