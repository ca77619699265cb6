#include <algorithm>
#include <cmath>

#include "cjtk/kernels.hpp"

namespace cjtk::kernels::serial {

double quantize(std::span<const Vertex> in, const Transform& t, std::span<Vertex> out) {
  double worst = 0.0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    for (int a = 0; a < 3; ++a) {
      const double q = std::round((in[i][a] - t.translate[a]) / t.scale[a]);
      out[i][a] = q;
      worst = std::max(worst, std::fabs(q));
    }
  }
  return worst;
}

void dequantize(std::span<const Vertex> in, const Transform& t, std::span<Vertex> out) {
  for (std::size_t i = 0; i < in.size(); ++i) {
    for (int a = 0; a < 3; ++a) out[i][a] = in[i][a] * t.scale[a] + t.translate[a];
  }
}

Bounds bounds(std::span<const Vertex> v, std::span<const std::uint8_t> mask) {
  Bounds b;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!mask.empty() && !mask[i]) continue;
    if (b.count == 0) {
      b.min = b.max = v[i];
    } else {
      for (int a = 0; a < 3; ++a) {
        b.min[a] = std::min(b.min[a], v[i][a]);
        b.max[a] = std::max(b.max[a], v[i][a]);
      }
    }
    ++b.count;
  }
  return b;
}

std::size_t mark_used(std::span<const Index> indices, std::span<std::uint8_t> used) {
  std::size_t bad = 0;
  for (Index i : indices) {
    if (i < used.size()) {
      used[i] = 1;
    } else {
      ++bad;
    }
  }
  return bad;
}

}  // namespace cjtk::kernels::serial
