#pragma once

#include <array>
#include <cstddef>

namespace cjtk {

// Position in a vertex pool (model vertices, template vertices, or an import pool).
using Index = std::size_t;

// x, y, z. Real-world units without a transform, integer quanta with one.
using Vertex = std::array<double, 3>;

// Quantization record: real = stored * scale + translate, per axis.
struct Transform {
  std::array<double, 3> scale{1.0, 1.0, 1.0};
  std::array<double, 3> translate{0.0, 0.0, 0.0};

  bool operator==(const Transform&) const = default;
};

// [minx, miny, minz, maxx, maxy, maxz]
using Extent = std::array<double, 6>;

}  // namespace cjtk
