#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "cjtk/model.hpp"

namespace cjtk::geo {

struct QuantizationParams {
  int important_digits = 3;  // 0..12 decimal digits kept
  bool requantize = false;   // allow a model that already has a transform
};

// scale = 10^-d on every axis, translate = per-axis minimum of all vertices,
// v' = round_half_away((v - translate) / scale). Template vertices are
// template-local and left untouched.
CityModel quantize(const CityModel& model, const QuantizationParams& params);

// Quantizes a real-coordinate model with a caller-chosen transform.
CityModel quantize_with(const CityModel& model, const Transform& transform);

// Replaces vertices by their real-world coordinates and drops the transform.
CityModel dequantize(const CityModel& model);

// Merges vertices within `tolerance` (Chebyshev distance in stored units) into
// their first occurrence and remaps every boundary index.
CityModel dedupe_vertices(const CityModel& model, double tolerance);

// Drops vertices that no geometry references and remaps indices.
CityModel remove_orphan_vertices(const CityModel& model);

struct InstantiatedGeometry {
  Geometry geometry;              // boundaries index `vertices`
  std::vector<Vertex> vertices;   // world coordinates
};

// w = R + M * [p, 1] (first three rows), R the real-world reference point and
// M the row-major 4x4 matrix applied to template-local vertex p.
InstantiatedGeometry instantiate_template(const CityModel& model, std::string_view object_id,
                                          std::size_t geometry_index);
InstantiatedGeometry instantiate(const CityModel& model, const Geometry& instance);

// Bounding box of referenced vertices in real-world units, template
// instances expanded. Throws Error(EmptyModel) when nothing is referenced.
Extent compute_extent(const CityModel& model);

// used[i] != 0 iff vertex i is referenced by a boundary or an instance
// reference point.
std::vector<std::uint8_t> referenced_vertices(const CityModel& model);

// Keeps vertices whose flag is set, in their original order, and rebases
// every index. Indices of dropped vertices must not occur.
CityModel compact_vertices(const CityModel& model, std::span<const std::uint8_t> keep);

}  // namespace cjtk::geo
