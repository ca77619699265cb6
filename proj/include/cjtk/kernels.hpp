#pragma once

// Data-parallel vertex kernels. `serial` is the reference implementation the
// tests compare against; `parallel` is the OpenMP version the library uses.
// Both namespaces expose identical signatures and must agree bit for bit.

#include <cstdint>
#include <span>

#include "cjtk/types.hpp"

namespace cjtk::kernels {

struct Bounds {
  Vertex min{0, 0, 0};
  Vertex max{0, 0, 0};
  std::size_t count = 0;  // vertices that contributed
};

namespace serial {

// out[i] = round_half_away((in[i] - translate) / scale); returns max |quantum|.
double quantize(std::span<const Vertex> in, const Transform& t, std::span<Vertex> out);
// out[i] = in[i] * scale + translate
void dequantize(std::span<const Vertex> in, const Transform& t, std::span<Vertex> out);
// Per-axis min/max over vertices whose mask entry is non-zero (all when the mask is empty).
Bounds bounds(std::span<const Vertex> v, std::span<const std::uint8_t> mask);
// used[i] = 1 for each index below used.size(); returns how many were out of range.
std::size_t mark_used(std::span<const Index> indices, std::span<std::uint8_t> used);

}  // namespace serial

namespace parallel {

// out[i] = round_half_away((in[i] - translate) / scale); returns max |quantum|.
double quantize(std::span<const Vertex> in, const Transform& t, std::span<Vertex> out);
// out[i] = in[i] * scale + translate
void dequantize(std::span<const Vertex> in, const Transform& t, std::span<Vertex> out);
// Per-axis min/max over vertices whose mask entry is non-zero (all when the mask is empty).
Bounds bounds(std::span<const Vertex> v, std::span<const std::uint8_t> mask);
// used[i] = 1 for each index below used.size(); returns how many were out of range.
std::size_t mark_used(std::span<const Index> indices, std::span<std::uint8_t> used);

}  // namespace parallel

}  // namespace cjtk::kernels
