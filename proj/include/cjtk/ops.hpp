#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cjtk/model.hpp"

namespace cjtk::ops {

struct IdSelection {
  std::vector<std::string> ids;
};
struct TypeSelection {
  std::vector<std::string> types;
};
struct BBoxSelection {
  std::array<double, 4> bbox{};  // minx, miny, maxx, maxy in real-world XY
};
using Selector = std::variant<IdSelection, TypeSelection, BBoxSelection>;

// Selected objects plus all their descendants. Parents outside the selection
// are dropped from parents lists, the vertex pool is rebuilt from referenced
// vertices in original order, and the template bank / appearance are kept
// only if something still references them.
//
// Bbox selection picks 1st-level objects whose extent centre (children
// included) lies inside the box; objects without any coordinates are never
// picked by a box.
CityModel subset(const CityModel& model, const Selector& selector);

enum class IdPolicy { Error, Suffix };

// Union of the inputs. Identical transforms are kept as is; otherwise all
// inputs are dequantized and re-quantized with the finest input scale.
// Template banks and appearances are concatenated with index offsets
// (identical banks are shared). Exact duplicate vertices are merged.
CityModel merge(std::span<const CityModel> models, IdPolicy policy);

struct GridStrategy {
  int nx = 1;
  int ny = 1;
};
struct ByTypeStrategy {};
struct RandomStrategy {
  int k = 1;
  std::uint64_t seed = 0;
};
using PartitionStrategy = std::variant<GridStrategy, ByTypeStrategy, RandomStrategy>;

struct Part {
  std::string id;  // "r<row>c<col>", the type name, or a zero-padded ordinal
  CityModel model;
};

// Every 1st-level object travels with its descendants into exactly one part.
// A CityObjectGroup follows its first member. Empty parts are omitted.
std::vector<Part> partition(const CityModel& model, const PartitionStrategy& strategy);

// "<stem>_<part-id>.json"
std::string part_file_name(std::string_view stem, std::string_view part_id);

// Every texture image becomes new_base + its filename component.
CityModel update_texture_paths(const CityModel& model, std::string_view new_base);

// geographicalExtent, presentLoDs, textures/materials presence and the
// extension list are recomputed; other metadata members are kept.
CityModel refresh_metadata(const CityModel& model);

struct Stats {
  std::size_t city_objects = 0;
  std::map<std::string, std::size_t> object_types;
  std::map<std::string, std::size_t> geometry_kinds;
  std::size_t vertices = 0;
  std::size_t templates = 0;
  std::size_t minified_bytes = 0;
};

Stats stats(const CityModel& model);
Json to_json(const Stats& s);

// Transitive closure of ids over "children".
std::vector<std::string> with_descendants(const CityModel& model, std::span<const std::string> ids);

// Ids of objects that have no parents.
std::vector<std::string> first_level_ids(const CityModel& model);

}  // namespace cjtk::ops
