#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "cjtk/json_util.hpp"
#include "cjtk/types.hpp"

namespace cjtk {

enum class GeometryKind {
  MultiPoint,
  MultiLineString,
  MultiSurface,
  CompositeSurface,
  Solid,
  MultiSolid,
  CompositeSolid,
  GeometryInstance,
};

std::string_view to_string(GeometryKind kind);
std::optional<GeometryKind> parse_geometry_kind(std::string_view name);

// Required nesting depth of the boundaries array (list levels above the
// integer indices). Throws Error(UnknownGeometryKind) for GeometryInstance.
int boundary_depth(GeometryKind kind);
// Same, by type name; unknown names and "GeometryInstance" throw.
int boundary_depth(std::string_view kind_name);

// Boundary arrays, one alternative per depth (alternative i has depth i + 1).
// A MultiPoint uses the depth-1 list directly as its point list and a
// MultiLineString uses the depth-2 list as its list of linestrings.
using Ring = std::vector<Index>;
using Surface = std::vector<Ring>;  // exterior ring first, then interior rings
using Shell = std::vector<Surface>;
using SolidShells = std::vector<Shell>;  // exterior shell first
using Boundaries = std::variant<Ring, Surface, Shell, SolidShells, std::vector<SolidShells>>;

inline int depth_of(const Boundaries& b) { return static_cast<int>(b.index()) + 1; }

template <class F>
void for_each_index(const std::vector<Index>& list, F&& f) {
  for (Index i : list) f(i);
}
template <class T, class F>
void for_each_index(const std::vector<T>& list, F&& f) {
  for (const auto& child : list) for_each_index(child, f);
}
template <class F>
void for_each_index(std::vector<Index>& list, F&& f) {
  for (Index& i : list) f(i);
}
template <class T, class F>
void for_each_index(std::vector<T>& list, F&& f) {
  for (auto& child : list) for_each_index(child, f);
}
template <class F>
void for_each_index(const Boundaries& b, F&& f) {
  std::visit([&](const auto& list) { for_each_index(list, f); }, b);
}
template <class F>
void for_each_index(Boundaries& b, F&& f) {
  std::visit([&](auto& list) { for_each_index(list, f); }, b);
}

// Nested array of (index | null), used for semantic values.
struct ValueTree {
  using List = std::vector<ValueTree>;
  std::variant<std::monostate, Index, List> node;

  static ValueTree null() { return {}; }
  static ValueTree leaf(Index i) { return {i}; }
  static ValueTree list(List items) { return {std::move(items)}; }

  bool is_null() const { return std::holds_alternative<std::monostate>(node); }
  bool is_leaf() const { return std::holds_alternative<Index>(node); }
  bool is_list() const { return std::holds_alternative<List>(node); }
  Index index() const { return std::get<Index>(node); }
  const List& items() const { return std::get<List>(node); }
  List& items() { return std::get<List>(node); }
};

bool operator==(const ValueTree& a, const ValueTree& b);

struct SemanticSurface {
  std::string type;
  Json attributes = Json::object();  // every member other than "type", verbatim
};

struct Semantics {
  std::vector<SemanticSurface> surfaces;
  ValueTree values;
  Json extra = Json::object();
};

struct GeometryInstance {
  std::size_t template_index = 0;
  Index reference_point = 0;
  // Row-major 4x4; kept as read so malformed matrices can be reported.
  std::vector<double> matrix{1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};
};

struct Geometry {
  GeometryKind kind = GeometryKind::MultiSurface;
  std::optional<double> lod;
  Boundaries boundaries;
  std::optional<Semantics> semantics;
  Json material;  // null when absent: {theme: {"value": i} | {"values": [...]}}
  Json texture;   // null when absent: {theme: {"values": [...]}}
  std::optional<GeometryInstance> instance;  // set iff kind == GeometryInstance
  Json extra = Json::object();
};

struct CityObject {
  std::string type;
  Json attributes;  // null when absent; otherwise carried opaquely
  std::optional<std::vector<std::string>> parents;
  std::optional<std::vector<std::string>> children;
  std::vector<Geometry> geometry;
  Json extra = Json::object();
};

// Insertion-ordered id -> CityObject. Repeated ids can be stored (a
// document may contain them); lookups return the first entry.
class CityObjectMap {
 public:
  using Entry = std::pair<std::string, CityObject>;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  auto begin() { return entries_.begin(); }
  auto end() { return entries_.end(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  bool contains(std::string_view id) const;
  const CityObject* find(std::string_view id) const;
  CityObject* find(std::string_view id);
  const CityObject& at(std::string_view id) const;
  CityObject& at(std::string_view id);

  // Appends; returns false if the id was already present.
  bool insert(std::string id, CityObject object);
  void erase(std::string_view id);
  void clear();

 private:
  void reindex();

  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> first_;
};

struct TemplateBank {
  std::vector<Geometry> templates;
  std::vector<Vertex> vertices;  // template-local coordinates
  Json extra = Json::object();
};

struct Texture {
  std::string image;
  Json attributes = Json::object();  // every member other than "image"
};

struct Appearance {
  std::vector<Json> materials;
  std::vector<Texture> textures;
  std::vector<std::array<double, 2>> vertices_texture;
  Json extra = Json::object();
};

struct ExtensionRef {
  std::string url;
  std::string version;
};

struct CityModel {
  std::string version = "1.0";
  CityObjectMap city_objects;
  std::vector<Vertex> vertices;
  std::optional<Transform> transform;
  std::optional<TemplateBank> templates;
  std::optional<Appearance> appearance;
  Json metadata;  // null when absent
  std::map<std::string, ExtensionRef> extensions;
  Json extra = Json::object();  // unknown root members, verbatim
};

// Vertex coordinates with the transform applied, if any.
Vertex real_world_vertex(const CityModel& model, Index index);

// Known 1st- and 2nd-level core type names.
bool is_core_type(std::string_view type);
bool is_second_level_type(std::string_view type);
inline bool is_extension_name(std::string_view name) { return !name.empty() && name.front() == '+'; }
bool is_known_semantic_type(std::string_view type);

// Number of surfaces (points for MultiPoint, linestrings for
// MultiLineString) at each position of the surface level, as a tree
// shaped like the semantic values array is expected to be.
ValueTree surface_shape(const Boundaries& boundaries);

// Describes why a semantics block does not fit its geometry, or nullopt.
std::optional<std::string> semantics_problem(const Geometry& geometry);

// "EPSG:7415" and "urn:ogc:def:crs:EPSG::7415" forms; nullopt otherwise.
std::optional<int> parse_epsg(std::string_view text);
std::optional<std::string> reference_system(const CityModel& model);

// Semantic equality: object order and JSON key order are ignored.
bool equivalent(const Geometry& a, const Geometry& b);
bool equivalent(const CityObject& a, const CityObject& b);
bool equivalent(const CityModel& a, const CityModel& b);

}  // namespace cjtk
