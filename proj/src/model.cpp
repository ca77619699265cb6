#include "cjtk/model.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <set>

#include "cjtk/error.hpp"

namespace cjtk {
namespace {

constexpr std::array<std::string_view, 14> kFirstLevelTypes = {
    "Building", "Bridge", "CityObjectGroup", "CityFurniture", "GenericCityObject",
    "LandUse", "PlantCover", "Railway", "Road", "SolitaryVegetationObject",
    "TINRelief", "TransportSquare", "Tunnel", "WaterBody"};

constexpr std::array<std::string_view, 7> kSecondLevelTypes = {
    "BuildingPart", "BuildingInstallation", "BridgePart", "BridgeInstallation",
    "BridgeConstructionElement", "TunnelPart", "TunnelInstallation"};

constexpr std::array<std::string_view, 13> kSemanticTypes = {
    "RoofSurface", "GroundSurface", "WallSurface", "ClosureSurface",
    "OuterCeilingSurface", "OuterFloorSurface", "Window", "Door",
    "WaterSurface", "WaterGroundSurface", "WaterClosureSurface",
    "TrafficArea", "AuxiliaryTrafficArea"};

constexpr std::array<std::pair<GeometryKind, std::string_view>, 8> kKindNames = {{
    {GeometryKind::MultiPoint, "MultiPoint"},
    {GeometryKind::MultiLineString, "MultiLineString"},
    {GeometryKind::MultiSurface, "MultiSurface"},
    {GeometryKind::CompositeSurface, "CompositeSurface"},
    {GeometryKind::Solid, "Solid"},
    {GeometryKind::MultiSolid, "MultiSolid"},
    {GeometryKind::CompositeSolid, "CompositeSolid"},
    {GeometryKind::GeometryInstance, "GeometryInstance"},
}};

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& set, std::string_view s) {
  return std::find(set.begin(), set.end(), s) != set.end();
}

ValueTree surface_counts(const std::vector<Index>& points) {
  return ValueTree::list(ValueTree::List(points.size()));
}

template <class T>
ValueTree surface_counts(const std::vector<std::vector<T>>& list) {
  // Lists of rings/linestrings are the surface level.
  if constexpr (std::is_same_v<T, Index>) {
    return ValueTree::list(ValueTree::List(list.size()));
  } else if constexpr (std::is_same_v<T, Ring>) {
    return ValueTree::list(ValueTree::List(list.size()));
  } else {
    ValueTree::List out;
    out.reserve(list.size());
    for (const auto& child : list) out.push_back(surface_counts(child));
    return ValueTree::list(std::move(out));
  }
}

std::optional<std::string> match_shape(const ValueTree& values, const ValueTree& shape,
                                       std::size_t surfaces, const std::string& where) {
  if (values.is_null()) return std::nullopt;
  if (shape.is_null()) {
    // surface level: one index (or null) per surface
    if (!values.is_leaf()) return "expected an index or null at " + where;
    if (values.index() >= surfaces) {
      return "value " + std::to_string(values.index()) + " at " + where + " exceeds " +
             std::to_string(surfaces) + " surfaces";
    }
    return std::nullopt;
  }
  if (!values.is_list()) return "expected an array at " + where;
  const auto& v = values.items();
  const auto& s = shape.items();
  if (v.size() != s.size()) {
    return "array at " + where + " has " + std::to_string(v.size()) + " entries, boundaries have " +
           std::to_string(s.size());
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (auto p = match_shape(v[i], s[i], surfaces, path_join(where, i))) return p;
  }
  return std::nullopt;
}

bool equal_optional_strings(const std::optional<std::vector<std::string>>& a,
                            const std::optional<std::vector<std::string>>& b) {
  const auto& ea = a ? *a : std::vector<std::string>{};
  const auto& eb = b ? *b : std::vector<std::string>{};
  return ea == eb;
}

bool equal_json_or_absent(const Json& a, const Json& b) {
  auto empty = [](const Json& j) { return j.is_null() || (j.is_object() && j.empty()); };
  if (empty(a) && empty(b)) return true;
  return semantic_equal(a, b);
}

}  // namespace

std::string_view to_string(GeometryKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "Unknown";
}

std::optional<GeometryKind> parse_geometry_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

int boundary_depth(GeometryKind kind) {
  switch (kind) {
    case GeometryKind::MultiPoint: return 1;
    case GeometryKind::MultiLineString: return 2;
    case GeometryKind::MultiSurface:
    case GeometryKind::CompositeSurface: return 3;
    case GeometryKind::Solid: return 4;
    case GeometryKind::MultiSolid:
    case GeometryKind::CompositeSolid: return 5;
    case GeometryKind::GeometryInstance: break;
  }
  throw Error(Code::UnknownGeometryKind, "", "no boundary depth for " + std::string(to_string(kind)));
}

int boundary_depth(std::string_view kind_name) {
  auto kind = parse_geometry_kind(kind_name);
  if (!kind) throw Error(Code::UnknownGeometryKind, "", "unknown geometry type '" + std::string(kind_name) + "'");
  return boundary_depth(*kind);
}

bool operator==(const ValueTree& a, const ValueTree& b) {
  if (a.node.index() != b.node.index()) return false;
  if (a.is_leaf()) return a.index() == b.index();
  if (a.is_list()) return a.items() == b.items();
  return true;
}

bool CityObjectMap::contains(std::string_view id) const { return first_.count(std::string(id)) != 0; }

const CityObject* CityObjectMap::find(std::string_view id) const {
  auto it = first_.find(std::string(id));
  return it == first_.end() ? nullptr : &entries_[it->second].second;
}

CityObject* CityObjectMap::find(std::string_view id) {
  auto it = first_.find(std::string(id));
  return it == first_.end() ? nullptr : &entries_[it->second].second;
}

const CityObject& CityObjectMap::at(std::string_view id) const {
  if (const auto* o = find(id)) return *o;
  throw Error(Code::UnknownId, "CityObjects", "no city object '" + std::string(id) + "'");
}

CityObject& CityObjectMap::at(std::string_view id) {
  if (auto* o = find(id)) return *o;
  throw Error(Code::UnknownId, "CityObjects", "no city object '" + std::string(id) + "'");
}

bool CityObjectMap::insert(std::string id, CityObject object) {
  const bool fresh = first_.emplace(id, entries_.size()).second;
  entries_.emplace_back(std::move(id), std::move(object));
  return fresh;
}

void CityObjectMap::erase(std::string_view id) {
  std::erase_if(entries_, [&](const Entry& e) { return e.first == id; });
  reindex();
}

void CityObjectMap::clear() {
  entries_.clear();
  first_.clear();
}

void CityObjectMap::reindex() {
  first_.clear();
  for (std::size_t i = 0; i < entries_.size(); ++i) first_.emplace(entries_[i].first, i);
}

Vertex real_world_vertex(const CityModel& model, Index index) {
  if (index >= model.vertices.size()) {
    throw Error(Code::VertexIndexOutOfRange, "vertices",
                "index " + std::to_string(index) + " with " + std::to_string(model.vertices.size()) +
                    " vertices");
  }
  Vertex v = model.vertices[index];
  if (model.transform) {
    for (int a = 0; a < 3; ++a) v[a] = v[a] * model.transform->scale[a] + model.transform->translate[a];
  }
  return v;
}

bool is_core_type(std::string_view type) {
  return contains(kFirstLevelTypes, type) || contains(kSecondLevelTypes, type);
}

bool is_second_level_type(std::string_view type) { return contains(kSecondLevelTypes, type); }

bool is_known_semantic_type(std::string_view type) {
  return contains(kSemanticTypes, type) || is_extension_name(type);
}

ValueTree surface_shape(const Boundaries& boundaries) {
  return std::visit([](const auto& list) { return surface_counts(list); }, boundaries);
}

std::optional<std::string> semantics_problem(const Geometry& geometry) {
  if (!geometry.semantics || geometry.instance) return std::nullopt;
  const Semantics& sem = *geometry.semantics;
  return match_shape(sem.values, surface_shape(geometry.boundaries), sem.surfaces.size(), "values");
}

std::optional<int> parse_epsg(std::string_view text) {
  std::string_view digits;
  if (text.starts_with("EPSG:")) {
    digits = text.substr(5);
  } else if (text.starts_with("urn:ogc:def:crs:EPSG:")) {
    digits = text.substr(text.rfind(':') + 1);
  } else if (text.starts_with("http://www.opengis.net/def/crs/EPSG/")) {
    digits = text.substr(text.rfind('/') + 1);
  } else {
    return std::nullopt;
  }
  int code = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), code);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty() || code <= 0) {
    return std::nullopt;
  }
  return code;
}

std::optional<std::string> reference_system(const CityModel& model) {
  if (!model.metadata.is_object()) return std::nullopt;
  auto it = model.metadata.find("referenceSystem");
  if (it == model.metadata.end() || !it->is_string()) return std::nullopt;
  return it->get<std::string>();
}

bool equivalent(const Geometry& a, const Geometry& b) {
  if (a.kind != b.kind || a.lod != b.lod || a.boundaries != b.boundaries) return false;
  if (a.semantics.has_value() != b.semantics.has_value()) return false;
  if (a.semantics) {
    const auto& sa = *a.semantics;
    const auto& sb = *b.semantics;
    if (sa.surfaces.size() != sb.surfaces.size() || !(sa.values == sb.values)) return false;
    for (std::size_t i = 0; i < sa.surfaces.size(); ++i) {
      if (sa.surfaces[i].type != sb.surfaces[i].type ||
          !semantic_equal(sa.surfaces[i].attributes, sb.surfaces[i].attributes)) {
        return false;
      }
    }
    if (!semantic_equal(sa.extra, sb.extra)) return false;
  }
  if (!semantic_equal(a.material, b.material) || !semantic_equal(a.texture, b.texture)) return false;
  if (a.instance.has_value() != b.instance.has_value()) return false;
  if (a.instance) {
    if (a.instance->template_index != b.instance->template_index ||
        a.instance->reference_point != b.instance->reference_point ||
        a.instance->matrix != b.instance->matrix) {
      return false;
    }
  }
  return semantic_equal(a.extra, b.extra);
}

bool equivalent(const CityObject& a, const CityObject& b) {
  if (a.type != b.type || !semantic_equal(a.attributes, b.attributes)) return false;
  if (!equal_optional_strings(a.parents, b.parents) || !equal_optional_strings(a.children, b.children)) {
    return false;
  }
  if (a.geometry.size() != b.geometry.size()) return false;
  for (std::size_t i = 0; i < a.geometry.size(); ++i) {
    if (!equivalent(a.geometry[i], b.geometry[i])) return false;
  }
  return semantic_equal(a.extra, b.extra);
}

bool equivalent(const CityModel& a, const CityModel& b) {
  if (a.version != b.version || a.vertices != b.vertices || a.transform != b.transform) return false;
  if (a.city_objects.size() != b.city_objects.size()) return false;
  for (const auto& [id, obj] : a.city_objects) {
    const CityObject* other = b.city_objects.find(id);
    if (!other || !equivalent(obj, *other)) return false;
  }
  if (a.templates.has_value() != b.templates.has_value()) return false;
  if (a.templates) {
    const auto& ta = *a.templates;
    const auto& tb = *b.templates;
    if (ta.vertices != tb.vertices || ta.templates.size() != tb.templates.size()) return false;
    for (std::size_t i = 0; i < ta.templates.size(); ++i) {
      if (!equivalent(ta.templates[i], tb.templates[i])) return false;
    }
    if (!semantic_equal(ta.extra, tb.extra)) return false;
  }
  if (a.appearance.has_value() != b.appearance.has_value()) return false;
  if (a.appearance) {
    const auto& pa = *a.appearance;
    const auto& pb = *b.appearance;
    if (pa.materials.size() != pb.materials.size() || pa.textures.size() != pb.textures.size() ||
        pa.vertices_texture != pb.vertices_texture || !semantic_equal(pa.extra, pb.extra)) {
      return false;
    }
    for (std::size_t i = 0; i < pa.materials.size(); ++i) {
      if (!semantic_equal(pa.materials[i], pb.materials[i])) return false;
    }
    for (std::size_t i = 0; i < pa.textures.size(); ++i) {
      if (pa.textures[i].image != pb.textures[i].image ||
          !semantic_equal(pa.textures[i].attributes, pb.textures[i].attributes)) {
        return false;
      }
    }
  }
  if (!semantic_equal(a.metadata, b.metadata)) return false;
  if (a.extensions.size() != b.extensions.size()) return false;
  for (const auto& [name, ref] : a.extensions) {
    auto it = b.extensions.find(name);
    if (it == b.extensions.end() || it->second.url != ref.url || it->second.version != ref.version) {
      return false;
    }
  }
  return equal_json_or_absent(a.extra, b.extra);
}

}  // namespace cjtk
