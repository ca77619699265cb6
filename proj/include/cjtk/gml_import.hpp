#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cjtk/model.hpp"

namespace cjtk::gml {

// One XML element; names are split into namespace URI and local name.
struct Element {
  std::string ns;
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;  // "uri local" or "local" -> value
  std::string text;
  std::vector<std::unique_ptr<Element>> children;
  const Element* parent = nullptr;
  std::size_t line = 0;

  // Attribute by local name (namespace ignored); nullptr when absent.
  const std::string* attr(std::string_view local) const;
  const Element* child(std::string_view local) const;
  std::vector<const Element*> children_named(std::string_view local) const;
  // "CityModel/cityObjectMember/Building" style location.
  std::string path() const;
};

class GmlDocument {
 public:
  // Throws Error(XmlSyntaxError) with line and column.
  static GmlDocument parse(std::string_view bytes);

  const Element& root() const { return *root_; }
  // gml:id -> element, for every element carrying one.
  const std::unordered_map<std::string, const Element*>& id_index() const { return ids_; }

  // "#id" -> element. Other forms throw Error(ExternalXlink), unknown ids
  // Error(UnresolvedXlink).
  const Element& resolve_xlink(std::string_view href) const;

 private:
  std::unique_ptr<Element> root_;
  std::unordered_map<std::string, const Element*> ids_;
};

// Exact-match vertex pool: each distinct coordinate triple is stored once, in
// order of first appearance.
class VertexPool {
 public:
  Index add(const Vertex& v);
  const std::vector<Vertex>& vertices() const { return vertices_; }

 private:
  std::vector<Vertex> vertices_;
  std::map<Vertex, Index> index_;
};

// Index list of a gml:LinearRing (posList, repeated pos or coordinates
// spelling) with the closing point removed. Throws Error(RingTooShort) or
// Error(BadCoordinateToken).
std::vector<Index> normalize_ring(const Element& ring, VertexPool& pool);

struct SkippedElement {
  std::string path;
  std::size_t line = 0;
  std::string element;
  std::string reason;
};

struct ImportReport {
  std::size_t features = 0;           // city objects created
  std::size_t surfaces = 0;           // distinct gml:Polygon elements imported
  std::size_t semantic_surfaces = 0;  // boundedBy surface features read
  std::map<std::string, std::size_t> feature_types;
  std::vector<SkippedElement> skipped;

  std::string to_jsonl() const;
};

struct ImportResult {
  CityModel model;
  ImportReport report;
};

ImportResult import_citygml(std::string_view bytes);

}  // namespace cjtk::gml
