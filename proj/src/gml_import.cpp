#include <algorithm>
#include <charconv>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "cjtk/error.hpp"
#include "cjtk/gml_import.hpp"
#include "cjtk/json_util.hpp"

namespace cjtk::gml {
namespace {

constexpr std::string_view kGeometrySuffixes[] = {"Solid", "MultiSurface", "CompositeSurface", "Geometry", "FootPrint", "RoofEdge"};
constexpr std::string_view kNumericAttributes[] = {"measuredHeight", "storeysAboveGround", "storeysBelowGround",
                                                   "yearOfConstruction", "yearOfDemolition"};
constexpr std::string_view kSemanticTypes[] = {"RoofSurface", "GroundSurface", "WallSurface", "ClosureSurface",
                                               "OuterCeilingSurface", "OuterFloorSurface", "Window", "Door"};

bool is_gml(const Element& e) { return e.ns.find("opengis.net/gml") != std::string::npos; }

template <class Range>
bool listed(const Range& range, std::string_view name) {
  return std::find(std::begin(range), std::end(range), name) != std::end(range);
}

std::optional<int> geometry_lod(std::string_view name) {
  if (name.size() < 5 || name.substr(0, 3) != "lod" || name[3] < '0' || name[3] > '4') return std::nullopt;
  if (!listed(kGeometrySuffixes, name.substr(4))) return std::nullopt;
  return name[3] - '0';
}

std::string trimmed(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<double> as_number(std::string_view s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

const std::string* gml_id(const Element& e) {
  for (const auto& [key, value] : e.attributes) {
    const auto sep = key.find(' ');
    if (sep != std::string::npos && key.substr(sep + 1) == "id" && key.find("opengis.net/gml") != std::string::npos) return &value;
  }
  return nullptr;
}

void check_no_lod4(const Element& e) {
  if (e.name.size() > 4 && e.name.compare(0, 4, "lod4") == 0) {
    throw Error(Code::Lod4Unsupported, e.path(), "line " + std::to_string(e.line) + ": LoD4 content is not supported");
  }
  for (const auto& c : e.children) check_no_lod4(*c);
}

void collect_crs(const Element& e, std::set<int>& codes) {
  if (const std::string* srs = e.attr("srsName")) {
    auto code = parse_epsg(*srs);
    if (!code) throw Error(Code::BadCrs, e.path(), "line " + std::to_string(e.line) + ": '" + *srs + "' is not an EPSG reference");
    codes.insert(*code);
  }
  for (const auto& c : e.children) collect_crs(*c, codes);
}

struct SemanticRecord {
  std::string type;
  int lod = 0;
};

// Semantic surface ids for the surfaces of one geometry, in traversal order.
struct SemanticsBuilder {
  std::vector<SemanticSurface> surfaces;
  std::vector<std::optional<Index>> flat;

  void add(const SemanticRecord* rec) {
    if (!rec) {
      flat.emplace_back();
      return;
    }
    for (Index i = 0; i < surfaces.size(); ++i) {
      if (surfaces[i].type == rec->type) {
        flat.emplace_back(i);
        return;
      }
    }
    surfaces.push_back({rec->type, Json::object()});
    flat.emplace_back(surfaces.size() - 1);
  }

  std::optional<Semantics> build(const Boundaries& b) const {
    if (surfaces.empty()) return std::nullopt;
    std::size_t next = 0;
    auto leaf = [&]() { return flat[next] ? ValueTree::leaf(*flat[next++]) : (++next, ValueTree::null()); };
    auto shell = [&](const Shell& s) {
      ValueTree::List out;
      for (std::size_t i = 0; i < s.size(); ++i) out.push_back(leaf());
      return ValueTree::list(std::move(out));
    };
    auto solid = [&](const SolidShells& s) {
      ValueTree::List out;
      for (const auto& sh : s) out.push_back(shell(sh));
      return ValueTree::list(std::move(out));
    };
    Semantics sem;
    sem.surfaces = surfaces;
    if (const auto* s = std::get_if<Shell>(&b)) {
      sem.values = shell(*s);
    } else if (const auto* s = std::get_if<SolidShells>(&b)) {
      sem.values = solid(*s);
    } else if (const auto* s = std::get_if<std::vector<SolidShells>>(&b)) {
      ValueTree::List out;
      for (const auto& so : *s) out.push_back(solid(so));
      sem.values = ValueTree::list(std::move(out));
    } else {
      return std::nullopt;
    }
    return sem;
  }
};

class Importer {
 public:
  explicit Importer(const GmlDocument& doc) : doc_(doc) {}

  ImportResult run() {
    const Element& root = doc_.root();
    check_no_lod4(root);
    std::set<int> codes;
    collect_crs(root, codes);
    if (codes.size() > 1) throw Error(Code::MixedCrs, root.path(), "document uses more than one reference system");
    if (codes.size() == 1) {
      result_.model.metadata = Json{{"referenceSystem", "urn:ogc:def:crs:EPSG::" + std::to_string(*codes.begin())}};
    }
    for (const auto& c : root.children) {
      if (c->name == "cityObjectMember" || c->name == "featureMember") {
        for (const auto& f : c->children) feature(*f, std::nullopt);
      } else if (is_gml(*c) && c->name == "boundedBy") {
        continue;  // the envelope only contributes its srsName
      } else {
        skip(*c, "not a city object member");
      }
    }
    result_.model.vertices = pool_.vertices();
    result_.report.surfaces = polygons_.size();
    return std::move(result_);
  }

 private:
  void skip(const Element& e, std::string reason) {
    result_.report.skipped.push_back({e.path(), e.line, e.name, std::move(reason)});
  }

  const Element& deref(const Element& e) const {
    if (const std::string* href = e.attr("href")) return doc_.resolve_xlink(*href);
    return e;
  }

  std::string new_id(const Element& e) {
    std::string id;
    if (const std::string* gid = gml_id(e)) {
      id = *gid;
    } else {
      id = "GML_" + std::to_string(++generated_);
    }
    if (result_.model.city_objects.contains(id)) {
      std::string base = id;
      for (int n = 1; result_.model.city_objects.contains(id); ++n) id = base + "-" + std::to_string(n);
    }
    return id;
  }

  // Surface features listed under boundedBy, keyed by the polygons they own.
  void collect_semantics(const Element& surface, std::unordered_map<const Element*, SemanticRecord>& out) {
    ++result_.report.semantic_surfaces;
    for (const auto& c : surface.children) {
      if (auto lod = geometry_lod(c->name)) {
        const Element& prop = deref(*c);
        for (const Element* poly : polygons_under(prop)) out[poly] = {surface.name, *lod};
      } else if (c->name == "opening") {
        for (const auto& o : deref(*c).children) {
          if (listed(kSemanticTypes, o->name)) {
            collect_semantics(*o, out);
          } else {
            skip(*o, "unsupported opening type");
          }
        }
      } else if (!(is_gml(*c) && c->name == "boundedBy")) {
        skip(*c, "semantic surface content not imported");
      }
    }
  }

  std::vector<const Element*> polygons_under(const Element& e) {
    std::vector<const Element*> out;
    walk_polygons(e, out, 0);
    return out;
  }

  void walk_polygons(const Element& e, std::vector<const Element*>& out, int depth) {
    if (depth > 64) return;
    if (e.name == "Polygon") {
      out.push_back(&e);
      return;
    }
    for (const auto& c : e.children) {
      if (const std::string* href = c->attr("href")) {
        walk_polygons(doc_.resolve_xlink(*href), out, depth + 1);
      } else {
        walk_polygons(*c, out, depth + 1);
      }
    }
  }

  Surface polygon(const Element& poly) {
    polygons_.insert(&poly);
    Surface s;
    for (const auto& c : poly.children) {
      const bool outer = c->name == "exterior" || c->name == "outerBoundaryIs";
      const bool inner = c->name == "interior" || c->name == "innerBoundaryIs";
      if (!outer && !inner) continue;
      const Element& holder = deref(*c);
      const Element* ring = holder.name == "LinearRing" ? &holder : holder.child("LinearRing");
      if (!ring) throw Error(Code::UnsupportedElement, c->path(), "line " + std::to_string(c->line) + ": ring is not a gml:LinearRing");
      if (outer) {
        s.insert(s.begin(), normalize_ring(*ring, pool_));
      } else {
        s.push_back(normalize_ring(*ring, pool_));
      }
    }
    if (s.empty()) throw Error(Code::UnsupportedElement, poly.path(), "line " + std::to_string(poly.line) + ": polygon without exterior");
    return s;
  }

  struct GeometryContext {
    const std::unordered_map<const Element*, SemanticRecord>& semantics;
    std::unordered_set<const Element*>& used;
    SemanticsBuilder builder;
  };

  void surface_into(const Element& e, Shell& out, GeometryContext& ctx) {
    if (e.name == "Polygon") {
      out.push_back(polygon(e));
      ctx.used.insert(&e);
      auto it = ctx.semantics.find(&e);
      ctx.builder.add(it == ctx.semantics.end() ? nullptr : &it->second);
    } else if (e.name == "CompositeSurface" || e.name == "MultiSurface" || e.name == "Shell") {
      members_into(e, out, ctx);
    } else {
      skip(e, "unsupported surface type");
    }
  }

  void members_into(const Element& container, Shell& out, GeometryContext& ctx) {
    for (const auto& m : container.children) {
      if (m->name != "surfaceMember" && m->name != "surfaceMembers") continue;
      if (const std::string* href = m->attr("href")) {
        surface_into(doc_.resolve_xlink(*href), out, ctx);
        continue;
      }
      for (const auto& s : m->children) surface_into(*s, out, ctx);
    }
  }

  std::optional<SolidShells> solid(const Element& e, GeometryContext& ctx) {
    SolidShells shells;
    for (const auto& c : e.children) {
      if (c->name != "exterior" && c->name != "interior") continue;
      const Element& holder = deref(*c);
      Shell shell;
      if (holder.name == "CompositeSurface" || holder.name == "Shell") {
        members_into(holder, shell, ctx);
      } else {
        for (const auto& s : holder.children) surface_into(*s, shell, ctx);
      }
      if (c->name == "exterior") {
        shells.insert(shells.begin(), std::move(shell));
      } else {
        shells.push_back(std::move(shell));
      }
    }
    if (shells.empty()) {
      skip(e, "solid without exterior shell");
      return std::nullopt;
    }
    return shells;
  }

  std::optional<Geometry> geometry(const Element& e, int lod, GeometryContext& ctx) {
    Geometry g;
    g.lod = lod;
    if (e.name == "Solid") {
      auto s = solid(e, ctx);
      if (!s) return std::nullopt;
      g.kind = GeometryKind::Solid;
      g.boundaries = std::move(*s);
    } else if (e.name == "MultiSurface" || e.name == "CompositeSurface" || e.name == "Polygon") {
      Shell shell;
      if (e.name == "Polygon") {
        surface_into(e, shell, ctx);
      } else {
        members_into(e, shell, ctx);
      }
      g.kind = e.name == "CompositeSurface" ? GeometryKind::CompositeSurface : GeometryKind::MultiSurface;
      g.boundaries = std::move(shell);
    } else if (e.name == "MultiSolid" || e.name == "CompositeSolid") {
      std::vector<SolidShells> solids;
      for (const auto& m : e.children) {
        if (m->name != "solidMember" && m->name != "solidMembers") continue;
        std::vector<const Element*> items;
        if (const std::string* href = m->attr("href")) {
          items.push_back(&doc_.resolve_xlink(*href));
        } else {
          for (const auto& c : m->children) items.push_back(c.get());
        }
        for (const Element* item : items) {
          if (item->name != "Solid") {
            skip(*item, "unsupported solid member");
            continue;
          }
          if (auto s = solid(*item, ctx)) solids.push_back(std::move(*s));
        }
      }
      g.kind = e.name == "MultiSolid" ? GeometryKind::MultiSolid : GeometryKind::CompositeSolid;
      g.boundaries = std::move(solids);
    } else {
      skip(e, "unsupported geometry type");
      return std::nullopt;
    }
    g.semantics = ctx.builder.build(g.boundaries);
    return g;
  }

  void generic_attribute(const Element& e, Json& attributes) {
    const std::string* name = e.attr("name");
    const Element* value = e.child("value");
    if (!name || !value) {
      skip(e, "generic attribute without name or value");
      return;
    }
    const std::string text = trimmed(value->text);
    if (e.name == "intAttribute") {
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec == std::errc() && ptr == text.data() + text.size()) {
        attributes[*name] = v;
        return;
      }
    } else if (e.name == "doubleAttribute") {
      if (auto v = as_number(text)) {
        attributes[*name] = number_value(*v);
        return;
      }
    } else if (e.name == "measureAttribute") {
      if (auto v = as_number(text)) {
        Json m{{"value", number_value(*v)}};
        if (const std::string* uom = value->attr("uom")) m["uom"] = *uom;
        attributes[*name] = std::move(m);
        return;
      }
    } else {
      attributes[*name] = text;
      return;
    }
    skip(e, "generic attribute value '" + text + "' does not match its type");
  }

  static void put(Json& attributes, const std::string& key, Json value) {
    if (!attributes.contains(key)) {
      attributes[key] = std::move(value);
      return;
    }
    Json& slot = attributes[key];
    if (!slot.is_array()) slot = Json::array({slot});
    slot.push_back(std::move(value));
  }

  void feature(const Element& e, const std::optional<std::string>& parent) {
    if (!is_core_type(e.name) || e.name == "CityObjectGroup") {
      skip(e, "unsupported feature type");
      return;
    }
    if (is_second_level_type(e.name) && !parent) {
      skip(e, "part feature outside its parent");
      return;
    }
    const std::string id = new_id(e);
    CityObject obj;
    obj.type = e.name;
    if (parent) obj.parents = std::vector<std::string>{*parent};
    obj.attributes = Json::object();
    // Insert first so part ids generated below cannot collide with this one.
    result_.model.city_objects.insert(id, CityObject{});
    ++result_.report.features;
    ++result_.report.feature_types[e.name];

    std::unordered_map<const Element*, SemanticRecord> semantics;
    for (const auto& c : e.children) {
      if (c->name == "boundedBy" && !is_gml(*c)) {
        for (const auto& s : deref(*c).children) {
          if (listed(kSemanticTypes, s->name)) {
            collect_semantics(*s, semantics);
          } else {
            skip(*s, "unsupported boundary surface type");
          }
        }
      }
    }

    std::unordered_set<const Element*> used;
    std::vector<std::string> children;
    for (const auto& c : e.children) {
      const Element& child = *c;
      if (auto lod = geometry_lod(child.name)) {
        const Element& prop = deref(child);
        const Element* body = &prop;
        if (&prop == &child) {
          body = child.children.empty() ? nullptr : child.children.front().get();
        }
        if (!body) {
          skip(child, "empty geometry property");
          continue;
        }
        GeometryContext ctx{semantics, used, {}};
        if (auto g = geometry(*body, *lod, ctx)) obj.geometry.push_back(std::move(*g));
      } else if (child.name == "boundedBy" && !is_gml(child)) {
        continue;
      } else if (child.name == "consistsOfBuildingPart" || child.name == "outerBuildingInstallation" ||
                 child.name == "interiorBuildingInstallation") {
        for (const auto& part : deref(child).children) {
          const std::size_t before = result_.model.city_objects.size();
          const std::optional<std::string> p = id;
          feature(*part, p);
          if (result_.model.city_objects.size() > before) children.push_back(last_id_);
        }
        if (child.name == "outerBuildingInstallation" || child.name == "interiorBuildingInstallation") {
          if (child.children.empty()) skip(child, "empty installation property");
        }
      } else if (child.name == "stringAttribute" || child.name == "intAttribute" || child.name == "doubleAttribute" ||
                 child.name == "measureAttribute" || child.name == "dateAttribute" || child.name == "uriAttribute") {
        generic_attribute(child, obj.attributes);
      } else if (child.children.empty() && child.name.rfind("lod", 0) != 0 && !(is_gml(child) && child.name != "name" && child.name != "description")) {
        const std::string text = trimmed(child.text);
        auto num = listed(kNumericAttributes, child.name) ? as_number(text) : std::nullopt;
        put(obj.attributes, child.name, num ? number_value(*num) : Json(text));
      } else {
        skip(child, "element not imported");
      }
    }

    // Boundary polygons that no explicit geometry uses become their own
    // MultiSurface, one per LoD.
    std::map<int, std::vector<const Element*>> leftover;
    std::vector<const Element*> ordered;
    for (const auto& c : e.children) {
      if (c->name != "boundedBy" || is_gml(*c)) continue;
      for (const Element* poly : polygons_under(deref(*c))) ordered.push_back(poly);
    }
    std::unordered_set<const Element*> queued;
    for (const Element* poly : ordered) {
      auto it = semantics.find(poly);
      if (it == semantics.end() || used.count(poly) || !queued.insert(poly).second) continue;
      leftover[it->second.lod].push_back(poly);
    }
    for (const auto& [lod, polys] : leftover) {
      GeometryContext ctx{semantics, used, {}};
      Shell shell;
      for (const Element* poly : polys) surface_into(*poly, shell, ctx);
      Geometry g;
      g.kind = GeometryKind::MultiSurface;
      g.lod = lod;
      g.boundaries = std::move(shell);
      g.semantics = ctx.builder.build(g.boundaries);
      obj.geometry.push_back(std::move(g));
    }

    if (!children.empty()) obj.children = std::move(children);
    if (obj.attributes.empty()) obj.attributes = Json();
    result_.model.city_objects.at(id) = std::move(obj);
    last_id_ = id;
  }

  const GmlDocument& doc_;
  VertexPool pool_;
  ImportResult result_;
  std::unordered_set<const Element*> polygons_;
  std::size_t generated_ = 0;
  std::string last_id_;
};

}  // namespace

std::string ImportReport::to_jsonl() const {
  Json types = Json::object();
  for (const auto& [t, n] : feature_types) types[t] = n;
  std::string out = dump(Json{{"kind", "summary"},
                              {"features", features},
                              {"surfaces", surfaces},
                              {"semantic_surfaces", semantic_surfaces},
                              {"feature_types", types}}) +
                    "\n";
  for (const auto& s : skipped) {
    out += dump(Json{{"kind", "skipped"}, {"path", s.path}, {"line", s.line}, {"element", s.element}, {"reason", s.reason}}) + "\n";
  }
  return out;
}

ImportResult import_citygml(std::string_view bytes) {
  const GmlDocument doc = GmlDocument::parse(bytes);
  return Importer(doc).run();
}

}  // namespace cjtk::gml
