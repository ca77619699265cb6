#include "synthetic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "cjtk/json_util.hpp"

namespace cjtk::testing {
namespace {

class Pool {
 public:
  Pool(std::vector<Vertex>& out, int decimals) : out_(out), factor_(std::pow(10.0, decimals)) {}

  Index add(double x, double y, double z) {
    const Vertex v{snap(x), snap(y), snap(z)};
    auto [it, fresh] = index_.emplace(v, out_.size());
    if (fresh) out_.push_back(v);
    return it->second;
  }

  double snap(double v) const { return std::round(v * factor_) / factor_; }

 private:
  std::vector<Vertex>& out_;
  std::map<Vertex, Index> index_;
  double factor_;
};

Geometry box(Pool& pool, double x0, double y0, double x1, double y1, double z0, double z1, double lod, bool semantics) {
  const Index b0 = pool.add(x0, y0, z0), b1 = pool.add(x1, y0, z0), b2 = pool.add(x1, y1, z0), b3 = pool.add(x0, y1, z0);
  const Index t0 = pool.add(x0, y0, z1), t1 = pool.add(x1, y0, z1), t2 = pool.add(x1, y1, z1), t3 = pool.add(x0, y1, z1);
  Shell shell = {{{b0, b3, b2, b1}}, {{t0, t1, t2, t3}}, {{b0, b1, t1, t0}},
                 {{b1, b2, t2, t1}}, {{b2, b3, t3, t2}}, {{b3, b0, t0, t3}}};
  Geometry g;
  g.kind = GeometryKind::Solid;
  g.lod = lod;
  g.boundaries = SolidShells{shell};
  if (semantics) {
    Semantics s;
    s.surfaces = {{"GroundSurface", Json::object()}, {"RoofSurface", Json::object()}, {"WallSurface", Json::object()}};
    ValueTree::List shell_values;
    for (Index v : {0, 1, 2, 2, 2, 2}) shell_values.push_back(ValueTree::leaf(v));
    s.values = ValueTree::list({ValueTree::list(std::move(shell_values))});
    g.semantics = std::move(s);
  }
  return g;
}

Json building_attributes(std::mt19937_64& rng, std::size_t count, double height) {
  static const char* roofs[] = {"flat", "gable", "hip", "shed", "mansard"};
  static const char* functions[] = {"residential", "office", "retail", "industrial", "education"};
  std::uniform_int_distribution<int> year(1890, 2020), storeys(1, 6), pick(0, 4), serial(100000, 999999);
  std::ostringstream ident, doc;
  ident << "NL.IMBAG.Pand.0363100012" << serial(rng);
  doc << "GV" << serial(rng) << "/" << year(rng);
  Json all = Json::object();
  all["identificatie"] = ident.str();
  all["measuredHeight"] = std::round(height * 100.0) / 100.0;
  all["yearOfConstruction"] = year(rng);
  all["roofType"] = roofs[pick(rng)];
  all["function"] = functions[pick(rng)];
  all["storeysAboveGround"] = storeys(rng);
  all["status"] = "Pand in gebruik";
  all["owner"] = "Gemeente Amsterdam";
  all["documentnummer"] = doc.str();
  all["creationDate"] = "2017-05-12";
  Json out = Json::object();
  std::size_t n = 0;
  for (const auto& [k, v] : all.items()) {
    if (n++ >= count) break;
    out[k] = v;
  }
  return out;
}

}  // namespace

CityModel make_city(const CityOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CityModel model;
  Pool pool(model.vertices, opt.decimals);
  constexpr std::size_t kPerRow = 6;
  const double origin_x = 121000.0 + 500.0 * unit(rng);
  const double origin_y = 487000.0 + 500.0 * unit(rng);

  std::vector<std::string> building_ids;
  double x_cursor = 0, row_y = 0, row_z = 0;
  for (std::size_t i = 0; i < opt.buildings; ++i) {
    if (i % kPerRow == 0) {
      x_cursor = origin_x + 13.0 * unit(rng);
      row_y = origin_y + 45.0 * static_cast<double>(i / kPerRow) + 3.0 * unit(rng);
      row_z = -0.5 + 0.4 * unit(rng);
    }
    const double w = 5.0 + 4.0 * unit(rng);
    const double d = 8.0 + 4.0 * unit(rng);
    const double h = 6.0 + 9.0 * unit(rng);
    const double x0 = x_cursor, x1 = x_cursor + w;
    x_cursor = opt.row_houses ? x1 : x1 + 2.0 + 3.0 * unit(rng);
    const std::string id = "NL.IMBAG.Pand." + std::to_string(363100012000000ULL + i * 7919);
    CityObject b;
    b.type = "Building";
    b.attributes = opt.attributes ? building_attributes(rng, opt.attributes, h) : Json();
    b.geometry.push_back(box(pool, x0, row_y, x1, row_y + d, row_z, row_z + h, 2, opt.semantics));
    if (unit(rng) < opt.part_ratio) {
      const std::string part_id = id + "-part";
      CityObject p;
      p.type = "BuildingPart";
      p.parents = std::vector<std::string>{id};
      const double inset = 1.0 + unit(rng);
      p.geometry.push_back(box(pool, x0 + inset, row_y + inset, x1 - inset, row_y + d - inset, row_z + h,
                               row_z + h + 2.0 + 3.0 * unit(rng), 2, opt.semantics));
      b.children = std::vector<std::string>{part_id};
      model.city_objects.insert(id, std::move(b));
      model.city_objects.insert(part_id, std::move(p));
    } else {
      model.city_objects.insert(id, std::move(b));
    }
    building_ids.push_back(id);
  }

  const std::size_t rows = (opt.buildings + kPerRow - 1) / kPerRow;
  for (std::size_t r = 0; r < opt.roads; ++r) {
    const double y = origin_y + 45.0 * static_cast<double>(r % std::max<std::size_t>(rows, 1)) + 14.0 + 4.0 * unit(rng);
    const double z = -0.6 + 0.2 * unit(rng);
    CityObject road;
    road.type = "Road";
    road.attributes = Json{{"function", "main road"}, {"surfaceMaterial", "asphalt"}};
    Shell surfaces;
    double x = origin_x - 5.0;
    for (int s = 0; s < 8; ++s) {
      const double nx = x + 8.0 + 4.0 * unit(rng);
      surfaces.push_back({{pool.add(x, y, z), pool.add(nx, y, z), pool.add(nx, y + 7.5, z), pool.add(x, y + 7.5, z)}});
      x = nx;
    }
    Geometry g;
    g.kind = GeometryKind::MultiSurface;
    g.lod = 1;
    g.boundaries = std::move(surfaces);
    road.geometry.push_back(std::move(g));
    model.city_objects.insert("road-" + std::to_string(r + 1), std::move(road));
  }

  if (opt.trees > 0) {
    TemplateBank bank;
    bank.vertices = {{-1.5, -1.5, 0}, {1.5, -1.5, 0}, {1.5, 1.5, 0}, {-1.5, 1.5, 0}, {0, 0, 7.25}};
    Geometry crown;
    crown.kind = GeometryKind::MultiSurface;
    crown.lod = 2;
    crown.boundaries = Shell{{{0, 3, 2, 1}}, {{0, 1, 4}}, {{1, 2, 4}}, {{2, 3, 4}}, {{3, 0, 4}}};
    bank.templates.push_back(std::move(crown));
    model.templates = std::move(bank);
    for (std::size_t t = 0; t < opt.trees; ++t) {
      CityObject tree;
      tree.type = "SolitaryVegetationObject";
      tree.attributes = Json{{"species", "Tilia x europaea"}, {"trunkDiameter", 0.35}};
      Geometry g;
      g.kind = GeometryKind::GeometryInstance;
      GeometryInstance gi;
      gi.template_index = 0;
      gi.reference_point = pool.add(origin_x + 90.0 + 60.0 * unit(rng), origin_y - 20.0 - 15.0 * unit(rng), -0.4);
      const double s = std::round((0.8 + 0.7 * unit(rng)) * 100.0) / 100.0;
      gi.matrix = {s, 0, 0, 0, 0, s, 0, 0, 0, 0, s, 0, 0, 0, 0, 1};
      g.instance = gi;
      tree.geometry.push_back(std::move(g));
      model.city_objects.insert("tree-" + std::to_string(t + 1), std::move(tree));
    }
  }

  if (opt.group && !building_ids.empty()) {
    CityObject group;
    group.type = "CityObjectGroup";
    Json members = Json::array();
    for (std::size_t i = 0; i < std::min<std::size_t>(3, building_ids.size()); ++i) members.push_back(building_ids[i]);
    group.extra["members"] = members;
    group.attributes = Json{{"name", "block A"}};
    model.city_objects.insert("group-1", std::move(group));
  }

  if (opt.crs) model.metadata = Json{{"referenceSystem", "urn:ogc:def:crs:EPSG::7415"}};
  return model;
}

CityModel random_model(std::uint64_t seed, std::size_t max_vertices, bool orphans) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> count(4, std::max<std::size_t>(4, max_vertices));
  const std::size_t n = count(rng);
  const double span = std::pow(10.0, 1 + static_cast<int>(unit(rng) * 5));
  const Vertex offset{1e5 * std::floor(10 * unit(rng)), 4e5 + 1e5 * std::floor(5 * unit(rng)), -50 + 100 * unit(rng)};
  CityModel model;
  for (std::size_t i = 0; i < n; ++i) {
    model.vertices.push_back({offset[0] + span * unit(rng), offset[1] + span * unit(rng), offset[2] + span * 0.01 * unit(rng)});
  }
  std::vector<Index> order(n);
  for (Index i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t referenced = orphans ? std::max<std::size_t>(3, n - 1 - n / 5) : n;
  std::uniform_int_distribution<Index> any(0, referenced - 1);
  Shell surfaces;
  Surface current;
  for (std::size_t i = 0; i < referenced; i += 3) {
    Ring ring;
    for (std::size_t k = 0; k < 3; ++k) ring.push_back(order[(i + k) < referenced ? i + k : any(rng)]);
    if (ring[0] == ring[1] || ring[1] == ring[2] || ring[0] == ring[2]) ring = {order[i % referenced], order[(i + 1) % referenced], order[(i + 2) % referenced]};
    surfaces.push_back({ring});
  }
  std::size_t obj = 0;
  for (std::size_t start = 0; start < surfaces.size(); ++obj) {
    const std::size_t take = std::min<std::size_t>(surfaces.size() - start, 1 + rng() % 4);
    Geometry g;
    g.kind = GeometryKind::MultiSurface;
    g.lod = 1 + static_cast<double>(rng() % 3);
    g.boundaries = Shell(surfaces.begin() + static_cast<std::ptrdiff_t>(start), surfaces.begin() + static_cast<std::ptrdiff_t>(start + take));
    CityObject o;
    o.type = (obj % 2) ? "GenericCityObject" : "Building";
    o.attributes = Json{{"index", obj}};
    o.geometry.push_back(std::move(g));
    model.city_objects.insert("obj-" + std::to_string(obj), std::move(o));
    start += take;
  }
  return model;
}

namespace {

std::string num(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string feature_prefix(const std::string& type) {
  if (type == "Building" || type == "BuildingPart") return "bldg";
  if (type == "Road" || type == "Railway" || type == "TransportSquare") return "tran";
  if (type == "SolitaryVegetationObject" || type == "PlantCover") return "veg";
  if (type == "GenericCityObject") return "gen";
  if (type == "LandUse") return "luse";
  if (type == "WaterBody") return "wtr";
  if (type == "CityFurniture") return "frn";
  return "";
}

class GmlWriter {
 public:
  GmlWriter(const CityModel& m, const GmlStyle& s) : model_(m), style_(s) {}

  std::string write() {
    out_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>" << nl();
    out_ << "<core:CityModel xmlns:core=\"http://www.opengis.net/citygml/2.0\""
            " xmlns:bldg=\"http://www.opengis.net/citygml/building/2.0\""
            " xmlns:tran=\"http://www.opengis.net/citygml/transportation/2.0\""
            " xmlns:veg=\"http://www.opengis.net/citygml/vegetation/2.0\""
            " xmlns:gen=\"http://www.opengis.net/citygml/generics/2.0\""
            " xmlns:luse=\"http://www.opengis.net/citygml/landuse/2.0\""
            " xmlns:wtr=\"http://www.opengis.net/citygml/waterbody/2.0\""
            " xmlns:frn=\"http://www.opengis.net/citygml/cityfurniture/2.0\""
            " xmlns:gml=\"http://www.opengis.net/gml\""
            " xmlns:xlink=\"http://www.w3.org/1999/xlink\">"
         << nl();
    if (auto rs = reference_system(model_)) {
      out_ << "<gml:boundedBy><gml:Envelope srsName=\"" << *rs << "\" srsDimension=\"3\"/></gml:boundedBy>" << nl();
    }
    for (const auto& [id, obj] : model_.city_objects) {
      if (is_second_level_type(obj.type) || feature_prefix(obj.type).empty()) continue;
      out_ << "<core:cityObjectMember>" << nl();
      feature(id, obj);
      out_ << "</core:cityObjectMember>" << nl();
    }
    out_ << "</core:CityModel>" << nl();
    return out_.str();
  }

 private:
  const char* nl() const { return style_.pretty ? "\n" : ""; }

  void feature(const std::string& id, const CityObject& obj) {
    const std::string p = feature_prefix(obj.type);
    out_ << "<" << p << ":" << obj.type << " gml:id=\"" << id << "\">" << nl();
    if (obj.attributes.is_object()) {
      for (const auto& [k, v] : obj.attributes.items()) attribute(k, v);
    }
    struct SemanticPolygon {
      std::string type, id, lod, body;  // body empty: reference the polygon written in the geometry
    };
    std::vector<SemanticPolygon> semantic_polys;
    for (std::size_t gi = 0; gi < obj.geometry.size(); ++gi) {
      const Geometry& g = obj.geometry[gi];
      if (g.instance) continue;
      const std::string lod = std::to_string(static_cast<int>(g.lod.value_or(1)));
      const std::string kind = std::string(to_string(g.kind));
      const std::string base = id + "-g" + std::to_string(gi);
      out_ << "<" << p << ":lod" << lod << kind << ">";
      std::size_t si = 0;
      auto polygon_member = [&](const Surface& s, std::optional<std::string> semantic) {
        const std::string pid = base + "-s" + std::to_string(si++);
        const bool has_sem = semantic && p == "bldg";
        if (has_sem && !style_.xlink_semantics) {
          out_ << "<gml:surfaceMember xlink:href=\"#" << pid << "\"/>";
          semantic_polys.push_back({*semantic, pid, lod, polygon(s, pid)});
          return;
        }
        out_ << "<gml:surfaceMember>" << polygon(s, has_sem ? pid : "") << "</gml:surfaceMember>";
        if (has_sem) semantic_polys.push_back({*semantic, pid, lod, ""});
      };
      auto semantic_of = [&](const ValueTree* v) -> std::optional<std::string> {
        if (!v || !v->is_leaf() || !g.semantics) return std::nullopt;
        return g.semantics->surfaces.at(v->index()).type;
      };
      auto shell = [&](const Shell& sh, const ValueTree* values) {
        for (std::size_t k = 0; k < sh.size(); ++k) {
          const ValueTree* v = values && values->is_list() && k < values->items().size() ? &values->items()[k] : nullptr;
          polygon_member(sh[k], semantic_of(v));
        }
      };
      const ValueTree* values = g.semantics ? &g.semantics->values : nullptr;
      if (const auto* sh = std::get_if<Shell>(&g.boundaries)) {
        out_ << "<gml:" << kind << ">";
        shell(*sh, values);
        out_ << "</gml:" << kind << ">";
      } else if (const auto* solid = std::get_if<SolidShells>(&g.boundaries)) {
        out_ << "<gml:Solid>";
        for (std::size_t k = 0; k < solid->size(); ++k) {
          const ValueTree* v = values && values->is_list() && k < values->items().size() ? &values->items()[k] : nullptr;
          const char* side = k == 0 ? "exterior" : "interior";
          out_ << "<gml:" << side << "><gml:CompositeSurface>";
          shell((*solid)[k], v);
          out_ << "</gml:CompositeSurface></gml:" << side << ">";
        }
        out_ << "</gml:Solid>";
      }
      out_ << "</" << p << ":lod" << lod << kind << ">" << nl();
    }
    for (const auto& sp : semantic_polys) {
      out_ << "<bldg:boundedBy><bldg:" << sp.type << "><bldg:lod" << sp.lod << "MultiSurface><gml:MultiSurface>";
      if (sp.body.empty()) {
        out_ << "<gml:surfaceMember xlink:href=\"#" << sp.id << "\"/>";
      } else {
        out_ << "<gml:surfaceMember>" << sp.body << "</gml:surfaceMember>";
      }
      out_ << "</gml:MultiSurface></bldg:lod" << sp.lod << "MultiSurface></bldg:" << sp.type << "></bldg:boundedBy>" << nl();
    }
    if (obj.children) {
      for (const auto& cid : *obj.children) {
        const CityObject* child = model_.city_objects.find(cid);
        if (!child || child->type != "BuildingPart") continue;
        out_ << "<bldg:consistsOfBuildingPart>" << nl();
        feature(cid, *child);
        out_ << "</bldg:consistsOfBuildingPart>" << nl();
      }
    }
    out_ << "</" << p << ":" << obj.type << ">" << nl();
  }

  void attribute(const std::string& name, const Json& v) {
    std::string kind, value, extra;
    if (v.is_string()) {
      kind = "stringAttribute";
      value = v.get<std::string>();
    } else if (v.is_number_integer()) {
      kind = "intAttribute";
      value = std::to_string(v.get<std::int64_t>());
    } else if (v.is_number_float()) {
      kind = "doubleAttribute";
      value = num(v.get<double>());
    } else if (v.is_object() && v.contains("value") && v["value"].is_number()) {
      kind = "measureAttribute";
      value = num(v["value"].get<double>());
      if (v.contains("uom")) extra = " uom=\"" + v["uom"].get<std::string>() + "\"";
    } else {
      return;
    }
    out_ << "<gen:" << kind << " name=\"" << name << "\"><gen:value" << extra << ">" << value << "</gen:value></gen:" << kind << ">" << nl();
  }

  std::string polygon(const Surface& s, const std::string& pid) const {
    std::ostringstream o;
    o << "<gml:Polygon" << (pid.empty() ? "" : " gml:id=\"" + pid + "\"") << ">";
    for (std::size_t r = 0; r < s.size(); ++r) {
      const char* side = r == 0 ? "exterior" : "interior";
      o << "<gml:" << side << "><gml:LinearRing>" << ring(s[r]) << "</gml:LinearRing></gml:" << side << ">";
    }
    o << "</gml:Polygon>";
    return o.str();
  }

  std::string ring(const Ring& ring) const {
    std::vector<Vertex> pts;
    for (Index i : ring) pts.push_back(real_world_vertex(model_, i));
    pts.push_back(pts.front());
    std::ostringstream o;
    switch (style_.coordinates) {
      case GmlStyle::Coordinates::PosList:
        o << "<gml:posList srsDimension=\"3\">";
        for (std::size_t k = 0; k < pts.size(); ++k) {
          o << (k ? " " : "") << num(pts[k][0]) << " " << num(pts[k][1]) << " " << num(pts[k][2]);
        }
        o << "</gml:posList>";
        break;
      case GmlStyle::Coordinates::Pos:
        for (const auto& p : pts) o << "<gml:pos>" << num(p[0]) << " " << num(p[1]) << " " << num(p[2]) << "</gml:pos>";
        break;
      case GmlStyle::Coordinates::Coordinates:
        o << "<gml:coordinates>";
        for (std::size_t k = 0; k < pts.size(); ++k) {
          o << (k ? " " : "") << num(pts[k][0]) << "," << num(pts[k][1]) << "," << num(pts[k][2]);
        }
        o << "</gml:coordinates>";
        break;
    }
    return o.str();
  }

  const CityModel& model_;
  GmlStyle style_;
  std::ostringstream out_;
};

}  // namespace

std::string to_citygml(const CityModel& model, const GmlStyle& style) { return GmlWriter(model, style).write(); }

}  // namespace cjtk::testing
