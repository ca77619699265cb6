#include "cjtk/codec.hpp"

#include <cmath>
#include <cstdint>
#include <optional>

namespace cjtk::codec {
namespace {

enum class Mode { Strict, Lenient };

bool is_index(const Json& j) {
  if (j.is_number_unsigned()) return true;
  return j.is_number_integer() && j.get<std::int64_t>() >= 0;
}

Index to_index(const Json& j) { return static_cast<Index>(j.get<std::uint64_t>()); }

bool decode_list(const Json& j, std::vector<Index>& out) {
  if (!j.is_array()) return false;
  out.clear();
  out.reserve(j.size());
  for (const auto& e : j) {
    if (!is_index(e)) return false;
    out.push_back(to_index(e));
  }
  return true;
}

template <class T>
bool decode_list(const Json& j, std::vector<T>& out) {
  if (!j.is_array()) return false;
  out.clear();
  out.resize(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!decode_list(j[i], out[i])) return false;
  }
  return true;
}

std::optional<Boundaries> decode_at_depth(const Json& j, int depth) {
  Boundaries b;
  bool ok = false;
  switch (depth) {
    case 1: ok = decode_list(j, b.emplace<0>()); break;
    case 2: ok = decode_list(j, b.emplace<1>()); break;
    case 3: ok = decode_list(j, b.emplace<2>()); break;
    case 4: ok = decode_list(j, b.emplace<3>()); break;
    case 5: ok = decode_list(j, b.emplace<4>()); break;
    default: break;
  }
  if (!ok) return std::nullopt;
  return b;
}

// Depth along the first non-empty path; 0 for a scalar.
int probe_depth(const Json& j) {
  int depth = 0;
  const Json* cur = &j;
  while (cur->is_array()) {
    ++depth;
    if (cur->empty()) break;
    cur = &(*cur)[0];
  }
  return depth;
}

std::optional<ValueTree> decode_values(const Json& j) {
  if (j.is_null()) return ValueTree::null();
  if (is_index(j)) return ValueTree::leaf(to_index(j));
  if (!j.is_array()) return std::nullopt;
  ValueTree::List items;
  items.reserve(j.size());
  for (const auto& e : j) {
    auto child = decode_values(e);
    if (!child) return std::nullopt;
    items.push_back(std::move(*child));
  }
  return ValueTree::list(std::move(items));
}

Json encode_values(const ValueTree& v) {
  if (v.is_null()) return nullptr;
  if (v.is_leaf()) return v.index();
  Json out = Json::array();
  for (const auto& child : v.items()) out.push_back(encode_values(child));
  return out;
}

Json encode_indices(const std::vector<Index>& list) {
  Json out = Json::array();
  for (Index i : list) out.push_back(i);
  return out;
}

template <class T>
Json encode_indices(const std::vector<T>& list) {
  Json out = Json::array();
  for (const auto& child : list) out.push_back(encode_indices(child));
  return out;
}

Json encode_vertex(const Vertex& v) {
  return Json::array({number_value(v[0]), number_value(v[1]), number_value(v[2])});
}

Json encode_triple(const std::array<double, 3>& v) { return encode_vertex(v); }

std::optional<std::vector<std::string>> string_list(const Json& j) {
  if (!j.is_array()) return std::nullopt;
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) return std::nullopt;
    out.push_back(e.get<std::string>());
  }
  return out;
}

std::optional<std::array<double, 3>> number_triple(const Json& j) {
  if (!j.is_array() || j.size() != 3) return std::nullopt;
  std::array<double, 3> out{};
  for (int a = 0; a < 3; ++a) {
    if (!j[a].is_number()) return std::nullopt;
    out[a] = j[a].get<double>();
  }
  return out;
}

class Decoder {
 public:
  Decoder(Mode mode, std::vector<DecodeIssue>* issues, ParseDiagnostics* diagnostics)
      : mode_(mode), issues_(issues), diagnostics_(diagnostics) {}

  CityModel decode(const Json& doc) {
    CityModel model;
    if (!doc.is_object()) {
      report(Code::NotCityJson, "", "document is not a JSON object");
      return model;
    }
    auto type = doc.find("type");
    if (type == doc.end() || !type->is_string() || type->get<std::string>() != "CityJSON") {
      report(Code::NotCityJson, "type", "\"type\" must be \"CityJSON\"");
      return model;
    }
    bool saw_version = false, saw_objects = false, saw_vertices = false;
    for (const auto& [key, value] : doc.items()) {
      const std::string path = key;
      if (key == "type") continue;
      if (key == "version") {
        saw_version = true;
        if (value.is_string()) {
          model.version = value.get<std::string>();
          if (model.version != "1.0" && diagnostics_) {
            diagnostics_->warnings.push_back({path, "version " + model.version + " read as 1.0"});
          }
        } else {
          report(Code::BadMemberType, path, "\"version\" must be a string");
        }
      } else if (key == "CityObjects") {
        saw_objects = true;
        decode_city_objects(value, model);
      } else if (key == "vertices") {
        saw_vertices = true;
        model.vertices = decode_vertices(value, path, Code::BadVertex);
      } else if (key == "transform") {
        decode_transform(value, model);
      } else if (key == "geometry-templates") {
        decode_templates(value, model);
      } else if (key == "appearance") {
        decode_appearance(value, model);
      } else if (key == "metadata") {
        if (!value.is_object()) report(Code::BadMemberType, path, "\"metadata\" must be an object");
        model.metadata = value;
      } else if (key == "extensions") {
        decode_extensions(value, model);
      } else {
        keep_unknown(model.extra, key, value, path);
      }
    }
    if (!saw_version) report(Code::MissingRequiredMember, "version", "missing \"version\"");
    if (!saw_objects) report(Code::MissingRequiredMember, "CityObjects", "missing \"CityObjects\"");
    if (!saw_vertices) report(Code::MissingRequiredMember, "vertices", "missing \"vertices\"");
    return model;
  }

 private:
  void report(Code code, const std::string& path, const std::string& message) {
    if (mode_ == Mode::Strict) throw Error(code, path, message);
    if (issues_) issues_->push_back({code, path, message});
  }

  void keep_unknown(Json& extra, const std::string& key, const Json& value, const std::string& path) {
    extra[key] = value;
    if (diagnostics_) diagnostics_->unknown_members.push_back(path);
  }

  std::vector<Vertex> decode_vertices(const Json& j, const std::string& path, Code code) {
    std::vector<Vertex> out;
    if (!j.is_array()) {
      report(code, path, "vertex list must be an array");
      return out;
    }
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
      auto v = number_triple(j[i]);
      if (!v) {
        report(code, path_join(path, i), "a vertex is an array of exactly 3 numbers");
        out.push_back({0, 0, 0});
      } else {
        out.push_back(*v);
      }
    }
    return out;
  }

  void decode_transform(const Json& j, CityModel& model) {
    if (!j.is_object()) {
      report(Code::BadTransform, "transform", "\"transform\" must be an object");
      return;
    }
    Transform t;
    auto scale = j.find("scale");
    auto translate = j.find("translate");
    std::optional<std::array<double, 3>> s, tr;
    if (scale != j.end()) s = number_triple(*scale);
    if (translate != j.end()) tr = number_triple(*translate);
    if (!s || !tr) {
      report(Code::BadTransform, "transform", "\"scale\" and \"translate\" must be arrays of 3 numbers");
      return;
    }
    t.scale = *s;
    t.translate = *tr;
    model.transform = t;
  }

  void decode_city_objects(const Json& j, CityModel& model) {
    if (!j.is_object()) {
      report(Code::BadMemberType, "CityObjects", "\"CityObjects\" must be an object");
      return;
    }
    for (const auto& [id, value] : j.items()) {
      const std::string path = path_join("CityObjects", id);
      if (auto obj = decode_city_object(value, path)) model.city_objects.insert(id, std::move(*obj));
    }
  }

  std::optional<CityObject> decode_city_object(const Json& j, const std::string& path) {
    if (!j.is_object()) {
      report(Code::BadMemberType, path, "a city object must be a JSON object");
      return std::nullopt;
    }
    CityObject obj;
    bool saw_type = false, saw_geometry = false;
    for (const auto& [key, value] : j.items()) {
      const std::string p = path_join(path, key);
      if (key == "type") {
        if (!value.is_string()) {
          report(Code::BadMemberType, p, "\"type\" must be a string");
          return std::nullopt;
        }
        saw_type = true;
        obj.type = value.get<std::string>();
      } else if (key == "attributes") {
        if (!value.is_object()) report(Code::BadMemberType, p, "\"attributes\" must be an object");
        obj.attributes = value;
      } else if (key == "parents" || key == "children") {
        auto ids = string_list(value);
        if (!ids) {
          report(Code::BadMemberType, p, "\"" + key + "\" must be an array of strings");
          continue;
        }
        (key == "parents" ? obj.parents : obj.children) = std::move(*ids);
      } else if (key == "geometry") {
        saw_geometry = true;
        if (!value.is_array()) {
          report(Code::BadMemberType, p, "\"geometry\" must be an array");
          continue;
        }
        for (std::size_t i = 0; i < value.size(); ++i) {
          if (auto g = decode_geometry(value[i], path_join(p, i))) obj.geometry.push_back(std::move(*g));
        }
      } else {
        keep_unknown(obj.extra, key, value, p);
      }
    }
    if (!saw_type) {
      report(Code::MissingRequiredMember, path_join(path, "type"), "city object without \"type\"");
      return std::nullopt;
    }
    if (!saw_geometry) {
      report(Code::MissingRequiredMember, path_join(path, "geometry"), "city object without \"geometry\"");
    }
    return obj;
  }

  std::optional<Geometry> decode_geometry(const Json& j, const std::string& path) {
    if (!j.is_object()) {
      report(Code::BadMemberType, path, "a geometry must be a JSON object");
      return std::nullopt;
    }
    auto type = j.find("type");
    if (type == j.end() || !type->is_string()) {
      report(Code::MissingRequiredMember, path_join(path, "type"), "geometry without \"type\"");
      return std::nullopt;
    }
    auto kind = parse_geometry_kind(type->get<std::string>());
    if (!kind) {
      report(Code::UnknownGeometryKind, path_join(path, "type"),
             "unknown geometry type '" + type->get<std::string>() + "'");
      return std::nullopt;
    }
    Geometry g;
    g.kind = *kind;
    bool saw_boundaries = false;
    for (const auto& [key, value] : j.items()) {
      const std::string p = path_join(path, key);
      if (key == "type") continue;
      if (key == "lod") {
        if (value.is_number()) {
          g.lod = value.get<double>();
        } else if (mode_ == Mode::Strict) {
          report(Code::BadLod, p, "\"lod\" must be a number");
        } else {
          g.extra["lod"] = value;  // reported by the structural checks
        }
      } else if (key == "boundaries") {
        saw_boundaries = true;
        if (g.kind == GeometryKind::GeometryInstance) {
          if (!value.is_array() || value.size() != 1 || !is_index(value[0])) {
            report(Code::BadGeometryShape, p, "an instance has a single reference-point index");
            return std::nullopt;
          }
          instance(g).reference_point = to_index(value[0]);
        } else {
          auto b = decode_boundaries(value, g.kind, p);
          if (!b) return std::nullopt;
          g.boundaries = std::move(*b);
        }
      } else if (key == "semantics") {
        auto s = decode_semantics(value, p);
        if (!s) return std::nullopt;
        g.semantics = std::move(*s);
      } else if (key == "material") {
        g.material = value;
      } else if (key == "texture") {
        g.texture = value;
      } else if (key == "template" && g.kind == GeometryKind::GeometryInstance) {
        if (!is_index(value)) {
          report(Code::BadMemberType, p, "\"template\" must be a non-negative integer");
          return std::nullopt;
        }
        instance(g).template_index = to_index(value);
      } else if (key == "transformationMatrix" && g.kind == GeometryKind::GeometryInstance) {
        if (!value.is_array()) {
          report(Code::BadMatrix, p, "\"transformationMatrix\" must be an array of 16 numbers");
          return std::nullopt;
        }
        std::vector<double> m;
        for (const auto& e : value) {
          if (!e.is_number()) {
            report(Code::BadMatrix, p, "\"transformationMatrix\" must be an array of 16 numbers");
            return std::nullopt;
          }
          m.push_back(e.get<double>());
        }
        if (m.size() != 16 && mode_ == Mode::Strict) {
          report(Code::BadMatrix, p, "\"transformationMatrix\" must have 16 entries");
        }
        instance(g).matrix = std::move(m);
      } else {
        keep_unknown(g.extra, key, value, p);
      }
    }
    if (g.kind == GeometryKind::GeometryInstance) {
      if (!j.contains("template")) {
        report(Code::MissingRequiredMember, path_join(path, "template"), "instance without \"template\"");
        return std::nullopt;
      }
      if (!j.contains("transformationMatrix")) {
        report(Code::MissingRequiredMember, path_join(path, "transformationMatrix"),
               "instance without \"transformationMatrix\"");
        return std::nullopt;
      }
    }
    if (!saw_boundaries) {
      report(Code::MissingRequiredMember, path_join(path, "boundaries"), "geometry without \"boundaries\"");
      return std::nullopt;
    }
    return g;
  }

  static GeometryInstance& instance(Geometry& g) {
    if (!g.instance) g.instance.emplace();
    return *g.instance;
  }

  std::optional<Boundaries> decode_boundaries(const Json& j, GeometryKind kind, const std::string& path) {
    const int expected = boundary_depth(kind);
    if (auto b = decode_at_depth(j, expected)) return b;
    const int found = probe_depth(j);
    auto b = decode_at_depth(j, found);
    if (!b) {
      report(Code::BadGeometryShape, path, "boundaries must be nested arrays of non-negative integers");
      return std::nullopt;
    }
    if (mode_ == Mode::Strict) {
      report(Code::BadGeometryShape, path,
             std::string(to_string(kind)) + " needs depth " + std::to_string(expected) + ", found " +
                 std::to_string(found));
    }
    return b;
  }

  std::optional<Semantics> decode_semantics(const Json& j, const std::string& path) {
    if (!j.is_object()) {
      report(Code::BadMemberType, path, "\"semantics\" must be an object");
      return std::nullopt;
    }
    Semantics s;
    bool saw_values = false;
    for (const auto& [key, value] : j.items()) {
      const std::string p = path_join(path, key);
      if (key == "surfaces") {
        if (!value.is_array()) {
          report(Code::BadMemberType, p, "\"surfaces\" must be an array");
          return std::nullopt;
        }
        for (std::size_t i = 0; i < value.size(); ++i) {
          const Json& surface = value[i];
          auto type = surface.is_object() ? surface.find("type") : surface.end();
          if (!surface.is_object() || type == surface.end() || !type->is_string()) {
            report(Code::BadMemberType, path_join(p, i), "a semantic surface is an object with a \"type\"");
            return std::nullopt;
          }
          SemanticSurface out;
          out.type = type->get<std::string>();
          for (const auto& [k, v] : surface.items()) {
            if (k != "type") out.attributes[k] = v;
          }
          s.surfaces.push_back(std::move(out));
        }
      } else if (key == "values") {
        saw_values = true;
        auto values = decode_values(value);
        if (!values) {
          report(Code::BadMemberType, p, "\"values\" must be nested arrays of indices or null");
          return std::nullopt;
        }
        s.values = std::move(*values);
      } else {
        keep_unknown(s.extra, key, value, p);
      }
    }
    if (!saw_values) {
      report(Code::MissingRequiredMember, path_join(path, "values"), "semantics without \"values\"");
      return std::nullopt;
    }
    return s;
  }

  void decode_templates(const Json& j, CityModel& model) {
    const std::string path = "geometry-templates";
    if (!j.is_object()) {
      report(Code::BadMemberType, path, "\"geometry-templates\" must be an object");
      return;
    }
    TemplateBank bank;
    for (const auto& [key, value] : j.items()) {
      const std::string p = path_join(path, key);
      if (key == "templates") {
        if (!value.is_array()) {
          report(Code::BadMemberType, p, "\"templates\" must be an array");
          continue;
        }
        for (std::size_t i = 0; i < value.size(); ++i) {
          if (auto g = decode_geometry(value[i], path_join(p, i))) {
            bank.templates.push_back(std::move(*g));
          } else {
            // keep positions stable for template references
            bank.templates.push_back(Geometry{});
          }
        }
      } else if (key == "vertices-templates") {
        bank.vertices = decode_vertices(value, p, Code::BadVertex);
      } else {
        keep_unknown(bank.extra, key, value, p);
      }
    }
    model.templates = std::move(bank);
  }

  void decode_appearance(const Json& j, CityModel& model) {
    const std::string path = "appearance";
    if (!j.is_object()) {
      report(Code::BadMemberType, path, "\"appearance\" must be an object");
      return;
    }
    Appearance app;
    for (const auto& [key, value] : j.items()) {
      const std::string p = path_join(path, key);
      if (key == "materials") {
        if (!value.is_array()) {
          report(Code::BadMemberType, p, "\"materials\" must be an array");
          continue;
        }
        for (const auto& m : value) app.materials.push_back(m);
      } else if (key == "textures") {
        if (!value.is_array()) {
          report(Code::BadMemberType, p, "\"textures\" must be an array");
          continue;
        }
        for (std::size_t i = 0; i < value.size(); ++i) {
          const Json& t = value[i];
          auto image = t.is_object() ? t.find("image") : t.end();
          if (!t.is_object() || image == t.end() || !image->is_string()) {
            report(Code::BadMemberType, path_join(p, i), "a texture is an object with an \"image\"");
            app.textures.push_back({});
            continue;
          }
          Texture tex;
          tex.image = image->get<std::string>();
          for (const auto& [k, v] : t.items()) {
            if (k != "image") tex.attributes[k] = v;
          }
          app.textures.push_back(std::move(tex));
        }
      } else if (key == "vertices-texture") {
        if (!value.is_array()) {
          report(Code::BadMemberType, p, "\"vertices-texture\" must be an array");
          continue;
        }
        for (std::size_t i = 0; i < value.size(); ++i) {
          const Json& uv = value[i];
          if (!uv.is_array() || uv.size() != 2 || !uv[0].is_number() || !uv[1].is_number()) {
            report(Code::BadMemberType, path_join(p, i), "texture coordinates are pairs of numbers");
            app.vertices_texture.push_back({0, 0});
            continue;
          }
          app.vertices_texture.push_back({uv[0].get<double>(), uv[1].get<double>()});
        }
      } else {
        keep_unknown(app.extra, key, value, p);
      }
    }
    model.appearance = std::move(app);
  }

  void decode_extensions(const Json& j, CityModel& model) {
    if (!j.is_object()) {
      report(Code::BadMemberType, "extensions", "\"extensions\" must be an object");
      return;
    }
    for (const auto& [name, value] : j.items()) {
      const std::string p = path_join("extensions", name);
      auto url = value.is_object() ? value.find("url") : value.end();
      auto version = value.is_object() ? value.find("version") : value.end();
      if (!value.is_object() || url == value.end() || version == value.end() || !url->is_string() ||
          !version->is_string()) {
        report(Code::BadMemberType, p, "an extension reference has string \"url\" and \"version\"");
        continue;
      }
      model.extensions[name] = {url->get<std::string>(), version->get<std::string>()};
    }
  }

  Mode mode_;
  std::vector<DecodeIssue>* issues_;
  ParseDiagnostics* diagnostics_;
};

Json encode_semantics(const Semantics& s) {
  Json out = Json::object();
  Json surfaces = Json::array();
  for (const auto& surface : s.surfaces) {
    Json js = Json::object();
    js["type"] = surface.type;
    for (const auto& [k, v] : surface.attributes.items()) js[k] = v;
    surfaces.push_back(std::move(js));
  }
  out["surfaces"] = std::move(surfaces);
  out["values"] = encode_values(s.values);
  for (const auto& [k, v] : s.extra.items()) out[k] = v;
  return out;
}

}  // namespace

ParseResult parse(std::string_view text) { return from_json(parse_json_text(text)); }

ParseResult from_json(const JsonDocument& doc) {
  for (const auto& dup : doc.duplicates) {
    if (dup.path == "CityObjects") {
      throw Error(Code::DuplicateId, path_join(dup.path, dup.key), "city object id appears twice");
    }
    throw Error(Code::DuplicateKey, path_join(dup.path, dup.key), "key appears twice");
  }
  ParseResult result;
  Decoder decoder(Mode::Strict, nullptr, &result.diagnostics);
  result.model = decoder.decode(doc.value);
  return result;
}

CityModel decode_lenient(const Json& doc, std::vector<DecodeIssue>& issues, ParseDiagnostics* diagnostics) {
  Decoder decoder(Mode::Lenient, &issues, diagnostics);
  return decoder.decode(doc);
}

Json encode_geometry(const Geometry& g) {
  Json out = Json::object();
  out["type"] = std::string(to_string(g.kind));
  if (g.lod) out["lod"] = number_value(*g.lod);
  if (g.instance) {
    out["template"] = g.instance->template_index;
    out["boundaries"] = Json::array({g.instance->reference_point});
    Json m = Json::array();
    for (double x : g.instance->matrix) m.push_back(number_value(x));
    out["transformationMatrix"] = std::move(m);
  } else {
    out["boundaries"] = std::visit([](const auto& list) { return encode_indices(list); }, g.boundaries);
  }
  if (g.semantics) out["semantics"] = encode_semantics(*g.semantics);
  if (!g.material.is_null()) out["material"] = g.material;
  if (!g.texture.is_null()) out["texture"] = g.texture;
  for (const auto& [k, v] : g.extra.items()) out[k] = v;
  return out;
}

Json encode_city_object(const CityObject& o) {
  Json out = Json::object();
  out["type"] = o.type;
  if (!o.attributes.is_null()) out["attributes"] = o.attributes;
  if (o.parents) out["parents"] = *o.parents;
  if (o.children) out["children"] = *o.children;
  Json geometry = Json::array();
  for (const auto& g : o.geometry) geometry.push_back(encode_geometry(g));
  out["geometry"] = std::move(geometry);
  for (const auto& [k, v] : o.extra.items()) out[k] = v;
  return out;
}

Json to_json(const CityModel& model) {
  Json out = Json::object();
  out["type"] = "CityJSON";
  out["version"] = model.version;
  if (!model.extensions.empty()) {
    Json ext = Json::object();
    for (const auto& [name, ref] : model.extensions) {
      ext[name] = Json{{"url", ref.url}, {"version", ref.version}};
    }
    out["extensions"] = std::move(ext);
  }
  Json objects = Json::object();
  auto& storage = static_cast<std::vector<Json::object_t::value_type>&>(objects.get_ref<Json::object_t&>());
  for (const auto& [id, obj] : model.city_objects) storage.emplace_back(id, encode_city_object(obj));
  out["CityObjects"] = std::move(objects);
  Json vertices = Json::array();
  for (const auto& v : model.vertices) vertices.push_back(encode_vertex(v));
  out["vertices"] = std::move(vertices);
  if (model.transform) {
    out["transform"] = Json{{"scale", encode_triple(model.transform->scale)},
                            {"translate", encode_triple(model.transform->translate)}};
  }
  if (model.templates) {
    Json bank = Json::object();
    Json templates = Json::array();
    for (const auto& g : model.templates->templates) templates.push_back(encode_geometry(g));
    bank["templates"] = std::move(templates);
    Json tv = Json::array();
    for (const auto& v : model.templates->vertices) tv.push_back(encode_vertex(v));
    bank["vertices-templates"] = std::move(tv);
    for (const auto& [k, v] : model.templates->extra.items()) bank[k] = v;
    out["geometry-templates"] = std::move(bank);
  }
  if (model.appearance) {
    const Appearance& app = *model.appearance;
    Json a = Json::object();
    if (!app.materials.empty()) a["materials"] = app.materials;
    if (!app.textures.empty()) {
      Json textures = Json::array();
      for (const auto& t : app.textures) {
        Json jt = Json::object();
        jt["image"] = t.image;
        for (const auto& [k, v] : t.attributes.items()) jt[k] = v;
        textures.push_back(std::move(jt));
      }
      a["textures"] = std::move(textures);
    }
    if (!app.vertices_texture.empty()) {
      Json uv = Json::array();
      for (const auto& p : app.vertices_texture) uv.push_back(Json::array({number_value(p[0]), number_value(p[1])}));
      a["vertices-texture"] = std::move(uv);
    }
    for (const auto& [k, v] : app.extra.items()) a[k] = v;
    out["appearance"] = std::move(a);
  }
  if (!model.metadata.is_null()) out["metadata"] = model.metadata;
  for (const auto& [k, v] : model.extra.items()) out[k] = v;
  return out;
}

std::string serialize(const CityModel& model, OutputMode mode) {
  return dump(to_json(model), mode == OutputMode::Pretty);
}

}  // namespace cjtk::codec
