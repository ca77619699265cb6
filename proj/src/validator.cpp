#include "cjtk/validator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>

#include "cjtk/codec.hpp"
#include "cjtk/json_util.hpp"

namespace cjtk::validate {
namespace {

bool is_surface_kind(GeometryKind k) {
  return k != GeometryKind::MultiPoint && k != GeometryKind::MultiLineString &&
         k != GeometryKind::GeometryInstance;
}

// First ring-level defect of a geometry whose depth already matches its kind.
std::optional<std::string> ring_problem(const Geometry& g) {
  std::optional<std::string> problem;
  if (g.kind == GeometryKind::MultiLineString) {
    for (const auto& line : std::get<Surface>(g.boundaries)) {
      if (line.size() < 2) return "a linestring needs at least 2 vertices";
    }
    return std::nullopt;
  }
  if (!is_surface_kind(g.kind)) return std::nullopt;
  auto check_surfaces = [&](const Shell& surfaces) {
    for (const auto& surface : surfaces) {
      if (surface.empty()) {
        problem = "a surface needs an exterior ring";
        return;
      }
      for (const auto& ring : surface) {
        if (ring.size() < 3) {
          problem = "a ring needs at least 3 vertices";
          return;
        }
        if (ring.front() == ring.back()) {
          problem = "rings are implicitly closed; the first index must not be repeated";
          return;
        }
      }
    }
  };
  std::visit(
      [&](const auto& list) {
        using T = std::decay_t<decltype(list)>;
        if constexpr (std::is_same_v<T, Shell>) {
          check_surfaces(list);
        } else if constexpr (std::is_same_v<T, SolidShells>) {
          for (const auto& shell : list) check_surfaces(shell);
        } else if constexpr (std::is_same_v<T, std::vector<SolidShells>>) {
          for (const auto& solid : list)
            for (const auto& shell : solid) check_surfaces(shell);
        }
      },
      g.boundaries);
  return problem;
}

bool finite3(const Vertex& v) { return std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]); }

class StructureChecker {
 public:
  StructureChecker(const CityModel& model, ValidationReport& report) : model_(model), report_(report) {}

  void run() {
    for (const auto& [id, obj] : model_.city_objects) check_object(id, obj);
    check_vertices(model_.vertices, "vertices", model_.transform.has_value());
    if (model_.transform) check_transform(*model_.transform);
    if (model_.templates) {
      const auto& bank = *model_.templates;
      for (std::size_t i = 0; i < bank.templates.size(); ++i) {
        check_geometry(bank.templates[i], path_join("geometry-templates/templates", i), true);
      }
      check_vertices(bank.vertices, "geometry-templates/vertices-templates", false);
    }
    check_crs();
  }

 private:
  void error(Code code, std::string path, std::string message) {
    report_.add(severity_of(code), Stage::Structure, code, std::move(path), std::move(message));
  }

  void check_object(const std::string& id, const CityObject& obj) {
    const std::string path = path_join("CityObjects", id);
    if (!is_core_type(obj.type) && !is_extension_name(obj.type)) {
      error(Code::UnknownCityObjectType, path_join(path, "type"), "unknown city object type '" + obj.type + "'");
    }
    if (is_second_level_type(obj.type) && (!obj.parents || obj.parents->empty())) {
      error(Code::MissingParent, path_join(path, "parents"), obj.type + " must list its parent");
    }
    for (std::size_t i = 0; i < obj.geometry.size(); ++i) {
      check_geometry(obj.geometry[i], path_join(path_join(path, "geometry"), i), false);
    }
  }

  void check_geometry(const Geometry& g, const std::string& path, bool in_template_bank) {
    if (g.kind == GeometryKind::GeometryInstance) {
      if (in_template_bank) {
        error(Code::BadGeometryShape, path_join(path, "type"), "templates cannot be instances");
        return;
      }
      const auto& inst = g.instance ? *g.instance : GeometryInstance{};
      const bool finite = std::all_of(inst.matrix.begin(), inst.matrix.end(), [](double x) { return std::isfinite(x); });
      if (inst.matrix.size() != 16 || !finite) {
        error(Code::BadMatrix, path_join(path, "transformationMatrix"), "expected 16 finite numbers");
      }
      const std::size_t available = model_.templates ? model_.templates->templates.size() : 0;
      if (inst.template_index >= available) {
        error(Code::TemplateIndexOutOfRange, path_join(path, "template"),
              "template " + std::to_string(inst.template_index) + " of " + std::to_string(available));
      }
      return;
    }
    const int expected = boundary_depth(g.kind);
    if (depth_of(g.boundaries) != expected) {
      error(Code::BadGeometryShape, path_join(path, "boundaries"),
            std::string(to_string(g.kind)) + " needs depth " + std::to_string(expected) + ", found " +
                std::to_string(depth_of(g.boundaries)));
    } else if (auto p = ring_problem(g)) {
      error(Code::BadGeometryShape, path_join(path, "boundaries"), *p);
    }
    if (!g.lod) {
      if (g.extra.contains("lod")) {
        error(Code::BadLod, path_join(path, "lod"), "lod must be a number");
      } else {
        error(Code::MissingLod, path_join(path, "lod"), "every geometry needs a lod");
      }
    } else if (!std::isfinite(*g.lod) || *g.lod < 0) {
      error(Code::BadLod, path_join(path, "lod"), "lod must be a non-negative number");
    }
    if (g.semantics) {
      const auto& surfaces = g.semantics->surfaces;
      for (std::size_t i = 0; i < surfaces.size(); ++i) {
        if (!is_known_semantic_type(surfaces[i].type)) {
          error(Code::UnknownSemanticType, path_join(path_join(path_join(path, "semantics/surfaces"), i), "type"),
                "unknown semantic surface type '" + surfaces[i].type + "'");
        }
      }
    }
    check_appearance_bindings(g, path);
  }

  void check_appearance_bindings(const Geometry& g, const std::string& path) {
    const std::size_t materials = model_.appearance ? model_.appearance->materials.size() : 0;
    const std::size_t textures = model_.appearance ? model_.appearance->textures.size() : 0;
    const std::size_t uvs = model_.appearance ? model_.appearance->vertices_texture.size() : 0;
    bool bad = false;
    auto check_index = [&](const Json& j, std::size_t limit) {
      if (j.is_null()) return;
      if (!j.is_number_integer() || j.get<std::int64_t>() < 0 || static_cast<std::size_t>(j.get<std::int64_t>()) >= limit) {
        bad = true;
      }
    };
    std::function<void(const Json&)> material_values = [&](const Json& j) {
      if (j.is_array()) {
        for (const auto& e : j) material_values(e);
      } else {
        check_index(j, materials);
      }
    };
    if (g.material.is_object()) {
      for (const auto& [theme, binding] : g.material.items()) {
        if (!binding.is_object()) {
          bad = true;
          continue;
        }
        if (binding.contains("value")) check_index(binding["value"], materials);
        if (binding.contains("values")) material_values(binding["values"]);
      }
    } else if (!g.material.is_null()) {
      bad = true;
    }
    if (bad) error(Code::BadAppearanceIndex, path_join(path, "material"), "material index out of range");
    bad = false;
    std::function<void(const Json&)> texture_values = [&](const Json& j) {
      if (!j.is_array()) {
        if (!j.is_null()) bad = true;
        return;
      }
      const bool ring_level = std::none_of(j.begin(), j.end(), [](const Json& e) { return e.is_array(); });
      if (!ring_level) {
        for (const auto& e : j) texture_values(e);
        return;
      }
      for (std::size_t i = 0; i < j.size(); ++i) check_index(j[i], i == 0 ? textures : uvs);
    };
    if (g.texture.is_object()) {
      for (const auto& [theme, binding] : g.texture.items()) {
        if (!binding.is_object() || !binding.contains("values")) {
          bad = true;
          continue;
        }
        texture_values(binding["values"]);
      }
    } else if (!g.texture.is_null()) {
      bad = true;
    }
    if (bad) error(Code::BadAppearanceIndex, path_join(path, "texture"), "texture index out of range");
  }

  void check_vertices(const std::vector<Vertex>& vertices, const std::string& path, bool quantized) {
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      const Vertex& v = vertices[i];
      if (!finite3(v)) {
        error(Code::BadVertex, path_join(path, i), "coordinates must be finite");
      } else if (quantized && (std::trunc(v[0]) != v[0] || std::trunc(v[1]) != v[1] || std::trunc(v[2]) != v[2])) {
        error(Code::BadVertex, path_join(path, i), "with a transform, vertices are integers");
      }
    }
  }

  void check_transform(const Transform& t) {
    for (int a = 0; a < 3; ++a) {
      if (!std::isfinite(t.scale[a]) || t.scale[a] <= 0.0) {
        error(Code::BadTransform, "transform/scale", "scale factors must be finite and positive");
        break;
      }
    }
    for (int a = 0; a < 3; ++a) {
      if (!std::isfinite(t.translate[a])) {
        error(Code::BadTransform, "transform/translate", "translation must be finite");
        break;
      }
    }
  }

  void check_crs() {
    if (!model_.metadata.is_object()) return;
    auto it = model_.metadata.find("referenceSystem");
    if (it == model_.metadata.end()) return;
    const std::string path = "metadata/referenceSystem";
    if (it->is_string()) {
      if (!parse_epsg(it->get<std::string>())) {
        error(Code::BadCrs, path, "only EPSG codes are allowed, got '" + it->get<std::string>() + "'");
      }
      return;
    }
    if (it->is_array()) {
      std::set<int> codes;
      for (const auto& e : *it) {
        auto code = e.is_string() ? parse_epsg(e.get<std::string>()) : std::nullopt;
        if (!code) {
          error(Code::BadCrs, path, "only EPSG codes are allowed");
          return;
        }
        codes.insert(*code);
      }
      if (codes.size() > 1) {
        error(Code::MultipleCrs, path, "a model uses a single CRS");
      }
      return;
    }
    error(Code::BadCrs, path, "referenceSystem must be an \"EPSG:<code>\" string");
  }

  const CityModel& model_;
  ValidationReport& report_;
};

bool lists(const std::optional<std::vector<std::string>>& list, const std::string& id) {
  return list && std::find(list->begin(), list->end(), id) != list->end();
}

class ConsistencyChecker {
 public:
  ConsistencyChecker(const CityModel& model, ValidationReport& report) : model_(model), report_(report) {}

  void run() {
    used_.assign(model_.vertices.size(), 0);
    check_links();
    check_duplicate_ids();
    for (const auto& [id, obj] : model_.city_objects) {
      const std::string path = path_join(path_join("CityObjects", id), "geometry");
      for (std::size_t i = 0; i < obj.geometry.size(); ++i) {
        check_geometry(obj.geometry[i], path_join(path, i), model_.vertices.size(), true);
      }
    }
    if (model_.templates) {
      const auto& bank = *model_.templates;
      for (std::size_t i = 0; i < bank.templates.size(); ++i) {
        check_geometry(bank.templates[i], path_join("geometry-templates/templates", i), bank.vertices.size(), false);
      }
    }
    check_vertices();
  }

 private:
  void add(Code code, std::string path, std::string message) {
    report_.add(severity_of(code), Stage::Consistency, code, std::move(path), std::move(message));
  }

  void check_links() {
    const auto& objects = model_.city_objects;
    for (const auto& [id, obj] : objects) {
      const std::string path = path_join("CityObjects", id);
      if (obj.children) {
        for (const auto& child : *obj.children) {
          const CityObject* target = objects.find(child);
          if (!target) {
            add(Code::ParentChildMismatch, path_join(path, "children"), "child '" + child + "' does not exist");
          } else if (!lists(target->parents, id)) {
            add(Code::ParentChildMismatch, path_join(path, "children"),
                "child '" + child + "' does not list '" + id + "' as a parent");
          }
        }
      }
      if (obj.parents) {
        for (const auto& parent : *obj.parents) {
          const CityObject* target = objects.find(parent);
          if (!target) {
            add(Code::ParentChildMismatch, path_join(path, "parents"), "parent '" + parent + "' does not exist");
          } else if (!lists(target->children, id)) {
            add(Code::ParentChildMismatch, path_join(path, "parents"),
                "parent '" + parent + "' does not list '" + id + "' as a child");
          }
        }
      }
    }
  }

  void check_duplicate_ids() {
    std::map<std::string, std::size_t> counts;
    for (const auto& [id, obj] : model_.city_objects) ++counts[id];
    for (const auto& [id, n] : counts) {
      if (n > 1) add(Code::DuplicateId, path_join("CityObjects", id), "id used by " + std::to_string(n) + " city objects");
    }
  }

  void check_geometry(const Geometry& g, const std::string& path, std::size_t pool, bool model_pool) {
    if (g.instance) {
      const Index ref = g.instance->reference_point;
      if (ref >= model_.vertices.size()) {
        add(Code::VertexIndexOutOfRange, path_join(path, "boundaries"),
            "reference point " + std::to_string(ref) + " with " + std::to_string(model_.vertices.size()) + " vertices");
      } else {
        used_[ref] = 1;
      }
      return;
    }
    Index worst = 0;
    bool out_of_range = false;
    for_each_index(g.boundaries, [&](Index i) {
      if (i >= pool) {
        out_of_range = true;
        worst = std::max(worst, i);
      } else if (model_pool) {
        used_[i] = 1;
      }
    });
    if (out_of_range) {
      add(Code::VertexIndexOutOfRange, path_join(path, "boundaries"),
          "index " + std::to_string(worst) + " with " + std::to_string(pool) + " vertices");
    }
    if (auto p = semantics_problem(g)) add(Code::SemanticsShapeMismatch, path_join(path, "semantics"), *p);
  }

  void check_vertices() {
    struct Hash {
      std::size_t operator()(const Vertex& v) const {
        std::size_t h = 0;
        for (double c : v) h = h * 1000003u ^ std::hash<double>{}(c);
        return h;
      }
    };
    std::unordered_map<Vertex, Index, Hash> first;
    for (Index i = 0; i < model_.vertices.size(); ++i) {
      auto [it, fresh] = first.emplace(model_.vertices[i], i);
      if (!fresh) {
        add(Code::DuplicateVertex, path_join("vertices", i), "same coordinates as vertex " + std::to_string(it->second));
      }
      if (!used_[i]) add(Code::OrphanVertex, path_join("vertices", i), "not referenced by any geometry");
    }
  }

  const CityModel& model_;
  ValidationReport& report_;
  std::vector<unsigned char> used_;
};

Json finding_json(const Finding& f, Severity s) {
  return Json{{"severity", s == Severity::Error ? "error" : "warning"},
              {"stage", std::string(to_string(f.stage))},
              {"code", std::string(cjtk::to_string(f.code))},
              {"path", f.path},
              {"message", f.message}};
}

}  // namespace

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::Syntax: return "syntax";
    case Stage::Structure: return "structure";
    case Stage::Consistency: return "consistency";
    case Stage::Extension: return "extension";
  }
  return "unknown";
}

std::size_t ValidationReport::count(Code code) const {
  auto match = [code](const Finding& f) { return f.code == code; };
  return static_cast<std::size_t>(std::count_if(errors.begin(), errors.end(), match) +
                                  std::count_if(warnings.begin(), warnings.end(), match));
}

void ValidationReport::add(Severity severity, Stage stage, Code code, std::string path, std::string message) {
  Finding f{stage, code, std::move(path), std::move(message)};
  (severity == Severity::Error ? errors : warnings).push_back(std::move(f));
}

void ValidationReport::append(const ValidationReport& other) {
  errors.insert(errors.end(), other.errors.begin(), other.errors.end());
  warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
}

void ValidationReport::sort() {
  auto by_path = [](const Finding& a, const Finding& b) {
    return std::tie(a.path, a.code, a.message) < std::tie(b.path, b.code, b.message);
  };
  std::stable_sort(errors.begin(), errors.end(), by_path);
  std::stable_sort(warnings.begin(), warnings.end(), by_path);
}

Severity severity_of(Code code) {
  switch (code) {
    case Code::DuplicateVertex:
    case Code::OrphanVertex:
    case Code::UnknownSemanticType:
      return Severity::Warning;
    default:
      return Severity::Error;
  }
}

ValidationReport validate_structure(const CityModel& model) {
  ValidationReport report;
  StructureChecker(model, report).run();
  report.sort();
  return report;
}

ValidationReport validate_consistency(const CityModel& model) {
  ValidationReport report;
  ConsistencyChecker(model, report).run();
  report.sort();
  return report;
}

ValidationReport validate(std::string_view bytes) {
  ValidationReport report;
  JsonDocument doc;
  try {
    doc = parse_json_text(bytes);
  } catch (const Error& e) {
    report.add(Severity::Error, Stage::Syntax, e.code(), e.path(), e.what());
    return report;
  }
  for (const auto& dup : doc.duplicates) {
    if (dup.path != "CityObjects") {
      report.add(Severity::Error, Stage::Syntax, Code::DuplicateKey, path_join(dup.path, dup.key), "key appears twice");
    }
  }
  if (!report.valid()) {
    report.sort();
    return report;
  }

  std::vector<codec::DecodeIssue> issues;
  CityModel model = codec::decode_lenient(doc.value, issues);
  for (const auto& issue : issues) {
    report.add(severity_of(issue.code), Stage::Structure, issue.code, issue.path, issue.message);
  }
  report.append(validate_structure(model));
  if (report.valid()) report.append(validate_consistency(model));
  report.sort();
  return report;
}

std::string to_jsonl(const ValidationReport& report) {
  std::string out;
  for (const auto& f : report.errors) out += finding_json(f, Severity::Error).dump() + "\n";
  for (const auto& f : report.warnings) out += finding_json(f, Severity::Warning).dump() + "\n";
  return out;
}

std::string to_text(const ValidationReport& report) {
  std::string out;
  auto line = [&](const Finding& f, std::string_view severity) {
    out += std::string(severity) + " [" + std::string(to_string(f.stage)) + "] " +
           std::string(cjtk::to_string(f.code)) + " " + (f.path.empty() ? "<root>" : f.path) + ": " +
           f.message + "\n";
  };
  for (const auto& f : report.errors) line(f, "error");
  for (const auto& f : report.warnings) line(f, "warning");
  return out;
}

int exit_code(const ValidationReport& report) {
  if (!report.errors.empty()) return 2;
  if (!report.warnings.empty()) return 1;
  return 0;
}

}  // namespace cjtk::validate
