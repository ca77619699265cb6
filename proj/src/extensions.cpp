#include "cjtk/extensions.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "cjtk/codec.hpp"
#include "cjtk/geoprocess.hpp"

namespace cjtk::ext {
namespace {

using validate::Finding;
using validate::Severity;
using validate::Stage;
using validate::ValidationReport;

constexpr std::string_view kRuleTypes[] = {"string", "number", "integer", "boolean", "object", "array"};

class FragmentReader {
 public:
  explicit FragmentReader(std::vector<Finding>& findings) : findings_(findings) {}

  Rule read(const Json& j, const std::string& path) {
    Rule rule;
    if (!j.is_object()) {
      fail(Code::BadSchemaFragment, path, "a schema fragment must be an object");
      return rule;
    }
    for (const auto& [key, value] : j.items()) {
      const std::string at = path_join(path, key);
      if (key == "type") {
        if (!value.is_string() ||
            std::find(std::begin(kRuleTypes), std::end(kRuleTypes), value.get<std::string>()) == std::end(kRuleTypes)) {
          fail(Code::BadSchemaFragment, at, "unsupported type " + value.dump());
        } else {
          rule.type = value.get<std::string>();
        }
      } else if (key == "properties") {
        if (!value.is_object()) {
          fail(Code::BadSchemaFragment, at, "properties must be an object");
          continue;
        }
        for (const auto& [name, sub] : value.items()) rule.properties[name] = read(sub, path_join(at, name));
      } else if (key == "items") {
        rule.items = std::make_shared<const Rule>(read(value, at));
      } else if (key == "required") {
        const bool ok = value.is_array() && std::all_of(value.begin(), value.end(), [](const Json& e) { return e.is_string(); });
        if (!ok) {
          fail(Code::BadSchemaFragment, at, "required must be a list of names");
          continue;
        }
        for (const auto& e : value) rule.required.push_back(e.get<std::string>());
      } else if (key == "enum") {
        if (!value.is_array() || value.empty()) {
          fail(Code::BadSchemaFragment, at, "enum must be a non-empty list");
          continue;
        }
        rule.enum_values = std::vector<Json>(value.begin(), value.end());
      } else {
        fail(Code::UnsupportedSchemaKeyword, at, "keyword '" + key + "' is not supported");
      }
    }
    return rule;
  }

  void fail(Code code, std::string path, std::string message) {
    findings_.push_back({Stage::Extension, code, std::move(path), std::move(message)});
  }

 private:
  std::vector<Finding>& findings_;
};

std::string required_string(const Json& doc, const char* key, FragmentReader& reader) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_string()) {
    reader.fail(Code::MissingRequiredMember, key, std::string("extension needs a string \"") + key + "\"");
    return {};
  }
  return it->get<std::string>();
}

const Json* section(const Json& doc, const char* key, FragmentReader& reader) {
  auto it = doc.find(key);
  if (it == doc.end()) return nullptr;
  if (!it->is_object()) {
    reader.fail(Code::BadSchemaFragment, key, "must be an object");
    return nullptr;
  }
  return &*it;
}

bool matches_type(const std::string& type, const Json& v) {
  if (type == "string") return v.is_string();
  if (type == "number") return v.is_number();
  if (type == "integer") {
    if (v.is_number_integer()) return true;
    if (!v.is_number_float()) return false;
    const double d = v.get<double>();
    return std::isfinite(d) && std::trunc(d) == d;
  }
  if (type == "boolean") return v.is_boolean();
  if (type == "object") return v.is_object();
  return v.is_array();
}

void add(ValidationReport& report, Code code, std::string path, std::string message) {
  report.add(Severity::Error, Stage::Extension, code, std::move(path), std::move(message));
}

// Any object carrying "boundaries" found while walking `j`.
void scan_for_geometry(const Json& j, const std::string& path, ValidationReport& report) {
  if (j.is_object()) {
    if (j.contains("boundaries")) {
      add(report, Code::GeometryOutsideGeometryMember, path, "geometry must live in the \"geometry\" member");
      return;
    }
    for (const auto& [k, v] : j.items()) scan_for_geometry(v, path_join(path, k), report);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) scan_for_geometry(j[i], path_join(path, i), report);
  }
}

template <class F>
const Rule* lookup(std::span<const Extension> exts, F&& get) {
  for (const auto& e : exts) {
    if (const Rule* r = get(e)) return r;
  }
  return nullptr;
}

template <class Map>
const Rule* find_in(const Map& map, const std::string& key) {
  auto it = map.find(key);
  return it == map.end() ? nullptr : &it->second;
}

}  // namespace

LoadError::LoadError(std::vector<Finding> findings)
    : Error(findings.empty() ? Code::NotExtension : findings.front().code,
            findings.empty() ? std::string() : findings.front().path,
            findings.empty() ? std::string("invalid extension")
                             : findings.front().message +
                                   (findings.size() > 1 ? " (+" + std::to_string(findings.size() - 1) + " more)" : "")),
      findings_(std::move(findings)) {}

Extension load_extension(std::string_view bytes) {
  const Json doc = parse_json_text(bytes).value;
  if (!doc.is_object() || !doc.contains("type") || doc["type"] != "CityJSON_Extension") {
    throw Error(Code::NotExtension, "type", "file type must be \"CityJSON_Extension\"");
  }
  std::vector<Finding> findings;
  FragmentReader reader(findings);
  Extension ext;
  ext.name = required_string(doc, "name", reader);
  ext.uri = required_string(doc, "uri", reader);
  ext.version = required_string(doc, "version", reader);
  if (auto it = doc.find("description"); it != doc.end() && it->is_string()) ext.description = it->get<std::string>();

  if (const Json* roots = section(doc, "extraRootProperties", reader)) {
    for (const auto& [name, frag] : roots->items()) {
      const std::string at = path_join("extraRootProperties", name);
      if (!is_extension_name(name)) reader.fail(Code::BadPlusPrefix, at, "'" + name + "' must begin with a +");
      ext.root_properties[name] = reader.read(frag, at);
    }
  }
  if (const Json* attrs = section(doc, "extraAttributes", reader)) {
    for (const auto& [type, members] : attrs->items()) {
      const std::string type_at = path_join("extraAttributes", type);
      if (!is_core_type(type)) {
        reader.fail(Code::BadSchemaFragment, type_at, "extra attributes can only target core types, not '" + type + "'");
        continue;
      }
      if (!members.is_object()) {
        reader.fail(Code::BadSchemaFragment, type_at, "must be an object");
        continue;
      }
      auto& target = ext.attributes[type];
      for (const auto& [name, frag] : members.items()) {
        const std::string at = path_join(type_at, name);
        if (!is_extension_name(name)) reader.fail(Code::BadPlusPrefix, at, "'" + name + "' must begin with a +");
        target[name] = reader.read(frag, at);
      }
    }
  }
  if (const Json* objects = section(doc, "extraCityObjects", reader)) {
    for (const auto& [name, frag] : objects->items()) {
      const std::string at = path_join("extraCityObjects", name);
      if (!is_extension_name(name)) reader.fail(Code::BadPlusPrefix, at, "'" + name + "' must begin with a +");
      Rule rule = reader.read(frag, at);
      const auto has = [&](const char* m) {
        return std::find(rule.required.begin(), rule.required.end(), m) != rule.required.end();
      };
      if (!has("type") || !has("geometry")) {
        reader.fail(Code::MissingGeometryRule, at, "a new city object must require \"type\" and \"geometry\"");
      }
      ext.city_objects[name] = std::move(rule);
    }
  }
  if (!findings.empty()) throw LoadError(std::move(findings));
  return ext;
}

Extension load_extension_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Code::IoError, path, "cannot open extension file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_extension(ss.str());
}

void check_rule(const Rule& rule, const Json& value, const std::string& path, ValidationReport& report) {
  if (rule.type && !matches_type(*rule.type, value)) {
    add(report, Code::TypeMismatch, path, "expected " + *rule.type + ", found " + value.type_name());
    return;
  }
  if (rule.enum_values) {
    const bool listed = std::any_of(rule.enum_values->begin(), rule.enum_values->end(),
                                    [&](const Json& e) { return semantic_equal(e, value); });
    if (!listed) add(report, Code::EnumMismatch, path, value.dump() + " is not one of the allowed values");
  }
  if (value.is_object()) {
    for (const auto& name : rule.required) {
      if (!value.contains(name)) add(report, Code::MissingRequiredProperty, path_join(path, name), "required property missing");
    }
    for (const auto& [name, sub] : rule.properties) {
      auto it = value.find(name);
      if (it != value.end()) check_rule(sub, *it, path_join(path, name), report);
    }
  }
  if (value.is_array() && rule.items) {
    for (std::size_t i = 0; i < value.size(); ++i) check_rule(*rule.items, value[i], path_join(path, i), report);
  }
}

ValidationReport find_collisions(std::span<const Extension> exts) {
  ValidationReport report;
  std::map<std::string, std::string> owner;
  auto claim = [&](const std::string& key, const std::string& path, const Extension& e) {
    auto [it, fresh] = owner.emplace(key, e.name);
    if (!fresh) {
      add(report, Code::ExtensionCollision, path, "'" + key + "' defined by both " + it->second + " and " + e.name);
    }
  };
  for (const auto& e : exts) {
    for (const auto& [name, r] : e.root_properties) claim("root:" + name, path_join("extraRootProperties", name), e);
    for (const auto& [type, members] : e.attributes) {
      for (const auto& [name, r] : members) {
        claim("attr:" + type + "/" + name, path_join(path_join("extraAttributes", type), name), e);
      }
    }
    for (const auto& [name, r] : e.city_objects) claim("type:" + name, path_join("extraCityObjects", name), e);
  }
  return report;
}

ValidationReport validate_extended(const CityModel& model, std::span<const Extension> exts) {
  ValidationReport report = find_collisions(exts);

  for (const auto& [name, ref] : model.extensions) {
    const bool loaded = std::any_of(exts.begin(), exts.end(), [&](const Extension& e) { return e.name == name; });
    if (!loaded) add(report, Code::MissingExtensionSchema, path_join("extensions", name), "no schema loaded for extension '" + name + "'");
  }

  for (const auto& [key, value] : model.extra.items()) {
    if (!is_extension_name(key)) continue;
    const Rule* rule = lookup(exts, [&](const Extension& e) { return find_in(e.root_properties, key); });
    if (!rule) {
      add(report, Code::UndeclaredExtensionMember, key, "root property '" + key + "' is not declared by any extension");
    } else {
      check_rule(*rule, value, key, report);
    }
    scan_for_geometry(value, key, report);
  }

  for (const auto& [id, obj] : model.city_objects) {
    const std::string base = path_join("CityObjects", id);
    if (is_extension_name(obj.type)) {
      const Rule* rule = lookup(exts, [&](const Extension& e) { return find_in(e.city_objects, obj.type); });
      if (!rule) {
        add(report, Code::UndeclaredExtensionMember, path_join(base, "type"), "city object type '" + obj.type + "' is not declared by any extension");
      } else {
        check_rule(*rule, codec::encode_city_object(obj), base, report);
      }
    } else {
      if (obj.attributes.is_object()) {
        for (const auto& [key, value] : obj.attributes.items()) {
          if (!is_extension_name(key)) continue;
          const std::string at = path_join(path_join(base, "attributes"), key);
          const Rule* rule = lookup(exts, [&](const Extension& e) -> const Rule* {
            auto it = e.attributes.find(obj.type);
            return it == e.attributes.end() ? nullptr : find_in(it->second, key);
          });
          if (!rule) {
            add(report, Code::UndeclaredExtensionMember, at, "attribute '" + key + "' is not declared for " + obj.type);
          } else {
            check_rule(*rule, value, at, report);
          }
        }
      }
      for (const auto& [key, value] : obj.extra.items()) {
        if (is_extension_name(key)) {
          add(report, Code::UndeclaredExtensionMember, path_join(base, key), "member '" + key + "' is not declared by any extension");
        }
      }
    }
    if (obj.attributes.is_object()) scan_for_geometry(obj.attributes, path_join(base, "attributes"), report);
    for (const auto& [key, value] : obj.extra.items()) scan_for_geometry(value, path_join(base, key), report);
  }
  report.sort();
  return report;
}

CityModel strip_extensions(const CityModel& model) {
  CityModel out = model;
  std::unordered_set<std::string> removed;
  for (const auto& [id, obj] : model.city_objects) {
    if (is_extension_name(obj.type)) removed.insert(id);
  }
  auto trim = [&](std::optional<std::vector<std::string>>& links) {
    if (!links) return;
    std::erase_if(*links, [&](const std::string& id) { return removed.count(id) > 0; });
    if (links->empty()) links.reset();
  };
  auto drop_plus_keys = [](Json& j) {
    if (!j.is_object()) return;
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) {
      if (is_extension_name(k)) keys.push_back(k);
    }
    for (const auto& k : keys) j.erase(k);
  };

  out.city_objects.clear();
  for (const auto& [id, obj] : model.city_objects) {
    if (removed.count(id)) continue;
    CityObject copy = obj;
    trim(copy.parents);
    trim(copy.children);
    drop_plus_keys(copy.attributes);
    drop_plus_keys(copy.extra);
    if (auto members = copy.extra.find("members"); members != copy.extra.end() && members->is_array()) {
      Json kept = Json::array();
      for (const auto& m : *members) {
        if (!(m.is_string() && removed.count(m.get<std::string>()))) kept.push_back(m);
      }
      *members = std::move(kept);
    }
    out.city_objects.insert(id, std::move(copy));
  }
  drop_plus_keys(out.extra);
  out.extensions.clear();
  if (out.metadata.is_object()) out.metadata.erase("extensions");
  if (!removed.empty()) out = geo::remove_orphan_vertices(out);
  return out;
}

}  // namespace cjtk::ext
