#include "cjtk/ops.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <random>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "cjtk/codec.hpp"
#include "cjtk/error.hpp"
#include "cjtk/geoprocess.hpp"
#include "cjtk/kernels.hpp"

namespace cjtk::ops {
namespace {

using IdSet = std::unordered_set<std::string>;

bool has_appearance_binding(const Geometry& g) { return !g.material.is_null() || !g.texture.is_null(); }

// Object ids plus the ancestors of every 2nd-level object in the set, so no
// part is left without the parent it must list.
IdSet close_over_ancestors(const CityModel& model, IdSet ids) {
  std::deque<std::string> queue(ids.begin(), ids.end());
  while (!queue.empty()) {
    const std::string id = queue.front();
    queue.pop_front();
    const CityObject* obj = model.city_objects.find(id);
    if (!obj || !is_second_level_type(obj->type) || !obj->parents) continue;
    for (const auto& parent : *obj->parents) {
      if (model.city_objects.contains(parent) && ids.insert(parent).second) queue.push_back(parent);
    }
  }
  return ids;
}

std::optional<std::vector<std::string>> filter_links(const std::optional<std::vector<std::string>>& links,
                                                     const IdSet& keep) {
  if (!links) return std::nullopt;
  std::vector<std::string> out;
  for (const auto& id : *links) {
    if (keep.count(id)) out.push_back(id);
  }
  if (out.empty()) return std::nullopt;
  return out;
}

// Copy of `model` restricted to `keep`, with links trimmed, vertices rebuilt
// and unreferenced templates/appearance dropped.
CityModel extract(const CityModel& model, const IdSet& keep) {
  CityModel out;
  out.version = model.version;
  out.transform = model.transform;
  out.metadata = model.metadata;
  out.extensions = model.extensions;
  out.extra = model.extra;
  out.vertices = model.vertices;
  bool uses_templates = false;
  bool uses_appearance = false;
  for (const auto& [id, obj] : model.city_objects) {
    if (!keep.count(id)) continue;
    CityObject copy = obj;
    copy.parents = filter_links(obj.parents, keep);
    copy.children = filter_links(obj.children, keep);
    for (const auto& g : copy.geometry) {
      uses_templates = uses_templates || g.instance.has_value();
      uses_appearance = uses_appearance || has_appearance_binding(g);
    }
    out.city_objects.insert(id, std::move(copy));
  }
  if (uses_templates) {
    out.templates = model.templates;
    if (out.templates) {
      for (const auto& t : out.templates->templates) uses_appearance = uses_appearance || has_appearance_binding(t);
    }
  }
  if (uses_appearance) out.appearance = model.appearance;
  return geo::remove_orphan_vertices(out);
}

struct ExtentAccumulator {
  Vertex min{}, max{};
  bool any = false;

  void add(const Vertex& v) {
    if (!any) {
      min = max = v;
      any = true;
      return;
    }
    for (int a = 0; a < 3; ++a) {
      min[a] = std::min(min[a], v[a]);
      max[a] = std::max(max[a], v[a]);
    }
  }
};

class ExtentIndex {
 public:
  explicit ExtentIndex(const CityModel& model) : model_(model) {
    real_.resize(model.vertices.size());
    if (model.transform) {
      kernels::parallel::dequantize(model.vertices, *model.transform, real_);
    } else {
      real_ = model.vertices;
    }
  }

  void add_object(const CityObject& obj, ExtentAccumulator& acc) const {
    for (const auto& g : obj.geometry) {
      if (g.instance) {
        for (const auto& v : geo::instantiate(model_, g).vertices) acc.add(v);
      } else {
        for_each_index(g.boundaries, [&](Index i) {
          if (i < real_.size()) acc.add(real_[i]);
        });
      }
    }
  }

  ExtentAccumulator of(std::span<const std::string> ids) const {
    ExtentAccumulator acc;
    for (const auto& id : ids) {
      if (const CityObject* obj = model_.city_objects.find(id)) add_object(*obj, acc);
    }
    return acc;
  }

 private:
  const CityModel& model_;
  std::vector<Vertex> real_;
};

std::string file_name_component(std::string_view path) {
  const auto pos = path.find_last_of("/\\");
  return std::string(pos == std::string_view::npos ? path : path.substr(pos + 1));
}

void offset_json_indices(Json& j, std::size_t offset) {
  if (j.is_array()) {
    for (auto& e : j) offset_json_indices(e, offset);
  } else if (j.is_number_integer()) {
    j = j.get<std::int64_t>() + static_cast<std::int64_t>(offset);
  }
}

void offset_texture_values(Json& j, std::size_t texture_offset, std::size_t uv_offset) {
  if (!j.is_array()) return;
  const bool ring_level = std::none_of(j.begin(), j.end(), [](const Json& e) { return e.is_array(); });
  if (!ring_level) {
    for (auto& e : j) offset_texture_values(e, texture_offset, uv_offset);
    return;
  }
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (j[i].is_number_integer()) {
      j[i] = j[i].get<std::int64_t>() + static_cast<std::int64_t>(i == 0 ? texture_offset : uv_offset);
    }
  }
}

void offset_appearance(Geometry& g, std::size_t materials, std::size_t textures, std::size_t uvs) {
  if (g.material.is_object()) {
    for (auto& [theme, binding] : g.material.items()) {
      if (!binding.is_object()) continue;
      if (binding.contains("value")) offset_json_indices(binding["value"], materials);
      if (binding.contains("values")) offset_json_indices(binding["values"], materials);
    }
  }
  if (g.texture.is_object()) {
    for (auto& [theme, binding] : g.texture.items()) {
      if (binding.is_object() && binding.contains("values")) offset_texture_values(binding["values"], textures, uvs);
    }
  }
}

bool same_bank(const TemplateBank& a, const TemplateBank& b) {
  CityModel ma, mb;
  ma.templates = a;
  mb.templates = b;
  return equivalent(ma, mb);
}

bool same_appearance(const Appearance& a, const Appearance& b) {
  CityModel ma, mb;
  ma.appearance = a;
  mb.appearance = b;
  return equivalent(ma, mb);
}

std::optional<int> epsg_of(const CityModel& m) {
  auto rs = reference_system(m);
  if (!rs) return std::nullopt;
  return parse_epsg(*rs);
}

void rename_links(std::optional<std::vector<std::string>>& links,
                  const std::unordered_map<std::string, std::string>& renamed) {
  if (!links) return;
  for (auto& id : *links) {
    auto it = renamed.find(id);
    if (it != renamed.end()) id = it->second;
  }
}

std::string ordinal_id(int index, int k) {
  const std::size_t width = std::to_string(std::max(k - 1, 0)).size();
  std::string s = std::to_string(index);
  return std::string(width > s.size() ? width - s.size() : 0, '0') + s;
}

}  // namespace

std::vector<std::string> with_descendants(const CityModel& model, std::span<const std::string> ids) {
  std::vector<std::string> out;
  IdSet seen;
  std::deque<std::string> queue(ids.begin(), ids.end());
  while (!queue.empty()) {
    std::string id = queue.front();
    queue.pop_front();
    const CityObject* obj = model.city_objects.find(id);
    if (!obj || !seen.insert(id).second) continue;
    out.push_back(id);
    if (obj->children) {
      for (const auto& c : *obj->children) queue.push_back(c);
    }
  }
  return out;
}

std::vector<std::string> first_level_ids(const CityModel& model) {
  std::vector<std::string> out;
  for (const auto& [id, obj] : model.city_objects) {
    bool has_parent = false;
    if (obj.parents) {
      for (const auto& p : *obj.parents) has_parent = has_parent || model.city_objects.contains(p);
    }
    if (!has_parent) out.push_back(id);
  }
  return out;
}

CityModel subset(const CityModel& model, const Selector& selector) {
  std::vector<std::string> picked;
  if (const auto* sel = std::get_if<IdSelection>(&selector)) {
    for (const auto& id : sel->ids) {
      if (!model.city_objects.contains(id)) {
        throw Error(Code::UnknownId, path_join("CityObjects", id), "no city object '" + id + "'");
      }
      picked.push_back(id);
    }
  } else if (const auto* sel = std::get_if<TypeSelection>(&selector)) {
    for (const auto& [id, obj] : model.city_objects) {
      if (std::find(sel->types.begin(), sel->types.end(), obj.type) != sel->types.end()) picked.push_back(id);
    }
  } else {
    const auto& box = std::get<BBoxSelection>(selector).bbox;
    const ExtentIndex extents(model);
    for (const auto& id : first_level_ids(model)) {
      std::vector<std::string> unit = with_descendants(model, std::vector<std::string>{id});
      auto acc = extents.of(unit);
      const CityObject& obj = model.city_objects.at(id);
      if (!acc.any && obj.type == "CityObjectGroup" && obj.extra.contains("members")) {
        // A group without geometry of its own is located by its members.
        std::vector<std::string> members;
        for (const auto& m : obj.extra["members"]) {
          if (m.is_string() && model.city_objects.contains(m.get<std::string>())) members.push_back(m.get<std::string>());
        }
        acc = extents.of(with_descendants(model, members));
      }
      if (!acc.any) continue;
      const double cx = 0.5 * (acc.min[0] + acc.max[0]);
      const double cy = 0.5 * (acc.min[1] + acc.max[1]);
      if (cx >= box[0] && cx <= box[2] && cy >= box[1] && cy <= box[3]) picked.push_back(id);
    }
  }
  const auto closure = with_descendants(model, picked);
  return extract(model, close_over_ancestors(model, IdSet(closure.begin(), closure.end())));
}

CityModel merge(std::span<const CityModel> models, IdPolicy policy) {
  if (models.empty()) return CityModel{};
  const auto crs = epsg_of(models.front());
  for (const auto& m : models) {
    if (epsg_of(m) != crs || reference_system(m).has_value() != reference_system(models.front()).has_value()) {
      throw Error(Code::CrsMismatch, "metadata/referenceSystem", "inputs use different reference systems");
    }
  }

  const bool any_transform = std::any_of(models.begin(), models.end(), [](const CityModel& m) { return m.transform.has_value(); });
  const bool shared_transform =
      any_transform && std::all_of(models.begin(), models.end(), [&](const CityModel& m) {
        return m.transform && *m.transform == *models.front().transform;
      });
  std::optional<std::array<double, 3>> finest;
  if (any_transform && !shared_transform) {
    for (const auto& m : models) {
      if (!m.transform) continue;
      if (!finest) {
        finest = m.transform->scale;
      } else {
        for (int a = 0; a < 3; ++a) (*finest)[a] = std::min((*finest)[a], m.transform->scale[a]);
      }
    }
  }

  CityModel out;
  out.version = models.front().version;
  out.metadata = models.front().metadata;
  if (shared_transform) out.transform = models.front().transform;

  struct Offsets {
    std::size_t templates = 0, template_vertices = 0;
    std::size_t materials = 0, textures = 0, uvs = 0;
  };
  std::vector<Offsets> bank_offsets(models.size());
  std::vector<Offsets> appearance_offsets(models.size());
  std::unordered_set<std::string> taken;

  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    const CityModel m = (!shared_transform && models[mi].transform) ? geo::dequantize(models[mi]) : models[mi];
    for (const auto& [name, ref] : m.extensions) out.extensions.emplace(name, ref);
    for (const auto& [k, v] : m.extra.items()) {
      if (!out.extra.contains(k)) out.extra[k] = v;
    }

    Offsets app;
    if (m.appearance) {
      std::optional<std::size_t> reuse;
      for (std::size_t j = 0; j < mi && !reuse; ++j) {
        if (models[j].appearance && same_appearance(*models[j].appearance, *m.appearance)) reuse = j;
      }
      if (reuse) {
        app = appearance_offsets[*reuse];
      } else {
        if (!out.appearance) out.appearance.emplace();
        Appearance& dst = *out.appearance;
        app = {0, 0, dst.materials.size(), dst.textures.size(), dst.vertices_texture.size()};
        dst.materials.insert(dst.materials.end(), m.appearance->materials.begin(), m.appearance->materials.end());
        dst.textures.insert(dst.textures.end(), m.appearance->textures.begin(), m.appearance->textures.end());
        dst.vertices_texture.insert(dst.vertices_texture.end(), m.appearance->vertices_texture.begin(),
                                    m.appearance->vertices_texture.end());
        for (const auto& [k, v] : m.appearance->extra.items()) {
          if (!dst.extra.contains(k)) dst.extra[k] = v;
        }
      }
    }
    appearance_offsets[mi] = app;

    Offsets bank;
    if (m.templates) {
      std::optional<std::size_t> reuse;
      for (std::size_t j = 0; j < mi && !reuse; ++j) {
        if (models[j].templates && same_bank(*models[j].templates, *m.templates)) reuse = j;
      }
      if (reuse) {
        bank = bank_offsets[*reuse];
      } else {
        if (!out.templates) out.templates.emplace();
        TemplateBank& dst = *out.templates;
        bank.templates = dst.templates.size();
        bank.template_vertices = dst.vertices.size();
        for (Geometry t : m.templates->templates) {
          for_each_index(t.boundaries, [&](Index& i) { i += bank.template_vertices; });
          offset_appearance(t, app.materials, app.textures, app.uvs);
          dst.templates.push_back(std::move(t));
        }
        dst.vertices.insert(dst.vertices.end(), m.templates->vertices.begin(), m.templates->vertices.end());
        for (const auto& [k, v] : m.templates->extra.items()) {
          if (!dst.extra.contains(k)) dst.extra[k] = v;
        }
      }
    }
    bank_offsets[mi] = bank;

    std::unordered_map<std::string, std::string> renamed;
    std::unordered_set<std::string> own;
    for (const auto& [id, obj] : m.city_objects) own.insert(id);
    for (const auto& [id, obj] : m.city_objects) {
      if (!taken.count(id)) continue;
      if (policy == IdPolicy::Error) {
        throw Error(Code::DuplicateId, path_join("CityObjects", id), "id '" + id + "' occurs in more than one input");
      }
      for (int n = 1;; ++n) {
        std::string candidate = id + "-" + std::to_string(n);
        if (!taken.count(candidate) && !own.count(candidate)) {
          renamed[id] = candidate;
          own.insert(candidate);
          break;
        }
      }
    }

    const std::size_t vertex_offset = out.vertices.size();
    out.vertices.insert(out.vertices.end(), m.vertices.begin(), m.vertices.end());
    for (const auto& [id, obj] : m.city_objects) {
      CityObject copy = obj;
      rename_links(copy.parents, renamed);
      rename_links(copy.children, renamed);
      if (auto members = copy.extra.find("members"); members != copy.extra.end() && members->is_array()) {
        for (auto& member : *members) {
          if (!member.is_string()) continue;
          auto it = renamed.find(member.get<std::string>());
          if (it != renamed.end()) member = it->second;
        }
      }
      for (auto& g : copy.geometry) {
        if (g.instance) {
          g.instance->reference_point += vertex_offset;
          g.instance->template_index += bank.templates;
        } else {
          for_each_index(g.boundaries, [&](Index& i) { i += vertex_offset; });
        }
        offset_appearance(g, app.materials, app.textures, app.uvs);
      }
      auto it = renamed.find(id);
      const std::string& new_id = it == renamed.end() ? id : it->second;
      taken.insert(new_id);
      out.city_objects.insert(new_id, std::move(copy));
    }
  }

  if (finest) {
    Transform t;
    t.scale = *finest;
    const auto b = kernels::parallel::bounds(out.vertices, {});
    t.translate = b.count > 0 ? b.min : Vertex{0, 0, 0};
    out = geo::quantize_with(out, t);
  }
  return geo::remove_orphan_vertices(geo::dedupe_vertices(out, 0.0));
}

std::vector<Part> partition(const CityModel& model, const PartitionStrategy& strategy) {
  if (model.city_objects.empty()) throw Error(Code::EmptyModel, "CityObjects", "nothing to partition");

  // Units: a 1st-level object with its descendants. Groups are placed last.
  std::vector<std::string> roots;
  std::vector<std::string> groups;
  for (const auto& id : first_level_ids(model)) {
    const CityObject& obj = model.city_objects.at(id);
    auto members = obj.extra.find("members");
    const bool follows_member = obj.type == "CityObjectGroup" && members != obj.extra.end() && members->is_array() &&
                                !members->empty() && members->front().is_string() &&
                                model.city_objects.contains(members->front().get<std::string>());
    (follows_member ? groups : roots).push_back(id);
  }

  std::map<std::string, std::vector<std::string>> assigned;  // part id -> unit roots
  std::unordered_map<std::string, std::string> part_of;      // any object id -> part id
  auto assign = [&](const std::string& root, const std::string& part) {
    assigned[part].push_back(root);
    for (const auto& id : with_descendants(model, std::vector<std::string>{root})) part_of[id] = part;
  };

  if (const auto* grid = std::get_if<GridStrategy>(&strategy)) {
    if (grid->nx < 1 || grid->ny < 1) throw Error(Code::BadArgument, "", "grid needs at least one cell");
    const ExtentIndex extents(model);
    std::vector<std::string> every;
    for (const auto& [id, obj] : model.city_objects) every.push_back(id);
    const auto full = extents.of(every);
    const double w = full.any ? (full.max[0] - full.min[0]) / grid->nx : 0.0;
    const double h = full.any ? (full.max[1] - full.min[1]) / grid->ny : 0.0;
    // Centre exactly on a cell boundary belongs to the lower-index cell.
    auto cell = [](double offset, double size, int n) {
      if (!(size > 0.0)) return 0;
      const int c = static_cast<int>(std::ceil(offset / size)) - 1;
      return std::clamp(c, 0, n - 1);
    };
    for (const auto& root : roots) {
      const auto acc = extents.of(with_descendants(model, std::vector<std::string>{root}));
      int row = 0, col = 0;
      if (acc.any) {
        col = cell(0.5 * (acc.min[0] + acc.max[0]) - full.min[0], w, grid->nx);
        row = cell(0.5 * (acc.min[1] + acc.max[1]) - full.min[1], h, grid->ny);
      }
      assign(root, "r" + std::to_string(row) + "c" + std::to_string(col));
    }
  } else if (std::holds_alternative<ByTypeStrategy>(strategy)) {
    for (const auto& root : roots) assign(root, model.city_objects.at(root).type);
  } else {
    const auto& random = std::get<RandomStrategy>(strategy);
    if (random.k < 1) throw Error(Code::BadArgument, "", "random partitioning needs k >= 1");
    std::mt19937_64 rng(random.seed);
    std::uniform_int_distribution<int> pick(0, random.k - 1);
    for (const auto& root : roots) assign(root, ordinal_id(pick(rng), random.k));
  }

  for (const auto& group : groups) {
    const auto& members = model.city_objects.at(group).extra.at("members");
    auto it = part_of.find(members.front().get<std::string>());
    std::string part;
    if (it != part_of.end()) {
      part = it->second;
    } else if (!assigned.empty()) {
      part = assigned.begin()->first;
    } else if (std::holds_alternative<ByTypeStrategy>(strategy)) {
      part = "CityObjectGroup";
    } else if (std::holds_alternative<GridStrategy>(strategy)) {
      part = "r0c0";
    } else {
      part = ordinal_id(0, std::get<RandomStrategy>(strategy).k);
    }
    assign(group, part);
  }

  std::vector<Part> parts;
  for (const auto& [part_id, unit_roots] : assigned) {
    const auto ids = with_descendants(model, unit_roots);
    if (ids.empty()) continue;
    parts.push_back({part_id, extract(model, IdSet(ids.begin(), ids.end()))});
  }
  return parts;
}

std::string part_file_name(std::string_view stem, std::string_view part_id) {
  return std::string(stem) + "_" + std::string(part_id) + ".json";
}

CityModel update_texture_paths(const CityModel& model, std::string_view new_base) {
  CityModel out = model;
  if (out.appearance) {
    for (auto& t : out.appearance->textures) t.image = std::string(new_base) + file_name_component(t.image);
  }
  return out;
}

CityModel refresh_metadata(const CityModel& model) {
  CityModel out = model;
  if (!out.metadata.is_object()) out.metadata = Json::object();
  Json& md = out.metadata;
  try {
    const Extent e = geo::compute_extent(model);
    Json extent = Json::array();
    for (double x : e) extent.push_back(number_value(x));
    md["geographicalExtent"] = std::move(extent);
  } catch (const Error& e) {
    if (e.code() != Code::EmptyModel) throw;
    md.erase("geographicalExtent");
  }
  std::map<double, std::size_t> lods;
  for (const auto& [id, obj] : model.city_objects) {
    for (const auto& g : obj.geometry) {
      std::optional<double> lod = g.lod;
      if (!lod && g.instance && model.templates && g.instance->template_index < model.templates->templates.size()) {
        lod = model.templates->templates[g.instance->template_index].lod;
      }
      if (lod) ++lods[*lod];
    }
  }
  Json present = Json::object();
  for (const auto& [lod, n] : lods) present[number_value(lod).dump()] = n;
  md["presentLoDs"] = std::move(present);
  const bool textures = model.appearance && !model.appearance->textures.empty();
  const bool materials = model.appearance && !model.appearance->materials.empty();
  md["textures"] = textures ? "present" : "absent";
  md["materials"] = materials ? "present" : "absent";
  if (model.extensions.empty()) {
    md.erase("extensions");
  } else {
    Json ext = Json::object();
    for (const auto& [name, ref] : model.extensions) ext[name] = Json{{"url", ref.url}, {"version", ref.version}};
    md["extensions"] = std::move(ext);
  }
  return out;
}

Stats stats(const CityModel& model) {
  Stats s;
  s.city_objects = model.city_objects.size();
  for (const auto& [id, obj] : model.city_objects) {
    ++s.object_types[obj.type];
    for (const auto& g : obj.geometry) ++s.geometry_kinds[std::string(to_string(g.kind))];
  }
  s.vertices = model.vertices.size();
  s.templates = model.templates ? model.templates->templates.size() : 0;
  s.minified_bytes = codec::serialize(model).size();
  return s;
}

Json to_json(const Stats& s) {
  Json types = Json::object();
  for (const auto& [k, n] : s.object_types) types[k] = n;
  Json kinds = Json::object();
  for (const auto& [k, n] : s.geometry_kinds) kinds[k] = n;
  return Json{{"city_objects", s.city_objects}, {"object_types", types},   {"geometry_kinds", kinds},
              {"vertices", s.vertices},         {"templates", s.templates}, {"minified_bytes", s.minified_bytes}};
}

}  // namespace cjtk::ops
