#include "cjtk/geoprocess.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>

#include "cjtk/error.hpp"
#include "cjtk/kernels.hpp"

namespace cjtk::geo {
namespace {

constexpr double kMaxExactQuantum = 9007199254740992.0;  // 2^53

template <class F>
void for_each_model_geometry(CityModel& model, F&& f) {
  for (auto& [id, obj] : model.city_objects) {
    for (auto& g : obj.geometry) f(g);
  }
}

void remap_model_indices(CityModel& model, std::span<const Index> old_to_new) {
  for_each_model_geometry(model, [&](Geometry& g) {
    if (g.instance) {
      g.instance->reference_point = old_to_new[g.instance->reference_point];
    } else {
      for_each_index(g.boundaries, [&](Index& i) { i = old_to_new[i]; });
    }
  });
}

std::vector<Vertex> real_vertices(const CityModel& model) {
  if (!model.transform) return model.vertices;
  std::vector<Vertex> out(model.vertices.size());
  kernels::parallel::dequantize(model.vertices, *model.transform, out);
  return out;
}

struct CellKey {
  std::int64_t x, y, z;
  bool operator==(const CellKey&) const = default;
};

struct CellHash {
  std::size_t operator()(const CellKey& k) const {
    return static_cast<std::size_t>(k.x * 73856093) ^ static_cast<std::size_t>(k.y * 19349663) ^
           static_cast<std::size_t>(k.z * 83492791);
  }
};

struct VertexHash {
  std::size_t operator()(const Vertex& v) const {
    std::size_t h = 0;
    for (double c : v) h = h * 1000003u ^ std::hash<double>{}(c);
    return h;
  }
};

}  // namespace

CityModel quantize_with(const CityModel& model, const Transform& transform) {
  if (model.transform) throw Error(Code::AlreadyQuantized, "transform", "model already has a transform");
  for (int a = 0; a < 3; ++a) {
    if (!std::isfinite(transform.scale[a]) || transform.scale[a] <= 0.0) {
      throw Error(Code::BadTransform, "transform/scale", "scale factors must be finite and positive");
    }
  }
  CityModel out = model;
  const double worst = kernels::parallel::quantize(model.vertices, transform, out.vertices);
  if (worst > kMaxExactQuantum) {
    throw Error(Code::QuantumOverflow, "vertices", "quantized coordinates exceed 2^53");
  }
  out.transform = transform;
  return out;
}

CityModel quantize(const CityModel& model, const QuantizationParams& params) {
  if (params.important_digits < 0 || params.important_digits > 12) {
    throw Error(Code::BadArgument, "", "important digits must be in [0, 12]");
  }
  if (model.transform && !params.requantize) {
    throw Error(Code::AlreadyQuantized, "transform", "model already has a transform");
  }
  const CityModel real = model.transform ? dequantize(model) : model;
  const double scale = 1.0 / std::pow(10.0, params.important_digits);
  Transform t;
  t.scale = {scale, scale, scale};
  const auto b = kernels::parallel::bounds(real.vertices, {});
  t.translate = b.count > 0 ? b.min : Vertex{0, 0, 0};
  return quantize_with(real, t);
}

CityModel dequantize(const CityModel& model) {
  if (!model.transform) throw Error(Code::NoTransform, "transform", "model has no transform");
  CityModel out = model;
  kernels::parallel::dequantize(model.vertices, *model.transform, out.vertices);
  out.transform.reset();
  return out;
}

CityModel dedupe_vertices(const CityModel& model, double tolerance) {
  if (!(tolerance >= 0.0) || !std::isfinite(tolerance)) {
    throw Error(Code::BadArgument, "", "tolerance must be a finite number >= 0");
  }
  const auto& v = model.vertices;
  std::vector<Index> old_to_new(v.size());
  std::vector<Vertex> survivors;

  if (tolerance == 0.0) {
    std::unordered_map<Vertex, Index, VertexHash> seen;
    for (Index i = 0; i < v.size(); ++i) {
      auto [it, fresh] = seen.emplace(v[i], survivors.size());
      if (fresh) survivors.push_back(v[i]);
      old_to_new[i] = it->second;
    }
  } else {
    std::unordered_map<CellKey, std::vector<Index>, CellHash> grid;  // cell -> survivor slots
    auto cell_of = [&](const Vertex& p) {
      return CellKey{static_cast<std::int64_t>(std::floor(p[0] / tolerance)),
                     static_cast<std::int64_t>(std::floor(p[1] / tolerance)),
                     static_cast<std::int64_t>(std::floor(p[2] / tolerance))};
    };
    for (Index i = 0; i < v.size(); ++i) {
      const CellKey c = cell_of(v[i]);
      Index best = std::numeric_limits<Index>::max();
      for (int dx = -1; dx <= 1; ++dx)
        for (int dy = -1; dy <= 1; ++dy)
          for (int dz = -1; dz <= 1; ++dz) {
            auto it = grid.find({c.x + dx, c.y + dy, c.z + dz});
            if (it == grid.end()) continue;
            for (Index s : it->second) {
              const Vertex& p = survivors[s];
              if (s < best && std::fabs(p[0] - v[i][0]) <= tolerance && std::fabs(p[1] - v[i][1]) <= tolerance &&
                  std::fabs(p[2] - v[i][2]) <= tolerance) {
                best = s;
              }
            }
          }
      if (best == std::numeric_limits<Index>::max()) {
        best = survivors.size();
        survivors.push_back(v[i]);
        grid[c].push_back(best);
      }
      old_to_new[i] = best;
    }
  }

  CityModel out = model;
  out.vertices = std::move(survivors);
  remap_model_indices(out, old_to_new);
  return out;
}

std::vector<std::uint8_t> referenced_vertices(const CityModel& model) {
  std::vector<Index> flat;
  for (const auto& [id, obj] : model.city_objects) {
    for (const auto& g : obj.geometry) {
      if (g.instance) {
        flat.push_back(g.instance->reference_point);
      } else {
        for_each_index(g.boundaries, [&](Index i) { flat.push_back(i); });
      }
    }
  }
  std::vector<std::uint8_t> used(model.vertices.size(), 0);
  kernels::parallel::mark_used(flat, used);
  return used;
}

CityModel compact_vertices(const CityModel& model, std::span<const std::uint8_t> keep) {
  std::vector<Index> old_to_new(model.vertices.size(), std::numeric_limits<Index>::max());
  CityModel out = model;
  out.vertices.clear();
  for (Index i = 0; i < model.vertices.size(); ++i) {
    if (keep[i]) {
      old_to_new[i] = out.vertices.size();
      out.vertices.push_back(model.vertices[i]);
    }
  }
  remap_model_indices(out, old_to_new);
  return out;
}

CityModel remove_orphan_vertices(const CityModel& model) {
  const auto used = referenced_vertices(model);
  return compact_vertices(model, used);
}

InstantiatedGeometry instantiate(const CityModel& model, const Geometry& instance) {
  if (!instance.instance) throw Error(Code::BadArgument, "", "geometry is not a GeometryInstance");
  const GeometryInstance& inst = *instance.instance;
  if (!model.templates || inst.template_index >= model.templates->templates.size()) {
    throw Error(Code::TemplateIndexOutOfRange, "template",
                "template " + std::to_string(inst.template_index) + " does not exist");
  }
  if (inst.matrix.size() != 16) throw Error(Code::BadMatrix, "transformationMatrix", "expected 16 numbers");
  for (double x : inst.matrix) {
    if (!std::isfinite(x)) throw Error(Code::BadMatrix, "transformationMatrix", "matrix entries must be finite");
  }
  const Vertex ref = real_world_vertex(model, inst.reference_point);
  const TemplateBank& bank = *model.templates;
  const Geometry& tmpl = bank.templates[inst.template_index];
  if (tmpl.instance) throw Error(Code::BadGeometryShape, "template", "a template cannot be an instance");

  InstantiatedGeometry out;
  out.geometry = tmpl;
  std::map<Index, Index> local;
  const auto& m = inst.matrix;
  for_each_index(out.geometry.boundaries, [&](Index& i) {
    auto [it, fresh] = local.emplace(i, out.vertices.size());
    if (fresh) {
      if (i >= bank.vertices.size()) {
        throw Error(Code::VertexIndexOutOfRange, "geometry-templates/vertices-templates",
                    "template vertex " + std::to_string(i) + " does not exist");
      }
      const Vertex& p = bank.vertices[i];
      Vertex w;
      for (int r = 0; r < 3; ++r) {
        w[r] = ref[r] + m[r * 4 + 0] * p[0] + m[r * 4 + 1] * p[1] + m[r * 4 + 2] * p[2] + m[r * 4 + 3];
      }
      out.vertices.push_back(w);
    }
    i = it->second;
  });
  return out;
}

InstantiatedGeometry instantiate_template(const CityModel& model, std::string_view object_id,
                                          std::size_t geometry_index) {
  const CityObject& obj = model.city_objects.at(object_id);
  if (geometry_index >= obj.geometry.size()) {
    throw Error(Code::BadArgument, path_join("CityObjects", object_id), "no geometry " + std::to_string(geometry_index));
  }
  return instantiate(model, obj.geometry[geometry_index]);
}

Extent compute_extent(const CityModel& model) {
  std::vector<Index> flat;
  std::vector<const Geometry*> instances;
  for (const auto& [id, obj] : model.city_objects) {
    for (const auto& g : obj.geometry) {
      if (g.instance) {
        instances.push_back(&g);
      } else {
        for_each_index(g.boundaries, [&](Index i) { flat.push_back(i); });
      }
    }
  }
  std::vector<std::uint8_t> used(model.vertices.size(), 0);
  if (kernels::parallel::mark_used(flat, used) > 0) {
    throw Error(Code::VertexIndexOutOfRange, "vertices", "boundary index beyond the vertex list");
  }
  const auto real = real_vertices(model);
  auto b = kernels::parallel::bounds(real, used);
  for (const Geometry* g : instances) {
    const auto inst = instantiate(model, *g);
    const auto ib = kernels::parallel::bounds(inst.vertices, {});
    if (ib.count == 0) continue;
    if (b.count == 0) {
      b = ib;
      continue;
    }
    for (int a = 0; a < 3; ++a) {
      b.min[a] = std::min(b.min[a], ib.min[a]);
      b.max[a] = std::max(b.max[a], ib.max[a]);
    }
    b.count += ib.count;
  }
  if (b.count == 0) throw Error(Code::EmptyModel, "", "no referenced vertices");
  return {b.min[0], b.min[1], b.min[2], b.max[0], b.max[1], b.max[2]};
}

}  // namespace cjtk::geo
