#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "cjtk/codec.hpp"
#include "cjtk/geoprocess.hpp"
#include "cjtk/ops.hpp"
#include "cjtk/validator.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"

using namespace cjtk;
using namespace cjtk::testing;

namespace {

Code error_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return Code::IoError;
}

CityModel load(const std::string& name) { return codec::parse(read_text(data_path("corpus/" + name))).model; }

CityObject box_object(std::string type, CityModel& m, Vertex origin, double lod = 1.0) {
  const Index base = m.vertices.size();
  for (double z : {0.0, 1.0}) {
    m.vertices.push_back({origin[0], origin[1], origin[2] + z});
    m.vertices.push_back({origin[0] + 1, origin[1], origin[2] + z});
    m.vertices.push_back({origin[0] + 1, origin[1] + 1, origin[2] + z});
    m.vertices.push_back({origin[0], origin[1] + 1, origin[2] + z});
  }
  Geometry g;
  g.kind = GeometryKind::MultiSurface;
  g.lod = lod;
  g.boundaries = Shell{Surface{Ring{base, base + 3, base + 2, base + 1}}, Surface{Ring{base + 4, base + 5, base + 6, base + 7}}};
  CityObject o;
  o.type = std::move(type);
  o.geometry.push_back(g);
  return o;
}

CityModel two_buildings() {
  CityModel m;
  m.city_objects.insert("west", box_object("Building", m, {0, 0, 0}));
  m.city_objects.insert("east", box_object("Building", m, {10, 0, 0}));
  return m;
}

void expect_clean(const CityModel& m) {
  auto r = validate::validate_structure(m);
  r.append(validate::validate_consistency(m));
  EXPECT_TRUE(r.valid()) << validate::to_text(r);
  EXPECT_EQ(r.count(Code::OrphanVertex), 0u) << validate::to_text(r);
}

CityModel city(std::uint64_t seed, bool quantized = false) {
  CityOptions o;
  o.seed = seed;
  o.buildings = 30;
  o.group = seed % 2 == 1;
  CityModel m = make_city(o);
  return quantized ? geo::quantize(m, {3}) : m;
}

double coordinate_tolerance(const CityModel& m) { return m.transform ? 0.5 * m.transform->scale[0] + 1e-9 : 1e-9; }

}  // namespace

TEST(Subset, ByIdFollowsChildren) {
  auto s = ops::subset(load("snippet_building_parts.json"), ops::IdSelection{{"id-1"}});
  EXPECT_EQ(s.city_objects.size(), 3u);
  EXPECT_TRUE(s.city_objects.contains("id-2"));
  EXPECT_TRUE(s.city_objects.contains("id-3"));
  expect_clean(s);
}

TEST(Subset, ByTypeDropsOthers) {
  CityModel m;
  m.city_objects.insert("b", box_object("Building", m, {0, 0, 0}));
  m.city_objects.insert("r", box_object("Road", m, {5, 5, 0}));
  auto s = ops::subset(m, ops::TypeSelection{{"Building"}});
  EXPECT_TRUE(s.city_objects.contains("b"));
  EXPECT_FALSE(s.city_objects.contains("r"));
  EXPECT_EQ(s.vertices.size(), 8u);
  expect_clean(s);
}

TEST(Subset, UnknownIdIsAnError) {
  EXPECT_EQ(error_code([] { ops::subset(load("snippet_building_parts.json"), ops::IdSelection{{"id-9"}}); }), Code::UnknownId);
}

TEST(Subset, FullExtentBoxEqualsOrphanRemoval) {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const CityModel m = city(seed, seed > 2);
    const Extent e = *oracle_extent(m);
    const auto s = ops::subset(m, ops::BBoxSelection{{e[0], e[1], e[3], e[4]}});
    const auto expected = geo::remove_orphan_vertices(m);
    EXPECT_EQ(scene_difference(s, expected, 0), "");
    EXPECT_EQ(s.vertices.size(), expected.vertices.size());
    expect_clean(s);
  }
}

TEST(Subset, SelectedChildKeepsNoDanglingParent) {
  CityOptions o;
  o.part_ratio = 1.0;
  o.trees = 0;
  const CityModel m = make_city(o);
  const auto s = ops::subset(m, ops::TypeSelection{{"BuildingPart"}});
  for (const auto& [id, obj] : s.city_objects) {
    if (obj.parents) {
      for (const auto& p : *obj.parents) EXPECT_TRUE(s.city_objects.contains(p)) << id;
    }
  }
  expect_clean(s);
}

TEST(Subset, TemplatesOnlyWhenReferenced) {
  const CityModel m = city(1);
  ASSERT_TRUE(m.templates.has_value());
  EXPECT_FALSE(ops::subset(m, ops::TypeSelection{{"Building"}}).templates.has_value());
  const auto trees = ops::subset(m, ops::TypeSelection{{"SolitaryVegetationObject"}});
  EXPECT_TRUE(trees.templates.has_value());
  expect_clean(trees);
}

TEST(Merge, SingleModelIsIdentity) {
  for (bool q : {false, true}) {
    const CityModel m = city(2, q);
    const CityModel out = ops::merge(std::vector<CityModel>{m}, ops::IdPolicy::Error);
    EXPECT_EQ(scene_difference(out, m, 0), "");
  }
}

TEST(Merge, DisjointModelsKeepCoordinates) {
  CityModel a, b;
  a.city_objects.insert("a", box_object("Building", a, {100.123, 200.456, 1.5}));
  b.city_objects.insert("b", box_object("Building", b, {300.5, 400.25, 2.0}));
  a = geo::quantize(a, {2});
  b = geo::quantize(b, {3});
  const CityModel out = ops::merge(std::vector<CityModel>{a, b}, ops::IdPolicy::Error);
  EXPECT_EQ(out.city_objects.size(), 2u);
  ASSERT_TRUE(out.transform.has_value());
  EXPECT_EQ(out.transform->scale[0], 0.001);
  EXPECT_EQ(scene_difference(out, ops::subset(out, ops::IdSelection{{"a"}}), 0).empty(), false);
  EXPECT_EQ(scene_difference(ops::subset(out, ops::IdSelection{{"a"}}), a, coordinate_tolerance(out)), "");
  EXPECT_EQ(scene_difference(ops::subset(out, ops::IdSelection{{"b"}}), b, coordinate_tolerance(out)), "");
  expect_clean(out);
}

TEST(Merge, DuplicateIdsUnderBothPolicies) {
  CityModel a, b;
  a.city_objects.insert("b1", box_object("Building", a, {0, 0, 0}));
  b.city_objects.insert("b1", box_object("Building", b, {5, 0, 0}));
  const std::vector<CityModel> both{a, b};
  EXPECT_EQ(error_code([&] { ops::merge(both, ops::IdPolicy::Error); }), Code::DuplicateId);
  const CityModel out = ops::merge(both, ops::IdPolicy::Suffix);
  EXPECT_TRUE(out.city_objects.contains("b1"));
  EXPECT_TRUE(out.city_objects.contains("b1-1"));
  expect_clean(out);
}

TEST(Merge, SuffixRenamesLinks) {
  const CityModel m = load("snippet_building_parts.json");
  const CityModel out = ops::merge(std::vector<CityModel>{m, m}, ops::IdPolicy::Suffix);
  EXPECT_EQ(out.city_objects.size(), 6u);
  EXPECT_EQ(*out.city_objects.at("id-1-1").children, (std::vector<std::string>{"id-2-1", "id-3-1"}));
  expect_clean(out);
}

TEST(Merge, CrsMustAgree) {
  CityModel a = two_buildings(), b;
  b.city_objects.insert("x", box_object("Road", b, {0, 0, 0}));
  a.metadata = Json{{"referenceSystem", "urn:ogc:def:crs:EPSG::7415"}};
  EXPECT_EQ(error_code([&] { ops::merge(std::vector<CityModel>{a, b}, ops::IdPolicy::Error); }), Code::CrsMismatch);
  b.metadata = Json{{"referenceSystem", "EPSG:28992"}};
  EXPECT_EQ(error_code([&] { ops::merge(std::vector<CityModel>{a, b}, ops::IdPolicy::Error); }), Code::CrsMismatch);
  b.metadata = Json{{"referenceSystem", "EPSG:7415"}};
  EXPECT_NO_THROW(ops::merge(std::vector<CityModel>{a, b}, ops::IdPolicy::Error));
}

TEST(Merge, AppearanceIndicesAreOffset) {
  const CityModel m = load("minimal_appearance.json");
  CityModel other = m;
  other.city_objects.clear();
  other.city_objects.insert("c", m.city_objects.at("b"));
  other.appearance->materials[0]["name"] = "changed";
  other.appearance->textures[0].image = "appearances/other.jpg";
  const CityModel out = ops::merge(std::vector<CityModel>{m, other}, ops::IdPolicy::Error);
  EXPECT_EQ(out.appearance->materials.size(), 4u);
  EXPECT_EQ(out.appearance->textures.size(), 2u);
  const Geometry& g = out.city_objects.at("c").geometry[0];
  EXPECT_EQ(g.material["irradiation"]["values"], Json::array({2, 3}));
  EXPECT_EQ(g.texture["winter"]["values"][0][0], Json::array({1, 4, 5, 6, 7}));
}

TEST(Partition, RandomSinglePart) {
  const CityModel m = city(3);
  const auto parts = ops::partition(m, ops::RandomStrategy{1, 42});
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_EQ(scene_difference(parts[0].model, geo::remove_orphan_vertices(m), 0), "");
}

TEST(Partition, GridOverTwoBuildings) {
  const CityModel m = two_buildings();
  const auto parts = ops::partition(m, ops::GridStrategy{2, 1});
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts[0].id, "r0c0");
  EXPECT_EQ(parts[1].id, "r0c1");
  for (const auto& p : parts) {
    ASSERT_EQ(p.model.city_objects.size(), 1u);
    EXPECT_EQ(p.model.vertices.size(), 8u);
    Index lo = 100, hi = 0;
    for (const auto& [id, obj] : p.model.city_objects) {
      for_each_index(obj.geometry[0].boundaries, [&](Index i) {
        lo = std::min(lo, i);
        hi = std::max(hi, i);
      });
    }
    EXPECT_EQ(lo, 0u);
    EXPECT_EQ(hi, 7u);
  }
  EXPECT_TRUE(parts[0].model.city_objects.contains("west"));
  EXPECT_EQ(scene_difference(parts[1].model, ops::subset(m, ops::IdSelection{{"east"}}), 0), "");
}

TEST(Partition, MergeRestoresTheModel) {
  const std::vector<ops::PartitionStrategy> strategies = {ops::GridStrategy{3, 2}, ops::ByTypeStrategy{},
                                                          ops::RandomStrategy{4, 7}};
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const CityModel m = city(seed, seed % 2 == 0);
    const std::size_t original = codec::serialize(m).size();
    for (const auto& s : strategies) {
      const auto parts = ops::partition(m, s);
      std::vector<CityModel> models;
      std::size_t total = 0;
      for (const auto& p : parts) {
        expect_clean(p.model);
        total += codec::serialize(p.model).size();
        models.push_back(p.model);
      }
      const CityModel back = ops::merge(models, ops::IdPolicy::Error);
      EXPECT_EQ(scene_difference(back, m, coordinate_tolerance(m)), "") << "seed " << seed;
      EXPECT_LE(static_cast<double>(total), 1.10 * static_cast<double>(original));
    }
  }
}

TEST(Partition, ByTypeAndRandomIds) {
  const CityModel m = city(2);
  std::vector<std::string> ids;
  for (const auto& p : ops::partition(m, ops::ByTypeStrategy{})) ids.push_back(p.id);
  EXPECT_EQ(ids, (std::vector<std::string>{"Building", "Road", "SolitaryVegetationObject"}));
  const auto a = ops::partition(m, ops::RandomStrategy{12, 5});
  const auto b = ops::partition(m, ops::RandomStrategy{12, 5});
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].id.size(), 2u);
    EXPECT_EQ(codec::serialize(a[i].model), codec::serialize(b[i].model));
  }
}

TEST(Partition, GroupsTravelWithTheirFirstMember) {
  const CityModel m = city(1);
  ASSERT_TRUE(m.city_objects.contains("group-1"));
  for (const auto& p : ops::partition(m, ops::GridStrategy{4, 4})) {
    if (p.model.city_objects.contains("group-1")) {
      const Json& members = p.model.city_objects.at("group-1").extra["members"];
      ASSERT_FALSE(members.empty());
      EXPECT_TRUE(p.model.city_objects.contains(members[0].get<std::string>()));
    }
  }
}

TEST(Partition, EmptyModel) {
  EXPECT_EQ(error_code([] { ops::partition(CityModel{}, ops::ByTypeStrategy{}); }), Code::EmptyModel);
  EXPECT_EQ(ops::part_file_name("city", "r0c1"), "city_r0c1.json");
}

TEST(Textures, BaseReplacesDirectory) {
  const CityModel m = load("minimal_appearance.json");
  auto out = ops::update_texture_paths(m, "http://x/tex/");
  EXPECT_EQ(out.appearance->textures[0].image, "http://x/tex/myroof.jpg");
  out = ops::update_texture_paths(m, "");
  EXPECT_EQ(out.appearance->textures[0].image, "myroof.jpg");
  out.appearance->textures[0].image = "appearances/myroof.jpg";
  EXPECT_TRUE(equivalent(out, m));
}

TEST(Textures, WindowsStylePathsAndNoAppearance) {
  CityModel m = load("minimal_appearance.json");
  m.appearance->textures[0].image = "C:\\data\\tex\\wall.png";
  EXPECT_EQ(ops::update_texture_paths(m, "t/").appearance->textures[0].image, "t/wall.png");
  const CityModel plain = two_buildings();
  EXPECT_TRUE(equivalent(ops::update_texture_paths(plain, "x/"), plain));
}

TEST(Metadata, LodHistogramAndExtent) {
  CityModel m;
  m.city_objects.insert("a", box_object("Building", m, {0, 0, 0}, 1.0));
  m.city_objects.insert("b", box_object("Building", m, {3, 0, 0}, 2.2));
  m.city_objects.insert("c", box_object("Building", m, {6, 0, 0}, 2.2));
  const CityModel out = ops::refresh_metadata(m);
  EXPECT_EQ(out.metadata["presentLoDs"], (Json{{"1", 1}, {"2.2", 2}}));
  Json extent = Json::array();
  for (double v : geo::compute_extent(m)) extent.push_back(v);
  EXPECT_EQ(out.metadata["geographicalExtent"], extent);
  EXPECT_EQ(out.metadata["materials"], "absent");
  EXPECT_EQ(out.metadata["textures"], "absent");
}

TEST(Metadata, FlagsAndExtensions) {
  CityModel m = load("minimal_appearance.json");
  const CityModel out = ops::refresh_metadata(m);
  EXPECT_EQ(out.metadata["materials"], "present");
  EXPECT_EQ(out.metadata["textures"], "present");
  const CityModel noise = ops::refresh_metadata(load("snippet_noise_building.json"));
  EXPECT_EQ(noise.metadata["extensions"]["Noise"]["version"], "0.1");
  EXPECT_FALSE(noise.metadata.contains("geographicalExtent"));
}

TEST(Metadata, StaleValuesAreReplaced) {
  CityModel m = two_buildings();
  m.metadata = Json{{"geographicalExtent", Json::array({0, 0, 0, 0, 0, 0})}, {"title", "kept"}};
  const CityModel out = ops::refresh_metadata(m);
  EXPECT_EQ(out.metadata["geographicalExtent"], Json::array({0, 0, 0, 11, 1, 1}));
  EXPECT_EQ(out.metadata["title"], "kept");
}

TEST(Stats, EmptyModel) {
  const auto s = ops::stats(CityModel{});
  EXPECT_EQ(s.city_objects, 0u);
  EXPECT_TRUE(s.object_types.empty());
  EXPECT_TRUE(s.geometry_kinds.empty());
  EXPECT_EQ(s.vertices, 0u);
  EXPECT_EQ(s.templates, 0u);
}

TEST(Stats, SnippetBuildingParts) {
  const auto s = ops::stats(load("snippet_building_parts.json"));
  EXPECT_EQ(s.object_types, (std::map<std::string, std::size_t>{{"Building", 1}, {"BuildingPart", 2}}));
  EXPECT_EQ(ops::to_json(s)["object_types"]["BuildingPart"], 2);
}

TEST(Stats, MatchesTraversal) {
  for (const auto& f : corpus()) {
    const CityModel m = codec::parse(f.text).model;
    const auto s = ops::stats(m);
    const auto c = oracle_counts(m);
    EXPECT_EQ(s.city_objects, c.objects) << f.name;
    EXPECT_EQ(s.object_types, c.types) << f.name;
    EXPECT_EQ(s.geometry_kinds, c.kinds) << f.name;
    EXPECT_EQ(s.vertices, m.vertices.size());
    EXPECT_EQ(s.minified_bytes, codec::serialize(m).size());
  }
}
