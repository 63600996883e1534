#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>

#include "hxconv/fixtures.hpp"
#include "hxconv/hconv.hpp"
#include "hxconv/quat.hpp"
#include "hxconv/raster.hpp"
#include "hxconv/scene.hpp"
#include "hxconv/voxel.hpp"

using namespace hxconv;

namespace {

const Frame kH1 = Frame::canonical(1, {0, 1, 2, 3});

SceneSet ball_scene(std::vector<double> c, double r) {
  SceneSet s;
  s.ambient_n = 1;
  s.root = scene_ball(c, r, Relation::kLE);
  s.bound = SceneBound{c, r};
  return s;
}

}  // namespace

TEST_CASE("relation semantics at cell centers") {
  const GridSpec g = make_cube_grid(4, -1.0, 1.0, 9);
  SceneSet le = ball_scene({0, 0, 0, 0}, 0.5);

  SceneSet ge;
  ge.ambient_n = 1;
  ge.root = scene_linear({1, 0, 0, 0}, 0.0, Relation::kGE);
  ge.bound = SceneBound{{0, 0, 0, 0}, 2.0};

  SceneSet shell;
  shell.ambient_n = 1;
  shell.root = scene_ball({0, 0, 0, 0}, 0.5, Relation::kShell, 0.2);
  shell.bound = SceneBound{{0, 0, 0, 0}, 1.0};

  const VoxelSet vle = rasterize(le, kH1, g);
  const VoxelSet vge = rasterize(ge, kH1, g);
  const VoxelSet vsh = rasterize(shell, kH1, g);
  for (std::uint64_t lin = 0; lin < g.size(); ++lin) {
    const std::vector<double> p = vle.center_local(lin);
    const double n2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3];
    CHECK(vle.get(lin) == (n2 - 0.25 <= 0.0));
    CHECK(vge.get(lin) == (p[0] >= 0.0));
    CHECK(vsh.get(lin) == (std::fabs(n2 - 0.25) <= 0.2));
  }
}

TEST_CASE("boolean scene nodes compose pointwise") {
  const GridSpec g = make_cube_grid(4, -1.0, 1.0, 9);
  SceneSet s;
  s.ambient_n = 1;
  const SceneNodePtr b1 = scene_ball({0.3, 0, 0, 0}, 0.6, Relation::kLE);
  const SceneNodePtr b2 = scene_ball({-0.3, 0, 0, 0}, 0.6, Relation::kLE);
  s.root = scene_and({scene_or({b1, b2}), scene_not(scene_ball(
                                              {0, 0, 0, 0}, 0.25, Relation::kLE))});
  s.bound = SceneBound{{0, 0, 0, 0}, 1.0};
  const VoxelSet v = rasterize(s, kH1, g);
  for (std::uint64_t lin = 0; lin < g.size(); ++lin) {
    const std::vector<double> p = v.center_local(lin);
    auto dist2 = [&](double cx) {
      return (p[0] - cx) * (p[0] - cx) + p[1] * p[1] + p[2] * p[2] + p[3] * p[3];
    };
    const bool want = (dist2(0.3) <= 0.36 || dist2(-0.3) <= 0.36) &&
                      !(dist2(0.0) <= 0.0625);
    CHECK(v.get(lin) == want);
  }
}

TEST_CASE("scene json file round-trips to the same raster") {
  const char* path = "hx_test_scene.json";
  {
    std::ofstream out(path);
    out << R"({
      "name": "tmp_ball",
      "ambient_n": 1,
      "frame": {"coords": [0, 1, 2, 3]},
      "grid": [
        {"lo": -1.0, "hi": 1.0, "cells": 9},
        {"lo": -1.0, "hi": 1.0, "cells": 9},
        {"lo": -1.0, "hi": 1.0, "cells": 9},
        {"lo": -1.0, "hi": 1.0, "cells": 9}
      ],
      "bound": {"center": [0, 0, 0, 0], "radius": 0.5},
      "predicate": {"type": "ball", "center": [0, 0, 0, 0], "radius": 0.5,
                    "rel": "le"}
    })";
  }
  const FixtureScene fx = load_scene_file(path);
  std::remove(path);
  CHECK(fx.name == "tmp_ball");
  CHECK(fx.grid.dim() == 4);
  const VoxelSet from_json = rasterize(fx.scene, fx.frame, fx.grid);
  const VoxelSet from_code =
      rasterize(ball_scene({0, 0, 0, 0}, 0.5), kH1, fx.grid);
  CHECK(from_json.bits == from_code.bits);
  CHECK(from_json.cell_count() > 0);
}

TEST_CASE("scene json errors are loud") {
  CHECK_THROWS_AS(load_scene_file("does_not_exist_12345.json"),
                  std::runtime_error);
  CHECK_THROWS_AS(load_scene_json("{ not json"), std::invalid_argument);
  CHECK_THROWS_AS(load_scene_json(R"({"name":"x","ambient_n":1,
      "frame":{"coords":[0,1,2,3]},
      "grid":[{"lo":0,"hi":1,"cells":5}],
      "predicate":{"type":"bogus"}})"),
                  std::invalid_argument);
}

TEST_CASE("line sections match the restricted predicate") {
  const SceneSet s = ball_scene({0.1, 0, 0, 0}, 0.7);
  const GridSpec tg = make_cube_grid(4, -1.0, 1.0, 11);
  HLine line;
  line.base = {Quaternion(0.05, 0.02, 0, 0)};
  line.dir = {Quaternion(0.6, 0.4, 0.2, 0.1)};
  const VoxelSet sec = line_section(s, line, tg);
  // line_section parametrizes by the unit direction, so recover ambient
  // points through the same frame it uses.
  const Frame lf = Frame::from_line(line);
  std::size_t marked = 0;
  for (std::uint64_t lin = 0; lin < tg.size(); ++lin) {
    const std::vector<double> p = lf.to_ambient(sec.center_local(lin));
    const double d2 = (p[0] - 0.1) * (p[0] - 0.1) + p[1] * p[1] +
                      p[2] * p[2] + p[3] * p[3];
    CHECK(sec.get(lin) == (d2 <= 0.49));
    if (sec.get(lin)) ++marked;
  }
  CHECK(marked > 0);
}

TEST_CASE("product sections factor through the coordinates") {
  // Rasterize two small sets, take their cylinder product in H^2, and check
  // that a section along a generic line marks exactly the parameters whose
  // ambient image lands in factor one on the first four coordinates AND in
  // factor two on the last four.
  const GridSpec g = make_cube_grid(4, -1.0, 1.0, 9);
  const auto e1 = std::make_shared<VoxelSet>(
      rasterize(ball_scene({0.2, 0, 0, 0}, 0.55), kH1, g));
  const auto e2 = std::make_shared<VoxelSet>(
      rasterize(ball_scene({-0.1, 0.1, 0, 0}, 0.6), kH1, g));
  const SceneSet prod = product_scene(e1, e2);
  CHECK(prod.ambient_n == 2);
  REQUIRE(prod.bound.has_value());

  HLine line;
  line.base = {Quaternion(0.1, 0, 0, 0), Quaternion(-0.05, 0.1, 0, 0)};
  line.dir = {Quaternion(0.5, 0.1, -0.2, 0.3), Quaternion(-0.3, 0.6, 0.1, 0.2)};
  const GridSpec tg = make_cube_grid(4, -0.9, 0.9, 11);
  const VoxelSet sec = line_section(prod, line, tg);

  const Frame lf = Frame::from_line(line);
  const SceneSet c1 = scene_from_voxels(e1);
  const SceneSet c2 = scene_from_voxels(e2);
  std::size_t marked = 0;
  for (std::uint64_t lin = 0; lin < tg.size(); ++lin) {
    const std::vector<double> amb = lf.to_ambient(sec.center_local(lin));
    const std::vector<double> x1(amb.begin(), amb.begin() + 4);
    const std::vector<double> x2(amb.begin() + 4, amb.end());
    const bool want = scene_contains(c1, x1) && scene_contains(c2, x2);
    CHECK(sec.get(lin) == want);
    if (want) ++marked;
  }
  CHECK(marked > 0);  // the line was chosen to pierce the product
}

TEST_CASE("projected image of a ball is a ball") {
  // Pairing with (1, 0) on H^1-in-H^2... simpler: project a ball in H^1
  // through the identity functional; the image must reproduce the set up to
  // one cell of splat blur.
  const GridSpec g = make_cube_grid(4, -1.0, 1.0, 15);
  const SceneSet s = ball_scene({0.1, -0.05, 0, 0}, 0.6);
  const Functional ident = {Quaternion(1)};
  const auto bbox = image_bbox(s, kH1, g, ident, 2);
  REQUIRE(bbox.has_value());
  for (std::size_t a = 0; a < 4; ++a) {
    CHECK((*bbox)[a].first >= -0.75);
    CHECK((*bbox)[a].second <= 0.75);
  }
  const GridSpec ig = fit_value_grid(*bbox, g.axes[0].step(), 5, 63);
  const VoxelSet img = project_scene_image(s, kH1, g, ident, ig, 2);
  const VoxelSet direct = rasterize(s, kH1, ig);
  // The projected image carries a one-cell splat dilation, so allow two
  // cells of slack against the direct raster.
  const auto d = hausdorff_cells(img, direct, 8);
  REQUIRE(d.has_value());
  CHECK(*d <= 2);
}
