#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <memory>
#include <queue>
#include <vector>

#include "floodfill_reference.hpp"
#include "hxconv/hconv.hpp"
#include "hxconv/quat.hpp"
#include "hxconv/raster.hpp"
#include "hxconv/scene.hpp"
#include "hxconv/util.hpp"
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

TEST_CASE("h-combination agrees with brute-force complement labeling") {
  for (std::uint64_t t = 0; t < 30; ++t) {
    const std::uint32_t cells = 5 + static_cast<std::uint32_t>(t % 3);
    const double density = 0.15 + 0.02 * static_cast<double>(t % 5);
    const VoxelSet e =
        testref::random_interior_set(kH1, derive_seed(9100, t), cells, density);
    const VoxelSet got = h_combination(e);
    const VoxelSet want = testref::brute_h_combination(e);
    REQUIRE(got.bits == want.bits);
    CHECK(e.bits.is_subset_of(got.bits));
  }
}

TEST_CASE("h-combination is idempotent and fills a closed shell") {
  // Chebyshev shell 2 <= ||idx - c||_inf <= 3 inside a 9^4 window encloses
  // the Chebyshev ball of radius 1; the combination must fill it exactly.
  VoxelSet shell(kH1, make_cube_grid(4, -1.0, 1.0, 9));
  VoxelSet solid(kH1, shell.grid);
  for (std::uint64_t lin = 0; lin < shell.grid.size(); ++lin) {
    const std::vector<std::uint32_t> idx = shell.grid.multi_index(lin);
    std::uint32_t cheb = 0;
    for (std::size_t a = 0; a < 4; ++a) {
      const std::uint32_t d =
          idx[a] > 4 ? idx[a] - 4 : 4 - idx[a];
      cheb = std::max(cheb, d);
    }
    if (cheb >= 2 && cheb <= 3) shell.bits.set(lin);
    if (cheb <= 3) solid.bits.set(lin);
  }
  const VoxelSet once = h_combination(shell);
  CHECK(once.bits == solid.bits);
  const VoxelSet twice = h_combination(once);
  CHECK(twice.bits == once.bits);
}

TEST_CASE("h-combination refuses sets that touch the window boundary") {
  VoxelSet v(kH1, make_cube_grid(4, -1.0, 1.0, 5));
  v.bits.set(0);  // a window-corner cell
  CHECK_THROWS_AS(h_combination(v), WindowError);
}

TEST_CASE("direction samples are deterministic unit prefixes") {
  const DirectionSample a = DirectionSample::unit_sphere(2, 8, 77);
  const DirectionSample b = DirectionSample::unit_sphere(2, 32, 77);
  const DirectionSample c = DirectionSample::unit_sphere(2, 8, 78);
  REQUIRE(a.count() == 8);
  REQUIRE(b.count() == 32);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(hpoint_close(a.items[i], b.items[i], 0.0));
  }
  bool all_equal = true;
  for (std::size_t i = 0; i < 8; ++i) {
    if (!hpoint_close(a.items[i], c.items[i], 1e-12)) all_equal = false;
  }
  CHECK(!all_equal);  // a different seed moves the sample
  for (const HPoint& u : b.items) {
    CHECK(std::fabs(hpoint_norm(u) - 1.0) < 1e-9);
  }
}

TEST_CASE("hcomb_n reduces to the flood fill on H^1 windows") {
  const SceneSet s = ball_scene({0.0, 0, 0, 0}, 0.62);
  const GridSpec g = make_cube_grid(4, -1.0, 1.0, 11);
  const CandidateFamily fam =
      hcombn_candidates(s, kH1, g, 128, 128, 424242);
  const DirectionSample dirs = DirectionSample::unit_sphere(1, 6, 5);
  const VoxelSet got = hcomb_n(s, fam.candidates, dirs);
  const VoxelSet want = v_and(h_combination(fam.base), fam.candidates);
  CHECK(got.bits == want.bits);
  CHECK(fam.base.bits.is_subset_of(fam.candidates.bits));
  CHECK(fam.base.bits.is_subset_of(got.bits));
}

TEST_CASE("sampled hull contains the raster and shrinks with more functionals") {
  const SceneSet s = ball_scene({0.1, 0, 0, 0}, 0.6);
  const GridSpec g = make_cube_grid(4, -1.1, 1.1, 13);
  const VoxelSet raster = rasterize(s, kH1, g);
  const DirectionSample fs = DirectionSample::unit_sphere(1, 12, 31337);
  const std::vector<Functional> few(fs.items.begin(), fs.items.begin() + 4);
  const std::vector<Functional> many(fs.items.begin(), fs.items.end());
  HullParams hp;
  hp.image_cells_max = 63;
  const VoxelSet hull_few = h_hull_sampled(s, kH1, g, few, hp);
  const VoxelSet hull_many = h_hull_sampled(s, kH1, g, many, hp);
  CHECK(raster.bits.is_subset_of(hull_many.bits));
  CHECK(hull_many.bits.is_subset_of(hull_few.bits));
  // A ball is already h-convex: twelve functionals must pin the hull to the
  // set within a couple of cells.
  const auto d = hausdorff_cells(hull_many, raster, 8);
  REQUIRE(d.has_value());
  CHECK(*d <= 2);
}

TEST_CASE("conjugate of a centered ball is the predicted dual ball") {
  const double r = 0.7;
  const GridSpec g = make_cube_grid(4, -1.0, 1.0, 21);
  const VoxelSet e = rasterize(ball_scene({0, 0, 0, 0}, r), kH1, g);

  const double W = 1.6;
  const GridSpec hg = make_cube_grid(4, -W, W, 21);
  // Margin large enough to kill sample-spacing aliasing at every dual cell:
  // |h| * (half cell diagonal) stays below eps across the window.
  const double eps = 1.15 * (2.0 * W) * 0.5 * g.cell_diagonal();
  REQUIRE(eps < 1.0);
  const VoxelSet conj = conjugate_set_n1(e, hg, eps);

  // Predicted verdict: h survives iff |h| < (1 - eps) / r.  Discrete
  // samples only reach within half a cell of the sphere, so the measured
  // dual ball can overshoot by roughly one dual cell.
  const VoxelSet pred =
      rasterize(ball_scene({0, 0, 0, 0}, (1.0 - eps) / r), kH1, hg);
  const auto d = hausdorff_cells(conj, pred, 8);
  REQUIRE(d.has_value());
  CHECK(*d <= 2);
}

TEST_CASE("generic and specialized conjugate agree exactly") {
  const GridSpec g = make_cube_grid(4, -1.0, 1.0, 11);
  const VoxelSet e = rasterize(ball_scene({0.1, -0.05, 0, 0}, 0.55), kH1, g);
  std::vector<HPoint> samples;
  for (const std::uint64_t lin : e.set_cells()) {
    samples.push_back(unflatten(e.center_ambient(lin)));
  }
  const GridSpec hg = make_cube_grid(4, -1.5, 1.5, 11);
  const double eps = 0.35;
  const VoxelSet a = conjugate_set(samples, kH1, hg, eps);
  const VoxelSet b = conjugate_set_n1(e, hg, eps);
  CHECK(a.bits == b.bits);
  CHECK(a.cell_count() > 0);
}

TEST_CASE("double conjugation recovers the combination of a ball") {
  const GridSpec g = make_cube_grid(4, -1.3, 1.3, 15);
  const VoxelSet e = rasterize(ball_scene({0.05, 0.05, 0, 0}, 0.7), kH1, g);
  ConjugateHullInfo info;
  const VoxelSet hull = hull_via_conjugate_n1(e, 0.0, 21, &info);
  const VoxelSet comb = h_combination(e);
  CHECK(info.eps > 0.0);
  CHECK(info.dual_component_cells > 0);
  const auto d = hausdorff_cells(hull, comb, 8);
  REQUIRE(d.has_value());
  CHECK(*d <= 2);
}

TEST_CASE("every boundary cell of a ball is h-extremal") {
  const SceneSet s = ball_scene({0, 0, 0, 0}, 0.8);
  const GridSpec g = make_cube_grid(4, -1.3, 1.3, 15);
  const VoxelSet raster = rasterize(s, kH1, g);
  const VoxelSet boundary = boundary_shell(raster);
  const DirectionSample dirs = DirectionSample::unit_sphere(1, 8, 99);
  const double r = 2.5 * g.cell_diagonal();
  const VoxelSet ext = h_extremal_points(s, boundary, dirs, r);
  CHECK(ext.cell_count() > 0);
  CHECK(ext.bits.is_subset_of(boundary.bits));
  CHECK(ext.bits == boundary.bits);
  CHECK_THROWS_AS(h_extremal_points(s, boundary, dirs, 0.5 * g.cell_diagonal()),
                  std::invalid_argument);
}

TEST_CASE("scene line samples are seeded and anchored in the set") {
  const SceneSet s = ball_scene({0.1, 0, 0, 0}, 0.6);
  const GridSpec g = make_cube_grid(4, -1.0, 1.0, 11);
  const VoxelSet raster = rasterize(s, kH1, g);
  const std::vector<HLine> l1 = sample_scene_lines(raster, 12, 555);
  const std::vector<HLine> l2 = sample_scene_lines(raster, 12, 555);
  REQUIRE(l1.size() == 12);
  for (std::size_t i = 0; i < l1.size(); ++i) {
    CHECK(hpoint_close(l1[i].base, l2[i].base, 0.0));
    CHECK(hpoint_close(l1[i].dir, l2[i].dir, 0.0));
    CHECK(scene_contains(s, flatten(l1[i].base)));
    CHECK(std::fabs(hpoint_norm(l1[i].dir) - 1.0) < 1e-9);
  }
  VoxelSet empty(kH1, g);
  CHECK_THROWS_AS(sample_scene_lines(empty, 4, 1), std::invalid_argument);
}

TEST_CASE("section survey sees convex sections as acyclic") {
  const SceneSet s = ball_scene({0, 0, 0, 0}, 0.7);
  const GridSpec g = make_cube_grid(4, -1.0, 1.0, 11);
  const VoxelSet raster = rasterize(s, kH1, g);
  const std::vector<HLine> lines = sample_scene_lines(raster, 6, 2024);
  const SectionSurvey sv = section_survey(s, lines, 13);
  CHECK(sv.nonempty_count == 6);
  CHECK(sv.quasiconvex_pass());
  CHECK(sv.strong_convexity_pass());
  for (const SectionRecord& rec : sv.sections) {
    REQUIRE(!rec.empty);
    CHECK(rec.betti.is_point_like());
  }
}
