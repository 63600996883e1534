#include <doctest.h>

#include <cmath>

#include "homology_oracle.hpp"
#include "hxconv/grid.hpp"
#include "hxconv/util.hpp"
#include "hxconv/voxel.hpp"

using namespace hxconv;

TEST_CASE("grid index roundtrip") {
  GridSpec g = make_cube_grid(3, -1.0, 2.0, 7);
  g.axes[1].cells = 5;  // anisotropic on purpose
  g.validate();
  for (std::uint64_t lin = 0; lin < g.size(); ++lin) {
    CHECK(g.linear_index(g.multi_index(lin)) == lin);
  }
  const std::vector<double> c = g.cell_center(g.multi_index(0));
  CHECK(c.size() == 3);
  for (std::size_t a = 0; a < 3; ++a) {
    CHECK(c[a] == doctest::Approx(-1.0 + g.axes[a].step() / 2));
  }
}

TEST_CASE("canonical frame embeds and restricts") {
  const Frame f = Frame::canonical(2, {0, 1, 4});
  CHECK(f.ambient_n == 2);
  CHECK(f.local_dim() == 3);
  const std::vector<double> amb = f.to_ambient({0.5, -1.0, 2.0});
  CHECK(amb.size() == 8);
  CHECK(amb[0] == 0.5);
  CHECK(amb[1] == -1.0);
  CHECK(amb[4] == 2.0);
  CHECK(amb[2] == 0.0);
  const std::vector<double> back = f.local_coords(amb);
  CHECK(back.size() == 3);
  CHECK(back[0] == doctest::Approx(0.5));
  CHECK(back[2] == doctest::Approx(2.0));
}

TEST_CASE("voxel boolean algebra and components") {
  const Frame fr = Frame::canonical(1, {0, 1, 2, 3});
  GridSpec g = make_cube_grid(2, 0.0, 8.0, 8);
  VoxelSet a(Frame::canonical(1, {0, 1}), g);
  VoxelSet b(Frame::canonical(1, {0, 1}), g);
  (void)fr;
  // Two 2x2 blocks, far apart; b overlaps one of them.
  auto setblock = [&](VoxelSet& v, std::uint32_t r0, std::uint32_t c0) {
    for (std::uint32_t r = r0; r < r0 + 2; ++r) {
      for (std::uint32_t c = c0; c < c0 + 2; ++c) {
        v.set(v.grid.linear_index({r, c}));
      }
    }
  };
  setblock(a, 1, 1);
  setblock(a, 5, 5);
  setblock(b, 2, 2);
  CHECK(component_count(a, Adjacency::kFace) == 2);
  CHECK(component_count(a, Adjacency::kChebyshev) == 2);
  CHECK(v_or(a, b).cell_count() == 11);   // blocks share one cell
  CHECK(v_and(a, b).cell_count() == 1);
  CHECK(v_diff(a, b).cell_count() == 7);

  // Diagonal neighbors: distinct under face adjacency, one component under
  // vertex adjacency.
  VoxelSet diag(a.frame, g);
  diag.set(g.linear_index({0, 0}));
  diag.set(g.linear_index({1, 1}));
  CHECK(component_count(diag, Adjacency::kFace) == 2);
  CHECK(component_count(diag, Adjacency::kChebyshev) == 1);
}

TEST_CASE("dilation, boundary shell, hausdorff") {
  GridSpec g = make_cube_grid(2, 0.0, 9.0, 9);
  VoxelSet a(Frame::canonical(1, {0, 1}), g);
  a.set(g.linear_index({4, 4}));
  const VoxelSet d1 = dilate_chebyshev(a, 1);
  CHECK(d1.cell_count() == 9);
  const VoxelSet d2 = dilate_chebyshev(a, 2);
  CHECK(d2.cell_count() == 25);
  CHECK(boundary_shell(d2).cell_count() == 16);

  CHECK(hausdorff_cells(a, a, 8) == std::uint32_t{0});
  CHECK(hausdorff_cells(a, d1, 8) == std::uint32_t{1});
  CHECK(hausdorff_cells(a, d2, 8) == std::uint32_t{2});
  VoxelSet empty1(a.frame, g), empty2(a.frame, g);
  CHECK(hausdorff_cells(empty1, empty2, 8) == std::uint32_t{0});
  CHECK(!hausdorff_cells(a, empty1, 8).has_value());
  // Distance beyond the cap reports nothing rather than a wrong number.
  VoxelSet far(a.frame, g);
  far.set(g.linear_index({0, 0}));
  CHECK(!hausdorff_cells(a, far, 2).has_value());
}

TEST_CASE("window boundary predicates") {
  GridSpec g = make_cube_grid(3, 0.0, 5.0, 5);
  VoxelSet v(Frame::canonical(1, {0, 1, 2}), g);
  v.set(g.linear_index({2, 2, 2}));
  CHECK(!v.touches_window_boundary());
  v.set(g.linear_index({0, 3, 3}));
  CHECK(v.touches_window_boundary());
  CHECK(v.on_window_boundary(g.linear_index({0, 3, 3})));
  CHECK(!v.on_window_boundary(g.linear_index({2, 2, 2})));
}

TEST_CASE("reference complex face counts") {
  // One 4-cube has 3^4 = 81 elementary faces; two face-adjacent 4-cubes
  // share a full 3-face (27 elementary cubes): 2*81 - 27 = 135.
  GridSpec g = make_cube_grid(4, 0.0, 4.0, 4);
  VoxelSet one(Frame::canonical(1, {0, 1, 2, 3}), g);
  one.set(g.linear_index({1, 1, 1, 1}));
  CHECK(oracle::build_complex(one).total() == 81);

  VoxelSet two = one;
  two.set(g.linear_index({1, 1, 1, 2}));
  CHECK(oracle::build_complex(two).total() == 135);

  VoxelSet diag = one;
  diag.set(g.linear_index({1, 1, 2, 2}));  // shares only a 2-face: 9 cubes
  CHECK(oracle::build_complex(diag).total() == 2 * 81 - 9);
}
