#include <doctest.h>

#include <algorithm>
#include <cstdint>

#include "homology_oracle.hpp"
#include "hxconv/cubical.hpp"
#include "hxconv/util.hpp"
#include "hxconv/voxel.hpp"

using namespace hxconv;

namespace {

VoxelSet cube_window(std::size_t d, std::uint32_t cells) {
  std::vector<std::size_t> coords(d);
  for (std::size_t a = 0; a < d; ++a) coords[a] = a;
  const std::size_t n = (d + 3) / 4;
  return VoxelSet(Frame::canonical(n, coords),
                  make_cube_grid(d, 0.0, static_cast<double>(cells), cells));
}

// Random set with a 1-cell safety margin to the window boundary.
VoxelSet random_set(std::uint64_t seed, std::size_t d, std::uint32_t cells,
                    double density) {
  VoxelSet v = cube_window(d, cells);
  std::uint64_t st = seed;
  const std::uint64_t total = v.grid.size();
  for (std::uint64_t lin = 0; lin < total; ++lin) {
    if (u01(st) >= density) continue;
    const auto mi = v.grid.multi_index(lin);
    bool interior = true;
    for (std::size_t a = 0; a < d && interior; ++a) {
      interior = mi[a] > 0 && mi[a] + 1 < v.grid.axes[a].cells;
    }
    if (interior) v.set(lin);
  }
  return v;
}

void check_against_oracle(const VoxelSet& v, HomologyField field) {
  const BettiVector got = betti_numbers(v, field);
  const std::vector<long long> want = oracle::betti(v);
  if (v.cell_count() == 0) {
    CHECK(got.empty_set);
    return;
  }
  REQUIRE(got.b.size() == want.size());
  for (std::size_t k = 0; k < want.size(); ++k) {
    CAPTURE(k);
    CHECK(got.b[k] == want[k]);
  }
}

}  // namespace

TEST_CASE("betti of canonical small shapes") {
  // Single voxel: a point.
  VoxelSet one = cube_window(4, 5);
  one.set(one.grid.linear_index({2, 2, 2, 2}));
  const BettiVector b1 = betti_numbers(one, HomologyField::kMod2);
  CHECK(b1.b == std::vector<long long>{1, 0, 0, 0, 0});
  CHECK(b1.is_point_like());

  // 3^4 block minus its center: a thickened 3-sphere.
  VoxelSet shell = cube_window(4, 5);
  for (std::uint32_t a = 1; a <= 3; ++a)
    for (std::uint32_t b = 1; b <= 3; ++b)
      for (std::uint32_t c = 1; c <= 3; ++c)
        for (std::uint32_t d = 1; d <= 3; ++d)
          shell.set(shell.grid.linear_index({a, b, c, d}));
  shell.bits.reset(shell.grid.linear_index({2, 2, 2, 2}));
  CHECK(betti_numbers(shell, HomologyField::kMod2).b ==
        std::vector<long long>{1, 0, 0, 1, 0});

  // Two far-apart voxels: two components.
  VoxelSet two = cube_window(4, 5);
  two.set(two.grid.linear_index({1, 1, 1, 1}));
  two.set(two.grid.linear_index({3, 3, 3, 3}));
  CHECK(betti_numbers(two, HomologyField::kMod2).b ==
        std::vector<long long>{2, 0, 0, 0, 0});

  // Thickened planar loop: an annulus of cells.
  VoxelSet ring = cube_window(2, 9);
  for (std::uint32_t r = 0; r < 9; ++r) {
    for (std::uint32_t c = 0; c < 9; ++c) {
      const int dr = static_cast<int>(r) - 4, dc = static_cast<int>(c) - 4;
      const int cheb = std::max(dr < 0 ? -dr : dr, dc < 0 ? -dc : dc);
      if (cheb >= 1 && cheb <= 3) ring.set(ring.grid.linear_index({r, c}));
    }
  }
  const BettiVector br = betti_numbers(ring, HomologyField::kMod2);
  CHECK(br.b == std::vector<long long>{1, 1, 0});
}

TEST_CASE("empty set is flagged, not zero-padded") {
  const BettiVector b = betti_numbers(cube_window(3, 4), HomologyField::kMod2);
  CHECK(b.empty_set);
  CHECK(!b.is_point_like());
}

TEST_CASE("oracle agreement on random 2d and 3d sets") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    check_against_oracle(random_set(seed, 2, 9, 0.25 + 0.05 * (seed % 5)),
                         HomologyField::kMod2);
    check_against_oracle(random_set(seed * 77, 3, 7, 0.2 + 0.04 * (seed % 5)),
                         HomologyField::kMod2);
  }
}

TEST_CASE("oracle agreement on random 4d sets") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    check_against_oracle(random_set(seed * 131, 4, 6, 0.12),
                         HomologyField::kMod2);
  }
}

TEST_CASE("oracle agreement on structured 4d shapes") {
  // The 3^4-minus-center shell again, this time against the reference.
  VoxelSet shell = cube_window(4, 5);
  for (std::uint32_t a = 1; a <= 3; ++a)
    for (std::uint32_t b = 1; b <= 3; ++b)
      for (std::uint32_t c = 1; c <= 3; ++c)
        for (std::uint32_t d = 1; d <= 3; ++d)
          shell.set(shell.grid.linear_index({a, b, c, d}));
  shell.bits.reset(shell.grid.linear_index({2, 2, 2, 2}));
  check_against_oracle(shell, HomologyField::kMod2);

  // A solid torus-like loop of blocks in the first two axes.
  VoxelSet loop = cube_window(4, 7);
  for (std::uint32_t r = 1; r <= 5; ++r) {
    for (std::uint32_t c = 1; c <= 5; ++c) {
      const bool in_ring = !(r >= 2 && r <= 4 && c >= 2 && c <= 4);
      if (!in_ring) continue;
      for (std::uint32_t z = 2; z <= 3; ++z) {
        loop.set(loop.grid.linear_index({r, c, z, 3}));
      }
    }
  }
  check_against_oracle(loop, HomologyField::kMod2);
  const BettiVector bl = betti_numbers(loop, HomologyField::kMod2);
  CHECK(bl.b[1] == 1);
}

TEST_CASE("field choice agrees on torsion-free examples") {
  for (std::uint64_t seed = 3; seed <= 6; ++seed) {
    const VoxelSet v = random_set(seed * 991, 3, 7, 0.3);
    const BettiVector m = betti_numbers(v, HomologyField::kMod2);
    const BettiVector q = betti_numbers(v, HomologyField::kRational);
    CHECK(m.b == q.b);
  }
}

TEST_CASE("euler characteristic consistency") {
  for (std::uint64_t seed = 10; seed <= 14; ++seed) {
    const VoxelSet v = random_set(seed * 17, 3, 7, 0.25);
    if (v.cell_count() == 0) continue;
    const oracle::Complex cx = oracle::build_complex(v);
    long long chi_cells = 0;
    for (std::size_t k = 0; k <= 3; ++k) {
      chi_cells += (k % 2 ? -1 : 1) * static_cast<long long>(cx.count(k));
    }
    const BettiVector bv = betti_numbers(v, HomologyField::kMod2);
    long long chi_betti = 0;
    for (std::size_t k = 0; k < bv.b.size(); ++k) {
      chi_betti += (k % 2 ? -1 : 1) * bv.b[k];
    }
    CHECK(chi_cells == chi_betti);
  }
}

TEST_CASE("oracle boundary of boundary vanishes") {
  const VoxelSet v = random_set(271828, 3, 6, 0.35);
  const oracle::Complex cx = oracle::build_complex(v);
  // d(d(Q)) = 0 over GF(2) for every 2- and 3-cube: every vertex of a face
  // pair cancels.  Compose the two boundary maps explicitly.
  for (std::size_t k = 2; k <= 3; ++k) {
    const auto dk = oracle::boundary_rows(cx, k);
    const auto dk1 = oracle::boundary_rows(cx, k - 1);
    const std::size_t n0 = cx.count(k - 2);
    const std::size_t words = (n0 + 63) / 64;
    for (const auto& row : dk) {
      std::vector<std::uint64_t> acc(words, 0);
      for (std::size_t j = 0; j < cx.count(k - 1); ++j) {
        if (row[j / 64] & (1ULL << (j % 64))) {
          for (std::size_t w = 0; w < words; ++w) acc[w] ^= dk1[j][w];
        }
      }
      for (const std::uint64_t w : acc) CHECK(w == 0);
    }
  }
}
