#pragma once
// Independent reference implementation of cubical homology over GF(2), used
// only by the tests.  It shares no code with the library's homology engine:
// the complex is built as an explicit face map and Betti numbers come from
// dense bitset Gaussian elimination on the boundary matrices,
//   b_k = n_k - rank d_k - rank d_{k+1}.
// Intended for small inputs (a few thousand elementary cubes).

#include <cstdint>
#include <map>
#include <vector>

#include "hxconv/voxel.hpp"

namespace oracle {

// An elementary cube is one (anchor, extent) pair per axis; extent 1 means
// the unit interval [anchor, anchor+1], extent 0 the vertex [anchor].
using Cube = std::vector<std::pair<int, int>>;

struct Complex {
  // cells[k] maps each k-cube to its dense index.
  std::vector<std::map<Cube, std::size_t>> cells;

  std::size_t count(std::size_t k) const {
    return k < cells.size() ? cells[k].size() : 0;
  }
  std::size_t total() const {
    std::size_t s = 0;
    for (const auto& m : cells) s += m.size();
    return s;
  }
};

inline std::size_t cube_dim(const Cube& c) {
  std::size_t d = 0;
  for (const auto& [anchor, extent] : c) d += static_cast<std::size_t>(extent);
  return d;
}

// All faces of the closed unit cube anchored at `idx`, every subset of axes
// degenerated to either endpoint (3^d elementary cubes per voxel).
inline void insert_voxel(Complex& cx, const std::vector<int>& idx) {
  const std::size_t d = idx.size();
  if (cx.cells.size() < d + 1) cx.cells.resize(d + 1);
  std::vector<int> choice(d, 0);  // 0 = interval, 1 = low vertex, 2 = high
  for (;;) {
    Cube c(d);
    for (std::size_t a = 0; a < d; ++a) {
      if (choice[a] == 0) {
        c[a] = {idx[a], 1};
      } else if (choice[a] == 1) {
        c[a] = {idx[a], 0};
      } else {
        c[a] = {idx[a] + 1, 0};
      }
    }
    const std::size_t k = cube_dim(c);
    cx.cells[k].emplace(c, 0);
    std::size_t a = 0;
    for (; a < d; ++a) {
      if (++choice[a] <= 2) break;
      choice[a] = 0;
    }
    if (a == d) break;
  }
}

inline Complex build_complex(const hxconv::VoxelSet& v) {
  Complex cx;
  const std::size_t d = v.grid.dim();
  cx.cells.resize(d + 1);
  for (const std::uint64_t lin : v.set_cells()) {
    const std::vector<std::uint32_t> mi = v.grid.multi_index(lin);
    std::vector<int> idx(d);
    for (std::size_t a = 0; a < d; ++a) idx[a] = static_cast<int>(mi[a]);
    insert_voxel(cx, idx);
  }
  // Assign dense indices.
  for (auto& level : cx.cells) {
    std::size_t i = 0;
    for (auto& [cube, id] : level) id = i++;
  }
  return cx;
}

// The GF(2) boundary of each k-cube as a bit-row over (k-1)-cube indices.
inline std::vector<std::vector<std::uint64_t>> boundary_rows(
    const Complex& cx, std::size_t k) {
  const std::size_t ncols = cx.count(k - 1);
  const std::size_t words = (ncols + 63) / 64;
  std::vector<std::vector<std::uint64_t>> rows;
  if (k == 0 || k >= cx.cells.size()) return rows;
  rows.reserve(cx.count(k));
  for (const auto& [cube, id] : cx.cells[k]) {
    std::vector<std::uint64_t> row(words, 0);
    for (std::size_t a = 0; a < cube.size(); ++a) {
      if (cube[a].second != 1) continue;
      for (int end = 0; end < 2; ++end) {
        Cube face = cube;
        face[a] = {cube[a].first + end, 0};
        const std::size_t j = cx.cells[k - 1].at(face);
        row[j / 64] ^= (1ULL << (j % 64));  // XOR: mod-2 coefficients
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// GF(2) row rank by elimination against stored pivot rows.
inline std::size_t gf2_rank(std::vector<std::vector<std::uint64_t>> rows) {
  std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (row, bit)
  std::size_t rank = 0;
  for (auto& row : rows) {
    for (const auto& [pi, bit] : pivots) {
      if (row[bit / 64] & (1ULL << (bit % 64))) {
        const auto& prow = rows[pi];
        for (std::size_t w = 0; w < row.size(); ++w) row[w] ^= prow[w];
      }
    }
    std::size_t bit = row.size() * 64;
    for (std::size_t w = 0; w < row.size() && bit == row.size() * 64; ++w) {
      if (row[w]) {
        bit = w * 64 + static_cast<std::size_t>(__builtin_ctzll(row[w]));
      }
    }
    if (bit != row.size() * 64) {
      pivots.emplace_back(&row - rows.data(), bit);
      ++rank;
    }
  }
  return rank;
}

// Betti numbers over GF(2); result has grid-dimension + 1 entries.
inline std::vector<long long> betti(const hxconv::VoxelSet& v) {
  const Complex cx = build_complex(v);
  const std::size_t d = v.grid.dim();
  std::vector<std::size_t> ranks(d + 2, 0);
  for (std::size_t k = 1; k <= d; ++k) {
    ranks[k] = gf2_rank(boundary_rows(cx, k));
  }
  std::vector<long long> b(d + 1, 0);
  for (std::size_t k = 0; k <= d; ++k) {
    b[k] = static_cast<long long>(cx.count(k)) -
           static_cast<long long>(ranks[k]) -
           static_cast<long long>(ranks[k + 1]);
  }
  return b;
}

}  // namespace oracle
