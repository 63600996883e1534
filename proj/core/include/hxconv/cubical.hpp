#pragma once
// Cubical homology of discretized sets.
//
// A voxel set spans a cubical complex: every set cell contributes the full
// face lattice of its closed unit cube.  Cells are encoded arithmetically —
// 12 bits per axis, value 2*v for the grid vertex v and 2*v+1 for the
// interval [v, v+1] — so faces and cofaces are integer manipulations, never
// table lookups.
//
// Betti numbers are computed as:
//   * b0 by union-find/flood over vertex-sharing (Chebyshev) adjacency —
//     for full face lattices this equals the complex's component count;
//   * b_k for k >= 1 by free-coface cancellation (after removing one seed
//     vertex per component, which preserves homology in positive degrees),
//     then exact rank computation of the restricted boundary maps on the
//     small remaining core, over GF(2) or over the rationals:
//     b_k = n_k - rank d_k - rank d_{k+1}.

#include <cstdint>
#include <vector>

#include "hxconv/voxel.hpp"

namespace hxconv {

enum class HomologyField : std::uint8_t { kMod2, kRational };

struct BettiVector {
  bool empty_set = false;
  std::vector<long long> b;  // indices 0..dim; all zeros when empty_set

  bool is_point_like() const {
    if (empty_set || b.empty() || b[0] != 1) return false;
    for (std::size_t k = 1; k < b.size(); ++k) {
      if (b[k] != 0) return false;
    }
    return true;
  }
};

// Cell encoding limits: up to 5 axes, up to 2047 cells per axis.
inline constexpr unsigned kCellBitsPerAxis = 12;
inline constexpr std::uint64_t kCellAxisMask = (1ull << kCellBitsPerAxis) - 1;
inline constexpr std::size_t kMaxComplexAxes = 5;
inline constexpr std::uint32_t kMaxComplexCellsPerAxis = 2047;

inline std::uint32_t cell_axis_value(std::uint64_t code, std::size_t axis) {
  return static_cast<std::uint32_t>((code >> (kCellBitsPerAxis * axis)) &
                                    kCellAxisMask);
}

// Dimension of an encoded cell = number of interval (odd) axis values.
std::size_t cell_dim(std::uint64_t code, std::size_t axes);

struct CubicalComplex {
  std::size_t dim = 0;               // number of axes
  std::vector<std::uint64_t> cells;  // sorted, unique

  std::size_t size() const { return cells.size(); }
};

// Full face-lattice complex of the set cells.  Throws if the grid exceeds
// the encoding limits (axes or cells per axis).
CubicalComplex build_complex(const VoxelSet& vox);

// Number of cells of each dimension 0..dim.
std::vector<std::size_t> cells_by_dim(const CubicalComplex& cx);

// Alternating sum of cell counts.
long long euler_characteristic(const CubicalComplex& cx);

// Boundary faces of a cell with incidence coefficients (+1/-1), in the
// standard product orientation.
std::vector<std::pair<std::uint64_t, int>> cell_boundary(std::uint64_t code,
                                                         std::size_t axes);

// Betti numbers b_0..b_dim of the voxel set.
BettiVector betti_numbers(const VoxelSet& vox,
                          HomologyField field = HomologyField::kMod2);

enum class AcyclicStatus : std::uint8_t { kEmpty, kAcyclic, kNonAcyclic };

// Point-like homology check: b = (1, 0, ..., 0).  Empty input reports
// kEmpty rather than either verdict.
AcyclicStatus acyclic_status(const VoxelSet& vox,
                             HomologyField field = HomologyField::kMod2);

}  // namespace hxconv
