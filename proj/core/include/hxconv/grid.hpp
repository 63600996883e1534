#pragma once
// Sampling windows.  A GridSpec is an axis-aligned box in R^d split into
// cells; a Frame embeds that R^d into the ambient flattened space R^{4n}
// (orthonormal axes + origin).  Discretized sets always live on a
// (Frame, GridSpec) pair: cell centers are pushed through the frame and
// tested against analytic sets.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hxconv/quat.hpp"
#include "hxconv/util.hpp"

namespace hxconv {

// Hard cap on the number of cells in any one grid (memory guard).
inline constexpr std::uint64_t kMaxGridCells = (1ull << 26);

struct GridAxis {
  double lo = 0.0;
  double hi = 0.0;
  std::uint32_t cells = 0;

  double step() const { return (hi - lo) / static_cast<double>(cells); }
  double center(std::uint32_t i) const {
    return lo + (static_cast<double>(i) + 0.5) * step();
  }
};

struct GridSpec {
  std::vector<GridAxis> axes;

  std::size_t dim() const { return axes.size(); }
  std::uint64_t size() const;

  // Throws std::invalid_argument unless every axis has lo < hi (finite) and
  // cells >= 1, and the total cell count is within kMaxGridCells.
  void validate() const;

  // Index of the cell whose half-open interval [lo+i*step, lo+(i+1)*step)
  // contains x, clamped to the grid.
  static std::uint32_t nearest(const GridAxis& axis, double x);
  // True if x lies inside [lo, hi) of the axis.
  static bool contains(const GridAxis& axis, double x);

  // Row-major strides, last axis fastest.
  std::vector<std::uint64_t> strides() const;
  std::uint64_t linear_index(const std::vector<std::uint32_t>& idx) const;
  std::vector<std::uint32_t> multi_index(std::uint64_t linear) const;

  // Local coordinates of the center of a cell.
  std::vector<double> cell_center(const std::vector<std::uint32_t>& idx) const;

  double min_step() const;
  double max_step() const;
  // Euclidean length of one cell's diagonal.
  double cell_diagonal() const;

  bool same_shape(const GridSpec& other) const;
};

// Cube grid helper: d axes, each [lo, hi] with `cells` cells.
GridSpec make_cube_grid(std::size_t d, double lo, double hi, std::uint32_t cells);

// ---------------------------------------------------------------------------
// Frame: orthonormal affine embedding R^d -> R^{4n}.
// ---------------------------------------------------------------------------
struct Frame {
  std::size_t ambient_n = 0;          // quaternionic dimension n
  std::vector<double> origin;          // size 4n
  std::vector<std::vector<double>> axes;  // each size 4n, pairwise orthonormal

  std::size_t ambient_real_dim() const { return 4 * ambient_n; }
  std::size_t local_dim() const { return axes.size(); }

  // Throws std::invalid_argument unless axes are orthonormal within 1e-9
  // and dimensions are consistent.
  void validate() const;

  // Coordinate frame spanned by the standard basis vectors of R^{4n} listed
  // in coord_idx, with origin 0.
  static Frame canonical(std::size_t ambient_n,
                         const std::vector<std::size_t>& coord_idx);

  // 4-dimensional frame of a line: origin = flatten(base), axes
  // flatten(u * dir_hat) for u = 1, i, j, k, where dir_hat is the direction
  // normalized to unit length.  Local coordinates (tw, tx, ty, tz) map to
  // the ambient point base + t * dir_hat with t = tw + tx i + ty j + tz k.
  // For unit |dir| the axes are orthonormal; throws on zero direction.
  static Frame from_line(const HLine& line);

  std::vector<double> to_ambient(const std::vector<double>& local) const;
  // Orthogonal projection onto the frame: axes^T (x - origin).
  std::vector<double> local_coords(const std::vector<double>& ambient) const;

  // The same embedding as a dense Affine (columns = axes, offset = origin).
  Affine affine() const;
};

}  // namespace hxconv
