#pragma once
// Discretized subsets of a sampling window: one bit per grid cell, plus the
// combinatorial machinery used downstream — boolean set algebra, boundary
// shells, Chebyshev dilation, connected components under face/vertex
// adjacency, flood fill from the window boundary, and a cell-metric
// Hausdorff distance.

#include <cstdint>
#include <optional>
#include <vector>

#include "hxconv/grid.hpp"

namespace hxconv {

// ---------------------------------------------------------------------------
// Bitset: fixed-size bit vector on 64-bit words.
// ---------------------------------------------------------------------------
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::uint64_t nbits)
      : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

  std::uint64_t size() const { return nbits_; }

  bool get(std::uint64_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1ull;
  }
  void set(std::uint64_t i) { words_[i >> 6] |= (1ull << (i & 63)); }
  void reset(std::uint64_t i) { words_[i >> 6] &= ~(1ull << (i & 63)); }
  void assign(std::uint64_t i, bool v) { v ? set(i) : reset(i); }

  std::uint64_t count() const;
  bool any() const;
  bool none() const { return !any(); }

  void and_with(const Bitset& o);
  void or_with(const Bitset& o);
  void andnot_with(const Bitset& o);  // this &= ~o
  void invert();                      // flip all bits (tail kept clean)

  bool is_subset_of(const Bitset& o) const;
  bool operator==(const Bitset& o) const;

  // Index of the first set bit, or nullopt.
  std::optional<std::uint64_t> first_set() const;

 private:
  void check_same(const Bitset& o) const;
  std::uint64_t nbits_ = 0;
  std::vector<std::uint64_t> words_;
};

// ---------------------------------------------------------------------------
// VoxelSet: a Bitset bound to its (frame, grid) window.
// ---------------------------------------------------------------------------
struct VoxelSet {
  Frame frame;
  GridSpec grid;
  Bitset bits;

  VoxelSet() = default;
  VoxelSet(Frame f, GridSpec g);

  std::uint64_t cell_count() const { return bits.count(); }
  std::uint64_t window_size() const { return grid.size(); }
  double volume_fraction() const;

  bool get(std::uint64_t lin) const { return bits.get(lin); }
  void set(std::uint64_t lin) { bits.set(lin); }

  std::vector<double> center_local(std::uint64_t lin) const;
  std::vector<double> center_ambient(std::uint64_t lin) const;

  // Cell containing the given local point, or nullopt if outside the window.
  std::optional<std::uint64_t> cell_of_local(const std::vector<double>& local) const;
  // Nearest cell (clamped to the window).
  std::uint64_t nearest_cell_local(const std::vector<double>& local) const;

  // True if the cell lies on the window boundary (some axis index is 0 or
  // cells-1).
  bool on_window_boundary(std::uint64_t lin) const;
  // True if any set cell touches the window boundary.
  bool touches_window_boundary() const;

  // Linear indices of all set cells, ascending.
  std::vector<std::uint64_t> set_cells() const;
};

// Boolean algebra; operands must share the grid shape (cells per axis).
VoxelSet v_and(const VoxelSet& a, const VoxelSet& b);
VoxelSet v_or(const VoxelSet& a, const VoxelSet& b);
VoxelSet v_diff(const VoxelSet& a, const VoxelSet& b);
VoxelSet v_complement(const VoxelSet& a);

// Set cells with at least one face neighbor that is outside the set or
// outside the window.
VoxelSet boundary_shell(const VoxelSet& a);

// Chebyshev dilation by `r` cells (3^d neighborhood applied r times),
// clipped to the window.  Implemented axis-by-axis.
VoxelSet dilate_chebyshev(const VoxelSet& a, std::uint32_t r = 1);

// Symmetric Hausdorff distance in the Chebyshev cell metric, computed by
// iterated dilation.  Returns nullopt if it exceeds `cap` or exactly one
// side is empty; two empty sets have distance 0.
std::optional<std::uint32_t> hausdorff_cells(const VoxelSet& a, const VoxelSet& b,
                                             std::uint32_t cap);

enum class Adjacency : std::uint8_t {
  kFace,       // 2d neighbors (shared (d-1)-face)
  kChebyshev,  // 3^d - 1 neighbors (any shared vertex)
};

// Number of connected components of the set cells.
std::uint32_t component_count(const VoxelSet& a, Adjacency adj);

// Connected component (within the set) containing `seed`; seed must be set.
VoxelSet component_containing(const VoxelSet& a, std::uint64_t seed, Adjacency adj);

// One representative (lowest linear index) per Chebyshev component.
std::vector<std::uint64_t> chebyshev_component_seeds(const VoxelSet& a);

// Complement cells reachable from the window boundary by face steps through
// the complement.  (The unreachable complement cells are the "enclosed"
// ones.)
Bitset complement_reachable_from_boundary(const VoxelSet& a);

}  // namespace hxconv
