#include "hxconv/voxel.hpp"

#include <bit>
#include <stdexcept>

namespace hxconv {

// ---------------------------------------------------------------------------
// Bitset
// ---------------------------------------------------------------------------

std::uint64_t Bitset::count() const {
  std::uint64_t c = 0;
  for (std::uint64_t w : words_) c += static_cast<std::uint64_t>(std::popcount(w));
  return c;
}

bool Bitset::any() const {
  for (std::uint64_t w : words_) {
    if (w) return true;
  }
  return false;
}

void Bitset::check_same(const Bitset& o) const {
  if (nbits_ != o.nbits_) {
    throw std::invalid_argument("Bitset: size mismatch");
  }
}

void Bitset::and_with(const Bitset& o) {
  check_same(o);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
}

void Bitset::or_with(const Bitset& o) {
  check_same(o);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
}

void Bitset::andnot_with(const Bitset& o) {
  check_same(o);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
}

void Bitset::invert() {
  for (auto& w : words_) w = ~w;
  const std::uint64_t tail = nbits_ & 63;
  if (tail && !words_.empty()) {
    words_.back() &= (1ull << tail) - 1ull;
  }
}

bool Bitset::is_subset_of(const Bitset& o) const {
  check_same(o);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] & ~o.words_[i]) return false;
  }
  return true;
}

bool Bitset::operator==(const Bitset& o) const {
  return nbits_ == o.nbits_ && words_ == o.words_;
}

std::optional<std::uint64_t> Bitset::first_set() const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i]) {
      return (static_cast<std::uint64_t>(i) << 6) +
             static_cast<std::uint64_t>(std::countr_zero(words_[i]));
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// VoxelSet
// ---------------------------------------------------------------------------

VoxelSet::VoxelSet(Frame f, GridSpec g)
    : frame(std::move(f)), grid(std::move(g)) {
  frame.validate();
  grid.validate();
  if (frame.local_dim() != grid.dim()) {
    throw std::invalid_argument("VoxelSet: frame/grid dimension mismatch");
  }
  bits = Bitset(grid.size());
}

double VoxelSet::volume_fraction() const {
  return static_cast<double>(bits.count()) / static_cast<double>(grid.size());
}

std::vector<double> VoxelSet::center_local(std::uint64_t lin) const {
  return grid.cell_center(grid.multi_index(lin));
}

std::vector<double> VoxelSet::center_ambient(std::uint64_t lin) const {
  return frame.to_ambient(center_local(lin));
}

std::optional<std::uint64_t> VoxelSet::cell_of_local(
    const std::vector<double>& local) const {
  if (local.size() != grid.dim()) {
    throw std::invalid_argument("VoxelSet::cell_of_local: dimension mismatch");
  }
  std::vector<std::uint32_t> idx(grid.dim());
  for (std::size_t a = 0; a < grid.dim(); ++a) {
    if (!GridSpec::contains(grid.axes[a], local[a])) return std::nullopt;
    idx[a] = GridSpec::nearest(grid.axes[a], local[a]);
  }
  return grid.linear_index(idx);
}

std::uint64_t VoxelSet::nearest_cell_local(const std::vector<double>& local) const {
  if (local.size() != grid.dim()) {
    throw std::invalid_argument("VoxelSet::nearest_cell_local: dimension mismatch");
  }
  std::vector<std::uint32_t> idx(grid.dim());
  for (std::size_t a = 0; a < grid.dim(); ++a) {
    idx[a] = GridSpec::nearest(grid.axes[a], local[a]);
  }
  return grid.linear_index(idx);
}

bool VoxelSet::on_window_boundary(std::uint64_t lin) const {
  const auto idx = grid.multi_index(lin);
  for (std::size_t a = 0; a < idx.size(); ++a) {
    if (idx[a] == 0 || idx[a] + 1 == grid.axes[a].cells) return true;
  }
  return false;
}

bool VoxelSet::touches_window_boundary() const {
  const std::uint64_t n = grid.size();
  for (std::uint64_t lin = 0; lin < n; ++lin) {
    if (bits.get(lin) && on_window_boundary(lin)) return true;
  }
  return false;
}

std::vector<std::uint64_t> VoxelSet::set_cells() const {
  std::vector<std::uint64_t> out;
  out.reserve(bits.count());
  const std::uint64_t n = grid.size();
  for (std::uint64_t lin = 0; lin < n; ++lin) {
    if (bits.get(lin)) out.push_back(lin);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Algebra
// ---------------------------------------------------------------------------

namespace {

void require_same_window(const VoxelSet& a, const VoxelSet& b, const char* who) {
  if (!a.grid.same_shape(b.grid) || a.frame.local_dim() != b.frame.local_dim()) {
    throw std::invalid_argument(std::string(who) + ": window shape mismatch");
  }
}

// Incrementally walks every cell of a grid, exposing the multi-index.
class Odometer {
 public:
  explicit Odometer(const GridSpec& g) : grid_(g), idx_(g.dim(), 0) {}

  const std::vector<std::uint32_t>& idx() const { return idx_; }

  bool advance() {
    for (std::size_t a = grid_.dim(); a-- > 0;) {
      if (++idx_[a] < grid_.axes[a].cells) return true;
      idx_[a] = 0;
    }
    return false;
  }

 private:
  const GridSpec& grid_;
  std::vector<std::uint32_t> idx_;
};

// Calls fn(neighbor_linear) for every in-window neighbor of idx.
template <typename Fn>
void for_each_neighbor(const GridSpec& grid,
                       const std::vector<std::uint64_t>& strides,
                       std::vector<std::uint32_t>& idx, std::uint64_t lin,
                       Adjacency adj, Fn&& fn) {
  const std::size_t d = grid.dim();
  if (adj == Adjacency::kFace) {
    for (std::size_t a = 0; a < d; ++a) {
      if (idx[a] > 0) fn(lin - strides[a]);
      if (idx[a] + 1 < grid.axes[a].cells) fn(lin + strides[a]);
    }
    return;
  }
  // Chebyshev: odometer over offsets {-1,0,1}^d, skipping the origin.
  std::vector<int> off(d, -1);
  for (;;) {
    bool in_window = true;
    bool all_zero = true;
    std::int64_t delta = 0;
    for (std::size_t a = 0; a < d; ++a) {
      if (off[a] != 0) all_zero = false;
      const std::int64_t ni = static_cast<std::int64_t>(idx[a]) + off[a];
      if (ni < 0 || ni >= static_cast<std::int64_t>(grid.axes[a].cells)) {
        in_window = false;
        break;
      }
      delta += static_cast<std::int64_t>(off[a]) *
               static_cast<std::int64_t>(strides[a]);
    }
    if (in_window && !all_zero) {
      fn(static_cast<std::uint64_t>(static_cast<std::int64_t>(lin) + delta));
    }
    std::size_t a = d;
    for (;;) {
      if (a == 0) return;  // all offsets rolled over: enumeration done
      --a;
      if (++off[a] <= 1) break;
      off[a] = -1;
    }
  }
}

// Flood fill over `domain` (cells with bit set), seeded by `seeds`; returns
// the visited set.
Bitset flood(const GridSpec& grid, const Bitset& domain,
             const std::vector<std::uint64_t>& seeds, Adjacency adj) {
  Bitset visited(domain.size());
  std::vector<std::uint64_t> stack;
  stack.reserve(1024);
  for (std::uint64_t s : seeds) {
    if (domain.get(s) && !visited.get(s)) {
      visited.set(s);
      stack.push_back(s);
    }
  }
  const auto strides = grid.strides();
  while (!stack.empty()) {
    const std::uint64_t lin = stack.back();
    stack.pop_back();
    auto idx = grid.multi_index(lin);
    for_each_neighbor(grid, strides, idx, lin, adj, [&](std::uint64_t nb) {
      if (domain.get(nb) && !visited.get(nb)) {
        visited.set(nb);
        stack.push_back(nb);
      }
    });
  }
  return visited;
}

}  // namespace

VoxelSet v_and(const VoxelSet& a, const VoxelSet& b) {
  require_same_window(a, b, "v_and");
  VoxelSet out = a;
  out.bits.and_with(b.bits);
  return out;
}

VoxelSet v_or(const VoxelSet& a, const VoxelSet& b) {
  require_same_window(a, b, "v_or");
  VoxelSet out = a;
  out.bits.or_with(b.bits);
  return out;
}

VoxelSet v_diff(const VoxelSet& a, const VoxelSet& b) {
  require_same_window(a, b, "v_diff");
  VoxelSet out = a;
  out.bits.andnot_with(b.bits);
  return out;
}

VoxelSet v_complement(const VoxelSet& a) {
  VoxelSet out = a;
  out.bits.invert();
  return out;
}

VoxelSet boundary_shell(const VoxelSet& a) {
  VoxelSet out = a;
  out.bits = Bitset(a.grid.size());
  const auto strides = a.grid.strides();
  Odometer od(a.grid);
  std::uint64_t lin = 0;
  do {
    if (a.bits.get(lin)) {
      auto idx = a.grid.multi_index(lin);
      bool exposed = false;
      for (std::size_t ax = 0; ax < idx.size() && !exposed; ++ax) {
        if (idx[ax] == 0 || idx[ax] + 1 == a.grid.axes[ax].cells) {
          exposed = true;
          break;
        }
        if (!a.bits.get(lin - strides[ax]) || !a.bits.get(lin + strides[ax])) {
          exposed = true;
        }
      }
      if (exposed) out.bits.set(lin);
    }
    ++lin;
  } while (od.advance());
  return out;
}

VoxelSet dilate_chebyshev(const VoxelSet& a, std::uint32_t r) {
  VoxelSet out = a;
  const auto strides = a.grid.strides();
  for (std::uint32_t round = 0; round < r; ++round) {
    for (std::size_t ax = 0; ax < a.grid.dim(); ++ax) {
      Bitset next = out.bits;
      Odometer od(a.grid);
      std::uint64_t lin = 0;
      do {
        if (out.bits.get(lin)) {
          const auto& idx = od.idx();
          if (idx[ax] > 0) next.set(lin - strides[ax]);
          if (idx[ax] + 1 < a.grid.axes[ax].cells) next.set(lin + strides[ax]);
        }
        ++lin;
      } while (od.advance());
      out.bits = std::move(next);
    }
  }
  return out;
}

std::optional<std::uint32_t> hausdorff_cells(const VoxelSet& a, const VoxelSet& b,
                                             std::uint32_t cap) {
  require_same_window(a, b, "hausdorff_cells");
  const bool ea = a.bits.none();
  const bool eb = b.bits.none();
  if (ea && eb) return 0;
  if (ea != eb) return std::nullopt;

  auto directed = [&](const VoxelSet& from,
                      const VoxelSet& to) -> std::optional<std::uint32_t> {
    VoxelSet grown = to;
    for (std::uint32_t r = 0; r <= cap; ++r) {
      if (from.bits.is_subset_of(grown.bits)) return r;
      grown = dilate_chebyshev(grown, 1);
    }
    return std::nullopt;
  };

  const auto d1 = directed(a, b);
  if (!d1) return std::nullopt;
  const auto d2 = directed(b, a);
  if (!d2) return std::nullopt;
  return std::max(*d1, *d2);
}

std::uint32_t component_count(const VoxelSet& a, Adjacency adj) {
  Bitset visited(a.grid.size());
  std::uint32_t count = 0;
  const std::uint64_t n = a.grid.size();
  for (std::uint64_t lin = 0; lin < n; ++lin) {
    if (a.bits.get(lin) && !visited.get(lin)) {
      ++count;
      const Bitset comp = flood(a.grid, a.bits, {lin}, adj);
      visited.or_with(comp);
    }
  }
  return count;
}

VoxelSet component_containing(const VoxelSet& a, std::uint64_t seed, Adjacency adj) {
  if (!a.bits.get(seed)) {
    throw std::invalid_argument("component_containing: seed cell is not in the set");
  }
  VoxelSet out = a;
  out.bits = flood(a.grid, a.bits, {seed}, adj);
  return out;
}

std::vector<std::uint64_t> chebyshev_component_seeds(const VoxelSet& a) {
  Bitset visited(a.grid.size());
  std::vector<std::uint64_t> seeds;
  const std::uint64_t n = a.grid.size();
  for (std::uint64_t lin = 0; lin < n; ++lin) {
    if (a.bits.get(lin) && !visited.get(lin)) {
      seeds.push_back(lin);
      const Bitset comp = flood(a.grid, a.bits, {lin}, Adjacency::kChebyshev);
      visited.or_with(comp);
    }
  }
  return seeds;
}

Bitset complement_reachable_from_boundary(const VoxelSet& a) {
  Bitset domain = a.bits;
  domain.invert();
  std::vector<std::uint64_t> seeds;
  Odometer od(a.grid);
  std::uint64_t lin = 0;
  do {
    const auto& idx = od.idx();
    bool edge = false;
    for (std::size_t ax = 0; ax < idx.size(); ++ax) {
      if (idx[ax] == 0 || idx[ax] + 1 == a.grid.axes[ax].cells) {
        edge = true;
        break;
      }
    }
    if (edge && domain.get(lin)) seeds.push_back(lin);
    ++lin;
  } while (od.advance());
  return flood(a.grid, domain, seeds, Adjacency::kFace);
}

}  // namespace hxconv
