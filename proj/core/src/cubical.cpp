#include "hxconv/cubical.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace hxconv {

std::size_t cell_dim(std::uint64_t code, std::size_t axes) {
  std::size_t d = 0;
  for (std::size_t a = 0; a < axes; ++a) d += cell_axis_value(code, a) & 1u;
  return d;
}

CubicalComplex build_complex(const VoxelSet& vox) {
  const std::size_t d = vox.grid.dim();
  if (d > kMaxComplexAxes) {
    throw std::invalid_argument("build_complex: too many axes for cell encoding");
  }
  for (const auto& ax : vox.grid.axes) {
    if (ax.cells > kMaxComplexCellsPerAxis) {
      throw std::invalid_argument("build_complex: axis too fine for cell encoding");
    }
  }
  CubicalComplex cx;
  cx.dim = d;

  // Walk the doubled grid (2*cells+1 positions per axis, interleaving
  // vertices and intervals) in encoding order and keep each position that
  // lies in the closure of at least one set voxel.  This emits the cell
  // list already sorted and deduplicated.
  const auto strides = vox.grid.strides();
  std::vector<std::uint32_t> val(d, 0);  // doubled-grid position per axis
  const auto emit_check = [&]() -> bool {
    // Voxels whose closure contains this cell: axis value 2i+1 pins index
    // i; axis value 2i allows indices i-1 and i (clipped to the window).
    std::uint32_t lo[kMaxComplexAxes], hi[kMaxComplexAxes];
    for (std::size_t a = 0; a < d; ++a) {
      const std::uint32_t v = val[a];
      const std::uint32_t cells = vox.grid.axes[a].cells;
      if (v & 1u) {
        lo[a] = hi[a] = v >> 1;
      } else {
        const std::uint32_t i = v >> 1;
        lo[a] = (i == 0) ? 0 : i - 1;
        hi[a] = (i >= cells) ? cells - 1 : i;
      }
    }
    std::uint32_t pick[kMaxComplexAxes];
    for (std::size_t a = 0; a < d; ++a) pick[a] = lo[a];
    for (;;) {
      std::uint64_t lin = 0;
      for (std::size_t a = 0; a < d; ++a) lin += pick[a] * strides[a];
      if (vox.bits.get(lin)) return true;
      std::size_t a = d;
      for (;;) {
        if (a == 0) return false;
        --a;
        if (++pick[a] <= hi[a]) break;
        pick[a] = lo[a];
      }
    }
  };

  // Axis d-1 occupies the high bits of the encoding, so it must be the
  // slowest axis for ascending output.
  for (;;) {
    if (emit_check()) {
      std::uint64_t code = 0;
      for (std::size_t a = 0; a < d; ++a) {
        code |= static_cast<std::uint64_t>(val[a]) << (kCellBitsPerAxis * a);
      }
      cx.cells.push_back(code);
    }
    std::size_t a = 0;
    for (;;) {
      if (++val[a] <= 2 * vox.grid.axes[a].cells) break;
      val[a] = 0;
      ++a;
      if (a == d) return cx;
    }
  }
}

std::vector<std::size_t> cells_by_dim(const CubicalComplex& cx) {
  std::vector<std::size_t> out(cx.dim + 1, 0);
  for (std::uint64_t code : cx.cells) ++out[cell_dim(code, cx.dim)];
  return out;
}

long long euler_characteristic(const CubicalComplex& cx) {
  long long chi = 0;
  for (std::uint64_t code : cx.cells) {
    chi += (cell_dim(code, cx.dim) % 2 == 0) ? 1 : -1;
  }
  return chi;
}

std::vector<std::pair<std::uint64_t, int>> cell_boundary(std::uint64_t code,
                                                         std::size_t axes) {
  std::vector<std::pair<std::uint64_t, int>> faces;
  int sign = 1;  // (-1)^{number of interval axes seen so far}
  for (std::size_t a = 0; a < axes; ++a) {
    const std::uint32_t v = cell_axis_value(code, a);
    if (v & 1u) {
      const std::uint64_t keep = code & ~(kCellAxisMask << (kCellBitsPerAxis * a));
      const std::uint64_t right =
          keep | (static_cast<std::uint64_t>(v + 1) << (kCellBitsPerAxis * a));
      const std::uint64_t left =
          keep | (static_cast<std::uint64_t>(v - 1) << (kCellBitsPerAxis * a));
      faces.emplace_back(right, sign);
      faces.emplace_back(left, -sign);
      sign = -sign;
    }
  }
  return faces;
}

namespace {

// Exact rational scalar for the characteristic-zero rank computation.
struct Frac {
  long long n = 0;
  long long d = 1;
};

using I128 = __int128;

long long narrow(I128 v) {
  if (v > static_cast<I128>(INT64_MAX) || v < static_cast<I128>(INT64_MIN)) {
    throw std::overflow_error("rational elimination: coefficient overflow");
  }
  return static_cast<long long>(v);
}

I128 gcd128(I128 a, I128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const I128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Frac frac_make(I128 n, I128 d) {
  if (d == 0) throw std::domain_error("rational elimination: zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  if (n == 0) return {0, 1};
  const I128 g = gcd128(n, d);
  return {narrow(n / g), narrow(d / g)};
}

Frac frac_add(const Frac& a, const Frac& b) {
  return frac_make(static_cast<I128>(a.n) * b.d + static_cast<I128>(b.n) * a.d,
                   static_cast<I128>(a.d) * b.d);
}

Frac frac_mul(const Frac& a, const Frac& b) {
  return frac_make(static_cast<I128>(a.n) * b.n, static_cast<I128>(a.d) * b.d);
}

Frac frac_div(const Frac& a, const Frac& b) {
  return frac_make(static_cast<I128>(a.n) * b.d, static_cast<I128>(a.d) * b.n);
}

// Sparse columns: row indices ascending.
using ColMod2 = std::vector<std::uint32_t>;
using ColRat = std::vector<std::pair<std::uint32_t, Frac>>;

ColMod2 xor_merge(const ColMod2& a, const ColMod2& b) {
  ColMod2 out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      out.push_back(a[i++]);
    } else if (b[j] < a[i]) {
      out.push_back(b[j++]);
    } else {
      ++i;
      ++j;
    }
  }
  out.insert(out.end(), a.begin() + i, a.end());
  out.insert(out.end(), b.begin() + j, b.end());
  return out;
}

// out = a + scale * b.
ColRat axpy(const ColRat& a, const Frac& scale, const ColRat& b) {
  ColRat out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) {
      out.push_back(a[i++]);
    } else if (b[j].first < a[i].first) {
      out.emplace_back(b[j].first, frac_mul(scale, b[j].second));
      ++j;
    } else {
      const Frac v = frac_add(a[i].second, frac_mul(scale, b[j].second));
      if (v.n != 0) out.emplace_back(a[i].first, v);
      ++i;
      ++j;
    }
  }
  for (; i < a.size(); ++i) out.push_back(a[i]);
  for (; j < b.size(); ++j) {
    out.emplace_back(b[j].first, frac_mul(scale, b[j].second));
  }
  return out;
}

std::size_t rank_mod2(std::vector<ColMod2>& cols, std::size_t nrows) {
  std::vector<std::int64_t> owner(nrows, -1);
  std::vector<ColMod2> stored;
  std::size_t rank = 0;
  for (auto& col : cols) {
    while (!col.empty()) {
      const std::uint32_t low = col.back();
      if (owner[low] < 0) break;
      col = xor_merge(col, stored[static_cast<std::size_t>(owner[low])]);
    }
    if (!col.empty()) {
      owner[col.back()] = static_cast<std::int64_t>(stored.size());
      stored.push_back(std::move(col));
      ++rank;
    }
  }
  return rank;
}

std::size_t rank_rational(std::vector<ColRat>& cols, std::size_t nrows) {
  std::vector<std::int64_t> owner(nrows, -1);
  std::vector<ColRat> stored;
  std::size_t rank = 0;
  for (auto& col : cols) {
    while (!col.empty()) {
      const std::uint32_t low = col.back().first;
      if (owner[low] < 0) break;
      const ColRat& piv = stored[static_cast<std::size_t>(owner[low])];
      const Frac scale =
          frac_mul({-1, 1}, frac_div(col.back().second, piv.back().second));
      col = axpy(col, scale, piv);
    }
    if (!col.empty()) {
      owner[col.back().first] = static_cast<std::int64_t>(stored.size());
      stored.push_back(std::move(col));
      ++rank;
    }
  }
  return rank;
}

}  // namespace

BettiVector betti_numbers(const VoxelSet& vox, HomologyField field) {
  const std::size_t d = vox.grid.dim();
  BettiVector out;
  out.b.assign(d + 1, 0);
  if (vox.bits.none()) {
    out.empty_set = true;
    return out;
  }
  out.b[0] = static_cast<long long>(component_count(vox, Adjacency::kChebyshev));

  const CubicalComplex cx = build_complex(vox);
  const std::size_t N = cx.cells.size();
  const auto find_cell = [&](std::uint64_t code) -> std::size_t {
    const auto it = std::lower_bound(cx.cells.begin(), cx.cells.end(), code);
    if (it == cx.cells.end() || *it != code) {
      throw std::logic_error("betti_numbers: face missing from closed complex");
    }
    return static_cast<std::size_t>(it - cx.cells.begin());
  };

  std::vector<std::uint8_t> cdim(N);
  std::vector<std::uint8_t> alive(N, 1);
  std::vector<std::uint8_t> bdcnt(N);
  for (std::size_t i = 0; i < N; ++i) {
    cdim[i] = static_cast<std::uint8_t>(cell_dim(cx.cells[i], d));
    bdcnt[i] = static_cast<std::uint8_t>(2 * cdim[i]);
  }

  std::vector<std::size_t> work;
  // Decrement the boundary counts of every living coface of cell `ci`,
  // queueing those that become free-coface candidates.
  const auto notify_cofaces = [&](std::size_t ci) {
    const std::uint64_t code = cx.cells[ci];
    for (std::size_t a = 0; a < d; ++a) {
      const std::uint32_t v = cell_axis_value(code, a);
      if (v & 1u) continue;  // interval axes have no cofaces along themselves
      const std::uint64_t keep = code & ~(kCellAxisMask << (kCellBitsPerAxis * a));
      const std::uint32_t top = 2 * vox.grid.axes[a].cells;
      for (const std::int64_t cand :
           {static_cast<std::int64_t>(v) - 1, static_cast<std::int64_t>(v) + 1}) {
        if (cand < 0 || cand > static_cast<std::int64_t>(top)) continue;
        const std::uint64_t cof =
            keep | (static_cast<std::uint64_t>(cand) << (kCellBitsPerAxis * a));
        const auto it = std::lower_bound(cx.cells.begin(), cx.cells.end(), cof);
        if (it == cx.cells.end() || *it != cof) continue;
        const std::size_t j = static_cast<std::size_t>(it - cx.cells.begin());
        if (!alive[j]) continue;
        if (--bdcnt[j] == 1) work.push_back(j);
      }
    }
  };

  // Seed: drop one vertex of each component; this kills exactly the
  // degree-0 part (tracked separately above) and licenses the cascade.
  for (const std::uint64_t voxlin : chebyshev_component_seeds(vox)) {
    const auto idx = vox.grid.multi_index(voxlin);
    std::uint64_t vcode = 0;
    for (std::size_t a = 0; a < d; ++a) {
      vcode |= static_cast<std::uint64_t>(2 * idx[a]) << (kCellBitsPerAxis * a);
    }
    const std::size_t ci = find_cell(vcode);
    alive[ci] = 0;
    notify_cofaces(ci);
  }

  // Free-coface cancellation cascade.
  while (!work.empty()) {
    const std::size_t ci = work.back();
    work.pop_back();
    if (!alive[ci] || bdcnt[ci] != 1) continue;
    std::size_t partner = N;
    for (const auto& face : cell_boundary(cx.cells[ci], d)) {
      const std::size_t fj = find_cell(face.first);
      if (alive[fj]) {
        partner = fj;
        break;
      }
    }
    if (partner == N) continue;  // stale entry
    alive[ci] = 0;
    alive[partner] = 0;
    notify_cofaces(ci);
    notify_cofaces(partner);
  }

  // Rank computation on the surviving core, degree by degree.
  std::vector<std::vector<std::uint32_t>> local_of_dim(d + 1);
  std::vector<std::uint32_t> local_id(N, 0);
  std::vector<std::size_t> alive_count(d + 1, 0);
  for (std::size_t i = 0; i < N; ++i) {
    if (alive[i]) {
      local_id[i] = static_cast<std::uint32_t>(local_of_dim[cdim[i]].size());
      local_of_dim[cdim[i]].push_back(static_cast<std::uint32_t>(i));
      ++alive_count[cdim[i]];
    }
  }

  std::vector<std::size_t> rank(d + 2, 0);
  for (std::size_t k = 1; k <= d; ++k) {
    const auto& cols_cells = local_of_dim[k];
    if (cols_cells.empty()) continue;
    if (field == HomologyField::kMod2) {
      std::vector<ColMod2> cols;
      cols.reserve(cols_cells.size());
      for (const std::uint32_t gi : cols_cells) {
        ColMod2 col;
        for (const auto& face : cell_boundary(cx.cells[gi], d)) {
          const std::size_t fj = find_cell(face.first);
          if (alive[fj]) col.push_back(local_id[fj]);
        }
        std::sort(col.begin(), col.end());
        cols.push_back(std::move(col));
      }
      rank[k] = rank_mod2(cols, alive_count[k - 1]);
    } else {
      std::vector<ColRat> cols;
      cols.reserve(cols_cells.size());
      for (const std::uint32_t gi : cols_cells) {
        ColRat col;
        for (const auto& face : cell_boundary(cx.cells[gi], d)) {
          const std::size_t fj = find_cell(face.first);
          if (alive[fj]) col.emplace_back(local_id[fj], Frac{face.second, 1});
        }
        std::sort(col.begin(), col.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        cols.push_back(std::move(col));
      }
      rank[k] = rank_rational(cols, alive_count[k - 1]);
    }
  }

  for (std::size_t k = 1; k <= d; ++k) {
    out.b[k] = static_cast<long long>(alive_count[k]) -
               static_cast<long long>(rank[k]) -
               static_cast<long long>(rank[k + 1]);
  }
  return out;
}

AcyclicStatus acyclic_status(const VoxelSet& vox, HomologyField field) {
  if (vox.bits.none()) return AcyclicStatus::kEmpty;
  const BettiVector bv = betti_numbers(vox, field);
  return bv.is_point_like() ? AcyclicStatus::kAcyclic : AcyclicStatus::kNonAcyclic;
}

}  // namespace hxconv
