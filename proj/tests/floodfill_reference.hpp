#pragma once
// Reference h-combination used by tests: label complement components with a
// plain queue BFS over face neighbors and add back the components that never
// meet the window boundary.  Independent of the production flood fill.

#include <cstdint>
#include <queue>
#include <vector>

#include "hxconv/util.hpp"
#include "hxconv/voxel.hpp"

namespace testref {

inline hxconv::VoxelSet brute_h_combination(const hxconv::VoxelSet& e) {
  const std::uint64_t n = e.grid.size();
  const std::size_t d = e.grid.dim();
  std::vector<int> label(n, -1);
  hxconv::VoxelSet out = e;
  for (std::uint64_t s = 0; s < n; ++s) {
    if (e.bits.get(s) || label[s] != -1) continue;
    std::vector<std::uint64_t> comp;
    bool touches = false;
    std::queue<std::uint64_t> q;
    q.push(s);
    label[s] = 1;
    while (!q.empty()) {
      const std::uint64_t cur = q.front();
      q.pop();
      comp.push_back(cur);
      const std::vector<std::uint32_t> idx = e.grid.multi_index(cur);
      if (e.on_window_boundary(cur)) touches = true;
      for (std::size_t a = 0; a < d; ++a) {
        for (int dir = -1; dir <= 1; dir += 2) {
          const std::int64_t v = static_cast<std::int64_t>(idx[a]) + dir;
          if (v < 0 || v >= static_cast<std::int64_t>(e.grid.axes[a].cells)) {
            continue;
          }
          std::vector<std::uint32_t> nb = idx;
          nb[a] = static_cast<std::uint32_t>(v);
          const std::uint64_t lin = e.grid.linear_index(nb);
          if (!e.bits.get(lin) && label[lin] == -1) {
            label[lin] = 1;
            q.push(lin);
          }
        }
      }
    }
    if (!touches) {
      for (const std::uint64_t c : comp) out.bits.set(c);
    }
  }
  return out;
}

// Random bitset with the outermost cell ring kept clear, so boundedness of
// complement components is certifiable on the window.
inline hxconv::VoxelSet random_interior_set(const hxconv::Frame& frame,
                                            std::uint64_t seed,
                                            std::uint32_t cells,
                                            double density) {
  hxconv::VoxelSet v(frame,
                     hxconv::make_cube_grid(frame.local_dim(), -1.0, 1.0, cells));
  std::uint64_t st = seed;
  for (std::uint64_t lin = 0; lin < v.grid.size(); ++lin) {
    if (v.on_window_boundary(lin)) continue;
    if (hxconv::u01(st) < density) v.bits.set(lin);
  }
  return v;
}

}  // namespace testref
