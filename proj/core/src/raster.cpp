#include "hxconv/raster.hpp"

#include <cmath>
#include <limits>
#include <mutex>

namespace hxconv {

namespace {

// Evaluates fn(lin, local_coords) for every cell center of grid, splitting
// the linear range across threads.  fn must be thread-safe for disjoint lin.
template <typename Fn>
void for_each_center(const GridSpec& grid, unsigned threads, Fn&& fn) {
  const std::uint64_t n = grid.size();
  const std::size_t d = grid.dim();
  parallel_for(0, n, threads, [&](std::size_t lo, std::size_t hi) {
    std::vector<std::uint32_t> idx = grid.multi_index(lo);
    std::vector<double> local(d);
    for (std::uint64_t lin = lo; lin < hi; ++lin) {
      for (std::size_t a = 0; a < d; ++a) local[a] = grid.axes[a].center(idx[a]);
      fn(lin, local.data());
      // Advance the odometer (last axis fastest), matching linear order.
      for (std::size_t a = d; a-- > 0;) {
        if (++idx[a] < grid.axes[a].cells) break;
        idx[a] = 0;
      }
    }
  });
}

}  // namespace

VoxelSet rasterize(const SceneSet& scene, const Frame& frame, const GridSpec& grid,
                   unsigned threads) {
  if (frame.ambient_n != scene.ambient_n) {
    throw std::invalid_argument("rasterize: frame/scene dimension mismatch");
  }
  VoxelSet out(frame, grid);
  const auto pred = compile_restricted(scene, frame.affine());
  // Bit writes from different threads may share a word; collect per-chunk
  // into a local buffer guarded by a mutex at merge time instead.
  std::mutex merge_mutex;
  const std::uint64_t n = grid.size();
  parallel_for(0, n, threads, [&](std::size_t lo, std::size_t hi) {
    std::vector<std::uint64_t> hits;
    std::vector<std::uint32_t> idx = grid.multi_index(lo);
    const std::size_t d = grid.dim();
    std::vector<double> local(d);
    for (std::uint64_t lin = lo; lin < hi; ++lin) {
      for (std::size_t a = 0; a < d; ++a) local[a] = grid.axes[a].center(idx[a]);
      if (pred->eval(local.data())) hits.push_back(lin);
      for (std::size_t a = d; a-- > 0;) {
        if (++idx[a] < grid.axes[a].cells) break;
        idx[a] = 0;
      }
    }
    std::lock_guard<std::mutex> lock(merge_mutex);
    for (std::uint64_t h : hits) out.bits.set(h);
  });
  return out;
}

VoxelSet line_section(const SceneSet& scene, const HLine& line,
                      const GridSpec& tgrid, unsigned threads) {
  if (tgrid.dim() != 4) {
    throw std::invalid_argument("line_section: t-grid must be 4-dimensional");
  }
  return rasterize(scene, Frame::from_line(line), tgrid, threads);
}

GridSpec section_window(const SceneSet& scene, const HLine& line,
                        std::uint32_t cells_per_axis, double pad_frac) {
  if (!scene.bound) {
    throw std::invalid_argument("section_window: scene has no bound certificate");
  }
  const Frame f = Frame::from_line(line);
  // In the line frame the section is contained in the ball of radius R
  // around the local coordinates of the bound center (orthogonal projection
  // can only shrink distances).
  const std::vector<double> c = f.local_coords(scene.bound->center);
  const double R = scene.bound->radius;
  GridSpec g;
  g.axes.reserve(4);
  for (std::size_t a = 0; a < 4; ++a) {
    const double pad = pad_frac * (2.0 * R);
    g.axes.push_back(GridAxis{c[a] - R - pad, c[a] + R + pad, cells_per_axis});
  }
  g.validate();
  return g;
}

Affine pairing_affine(const Functional& h) {
  if (h.empty()) throw std::invalid_argument("pairing_affine: empty functional");
  const std::size_t n = h.size();
  Affine out(4, 4 * n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t c = 0; c < 4; ++c) {
      // Contribution of coordinate u_{4k+c}: basis(c) * h_k.
      const Quaternion q = Quaternion::basis(c) * h[k];
      out.at(0, 4 * k + c) = q.w;
      out.at(1, 4 * k + c) = q.x;
      out.at(2, 4 * k + c) = q.y;
      out.at(3, 4 * k + c) = q.z;
    }
  }
  return out;
}

namespace {

// Runs fn(value4) at every scene hit among supersample^d points per cell.
template <typename Fn>
void scan_image_points(const SceneSet& scene, const Frame& frame,
                       const GridSpec& grid, const Functional& h,
                       unsigned supersample, unsigned threads, Fn&& fn) {
  if (frame.ambient_n != scene.ambient_n) {
    throw std::invalid_argument("image scan: frame/scene dimension mismatch");
  }
  if (supersample < 1) supersample = 1;
  const auto pred = compile_restricted(scene, frame.affine());
  const Affine value_map = pairing_affine(h).compose(frame.affine());
  const std::size_t d = grid.dim();
  const std::uint64_t n = grid.size();
  const double inv_ss = 1.0 / static_cast<double>(supersample);
  std::uint64_t sub_total = 1;
  for (std::size_t a = 0; a < d; ++a) sub_total *= supersample;

  parallel_for(0, n, threads, [&](std::size_t lo, std::size_t hi) {
    std::vector<std::uint32_t> idx = grid.multi_index(lo);
    std::vector<std::uint32_t> sub(d, 0);
    std::vector<double> local(d);
    double value[4];
    for (std::uint64_t lin = lo; lin < hi; ++lin) {
      for (std::uint64_t s = 0; s < sub_total; ++s) {
        std::uint64_t rem = s;
        for (std::size_t a = d; a-- > 0;) {
          sub[a] = static_cast<std::uint32_t>(rem % supersample);
          rem /= supersample;
        }
        for (std::size_t a = 0; a < d; ++a) {
          const auto& ax = grid.axes[a];
          const double frac =
              (static_cast<double>(sub[a]) + 0.5) * inv_ss;
          local[a] = ax.lo + (static_cast<double>(idx[a]) + frac) * ax.step();
        }
        if (pred->eval(local.data())) {
          value_map.apply(local.data(), value);
          fn(value);
        }
      }
      for (std::size_t a = d; a-- > 0;) {
        if (++idx[a] < grid.axes[a].cells) break;
        idx[a] = 0;
      }
    }
  });
}

}  // namespace

std::optional<std::vector<std::pair<double, double>>> image_bbox(
    const SceneSet& scene, const Frame& frame, const GridSpec& grid,
    const Functional& h, unsigned supersample, unsigned threads) {
  std::mutex m;
  bool any = false;
  std::vector<std::pair<double, double>> box(
      4, {std::numeric_limits<double>::infinity(),
          -std::numeric_limits<double>::infinity()});
  scan_image_points(scene, frame, grid, h, supersample, threads,
                    [&](const double* v) {
                      std::lock_guard<std::mutex> lock(m);
                      any = true;
                      for (std::size_t a = 0; a < 4; ++a) {
                        box[a].first = std::min(box[a].first, v[a]);
                        box[a].second = std::max(box[a].second, v[a]);
                      }
                    });
  if (!any) return std::nullopt;
  return box;
}

GridSpec fit_image_grid(const std::vector<std::pair<double, double>>& bbox,
                        double target_cell, double margin_cells) {
  if (bbox.size() != 4 || !(target_cell > 0.0)) {
    throw std::invalid_argument("fit_image_grid: bad arguments");
  }
  GridSpec g;
  g.axes.reserve(4);
  for (std::size_t a = 0; a < 4; ++a) {
    const double margin = margin_cells * target_cell;
    double lo = bbox[a].first - margin;
    double hi = bbox[a].second + margin;
    double extent = hi - lo;
    std::uint32_t cells =
        static_cast<std::uint32_t>(std::ceil(extent / target_cell));
    if (cells < 5) {
      // Keep the requested resolution; widen the window symmetrically.
      cells = 5;
      const double grow = 5.0 * target_cell - extent;
      lo -= 0.5 * grow;
      hi += 0.5 * grow;
    }
    if (cells > 129) cells = 129;
    g.axes.push_back(GridAxis{lo, hi, cells});
  }
  g.validate();
  return g;
}

VoxelSet project_scene_image(const SceneSet& scene, const Frame& frame,
                             const GridSpec& grid, const Functional& h,
                             const GridSpec& img_grid, unsigned supersample,
                             unsigned threads) {
  if (img_grid.dim() != 4) {
    throw std::invalid_argument("project_scene_image: image grid must be 4D");
  }
  const Frame img_frame = Frame::canonical(1, {0, 1, 2, 3});
  VoxelSet img(img_frame, img_grid);
  std::mutex m;
  bool escaped = false;
  std::vector<std::pair<double, double>> req(
      4, {std::numeric_limits<double>::infinity(),
          -std::numeric_limits<double>::infinity()});
  scan_image_points(
      scene, frame, grid, h, supersample, threads, [&](const double* v) {
        std::vector<std::uint32_t> idx(4);
        bool inside = true;
        for (std::size_t a = 0; a < 4; ++a) {
          if (!GridSpec::contains(img_grid.axes[a], v[a])) {
            inside = false;
            break;
          }
          idx[a] = GridSpec::nearest(img_grid.axes[a], v[a]);
        }
        std::lock_guard<std::mutex> lock(m);
        if (!inside) {
          escaped = true;
          for (std::size_t a = 0; a < 4; ++a) {
            req[a].first = std::min(req[a].first, v[a]);
            req[a].second = std::max(req[a].second, v[a]);
          }
          return;
        }
        img.bits.set(img_grid.linear_index(idx));
      });
  if (escaped) {
    throw BoundsError("project_scene_image: image escapes the target window",
                      std::move(req));
  }
  return dilate_chebyshev(img, 1);
}

std::vector<std::vector<double>> cell_center_points(const VoxelSet& vox) {
  std::vector<std::vector<double>> out;
  out.reserve(vox.cell_count());
  const std::uint64_t n = vox.grid.size();
  for (std::uint64_t lin = 0; lin < n; ++lin) {
    if (vox.bits.get(lin)) out.push_back(vox.center_local(lin));
  }
  return out;
}

}  // namespace hxconv
