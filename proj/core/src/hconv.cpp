#include "hxconv/hconv.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <mutex>
#include <unordered_map>

namespace hxconv {

namespace {

double norm4_sq(const double* v) {
  return v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3];
}

double dist_sq(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

Functional normalized_functional(const Functional& f) {
  const double norm = hpoint_norm(f);
  if (!(norm > 1e-12)) {
    throw std::invalid_argument("functional must be nonzero");
  }
  Functional out = f;
  const double inv = 1.0 / norm;
  for (Quaternion& q : out) q *= inv;
  return out;
}

// Symmetric t-window around 0 that provably contains the whole section:
// |x + t*d - c| <= R forces |t_a| <= |c_local_a| + R for every axis of the
// line frame (|dir| = 1 inside the frame).  Keeping the window symmetric
// also guarantees the t = 0 cell exists with the origin as a cell center
// for odd cell counts.
GridSpec origin_section_window(const SceneSet& scene, const HLine& line,
                               std::uint32_t cells) {
  if (!scene.bound) {
    throw std::invalid_argument(
        "hcomb_n: scene has no bound certificate for section windows");
  }
  const Frame f = Frame::from_line(line);
  const std::vector<double> c = f.local_coords(scene.bound->center);
  const double R = scene.bound->radius;
  GridSpec g;
  g.axes.reserve(4);
  for (std::size_t a = 0; a < 4; ++a) {
    const double hw = std::fabs(c[a]) + R;
    const double pad = 0.05 * hw + 1e-9;
    g.axes.push_back(GridAxis{-(hw + pad), hw + pad, cells});
  }
  g.validate();
  return g;
}

}  // namespace

// ---------------------------------------------------------------------------
// DirectionSample
// ---------------------------------------------------------------------------
DirectionSample DirectionSample::unit_sphere(std::size_t n, std::size_t count,
                                             std::uint64_t seed) {
  if (n == 0) {
    throw std::invalid_argument("unit_sphere: ambient dimension must be >= 1");
  }
  DirectionSample out;
  out.seed = seed;
  out.items.reserve(count);
  const std::size_t m = 4 * n;

  // Generalized golden ratio: the positive root of x^{m+1} = x + 1; its
  // inverse powers give an additive sequence equidistributed on [0,1)^m.
  double gamma = 1.5;
  for (int it = 0; it < 64; ++it) {
    gamma = std::pow(1.0 + gamma, 1.0 / static_cast<double>(m + 1));
  }
  std::vector<double> alpha(m), offset(m);
  double power = 1.0;
  for (std::size_t j = 0; j < m; ++j) {
    power /= gamma;
    alpha[j] = power;
    std::uint64_t st = derive_seed(seed, j);
    offset[j] = u01(st);
  }

  std::uint64_t rescue = derive_seed(seed, 0x5eedULL);
  std::vector<double> v(m);
  for (std::size_t i = 0; i < count; ++i) {
    double norm_sq = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      double u = offset[j] + static_cast<double>(i + 1) * alpha[j];
      u -= std::floor(u);
      u = std::min(1.0 - 1e-12, std::max(1e-12, u));
      v[j] = inv_normal_cdf(u);
      norm_sq += v[j] * v[j];
    }
    while (!(norm_sq > 1e-18)) {  // essentially unreachable; deterministic rescue
      norm_sq = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        v[j] = inv_normal_cdf(std::min(1.0 - 1e-12, std::max(1e-12, u01(rescue))));
        norm_sq += v[j] * v[j];
      }
    }
    const double inv = 1.0 / std::sqrt(norm_sq);
    std::vector<double> flat(m);
    for (std::size_t j = 0; j < m; ++j) flat[j] = v[j] * inv;
    out.items.push_back(unflatten(flat));
  }
  return out;
}

// ---------------------------------------------------------------------------
// h_combination
// ---------------------------------------------------------------------------
VoxelSet h_combination(const VoxelSet& e) {
  if (e.touches_window_boundary()) {
    throw WindowError(
        "h-combination: set touches the window boundary (unbounded in "
        "window); enlarge the window");
  }
  Bitset reach = complement_reachable_from_boundary(e);
  VoxelSet out = e;
  out.bits = reach;
  out.bits.invert();  // set cells + enclosed complement cells
  return out;
}

// ---------------------------------------------------------------------------
// hcomb_n
// ---------------------------------------------------------------------------
CandidateFamily hcombn_candidates(const SceneSet& scene, const Frame& frame,
                                  const GridSpec& grid,
                                  std::size_t ring_samples,
                                  std::size_t far_samples, std::uint64_t seed,
                                  unsigned threads) {
  CandidateFamily out;
  out.base = rasterize(scene, frame, grid, threads);
  out.candidates = out.base;

  const VoxelSet dil1 = dilate_chebyshev(out.base, 1);
  if (ring_samples > 0) {
    const VoxelSet ring = v_diff(dil1, out.base);
    const std::vector<std::uint64_t> cells = ring.set_cells();
    if (!cells.empty()) {
      if (cells.size() <= ring_samples) {
        for (std::uint64_t lin : cells) out.candidates.bits.set(lin);
      } else {
        const std::uint64_t stride = cells.size() / ring_samples;
        std::uint64_t st = derive_seed(seed, 0x0157ULL);
        for (std::uint64_t i = splitmix64(st) % stride; i < cells.size();
             i += stride) {
          out.candidates.bits.set(cells[i]);
        }
      }
    }
  }

  if (far_samples > 0) {
    const VoxelSet dil2 = dilate_chebyshev(dil1, 1);
    std::uint64_t st = derive_seed(seed, 0xFA12ULL);
    const std::uint64_t total = grid.size();
    std::size_t placed = 0;
    for (std::size_t tries = 0; placed < far_samples && tries < 64 * far_samples + 64;
         ++tries) {
      const std::uint64_t lin = splitmix64(st) % total;
      if (dil2.bits.get(lin) || out.candidates.bits.get(lin)) continue;
      out.candidates.bits.set(lin);
      ++placed;
    }
  }
  return out;
}

VoxelSet hcomb_n(const SceneSet& scene, const VoxelSet& candidates,
                 const DirectionSample& dirs, const HCombNParams& p) {
  if (candidates.frame.ambient_n != scene.ambient_n) {
    throw std::invalid_argument("hcomb_n: frame/scene dimension mismatch");
  }

  // In H^1 every line carries the whole space, so the per-line notion
  // collapses to the window h-combination of the raster.
  if (scene.ambient_n == 1 && candidates.frame.local_dim() == 4) {
    const VoxelSet full =
        rasterize(scene, candidates.frame, candidates.grid, p.threads);
    return v_and(h_combination(full), candidates);
  }

  if (dirs.items.empty()) {
    throw std::invalid_argument("hcomb_n: needs at least one direction");
  }

  const std::vector<std::uint64_t> cand_cells = candidates.set_cells();
  std::vector<std::uint8_t> verdict(cand_cells.size(), 0);
  const auto pred = compile_restricted(scene, candidates.frame.affine());
  const std::vector<double> zero4(4, 0.0);

  parallel_for(0, cand_cells.size(), p.threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const std::uint64_t lin = cand_cells[i];
      const std::vector<double> local = candidates.center_local(lin);
      if (pred->eval(local.data())) {
        verdict[i] = 1;  // t = 0 lies in its own section
        continue;
      }
      const std::vector<double> amb = candidates.frame.to_ambient(local);
      if (scene.bound) {
        // Outside the bound ball the section constraint region in t is a
        // convex set missing t = 0, so no direction can enclose the origin.
        if (std::sqrt(dist_sq(amb, scene.bound->center)) >
            scene.bound->radius + 1e-9) {
          continue;
        }
      }
      const HPoint base = unflatten(amb);
      for (const HPoint& d : dirs.items) {
        const HLine line{base, d};
        const GridSpec win = origin_section_window(scene, line, p.section_cells);
        const VoxelSet sec = line_section(scene, line, win, 1);
        const auto c0 = sec.cell_of_local(zero4);
        if (!c0) continue;
        if (sec.bits.get(*c0)) {
          verdict[i] = 1;
          break;
        }
        if (sec.bits.none()) continue;
        const Bitset reach = complement_reachable_from_boundary(sec);
        if (!reach.get(*c0)) {
          verdict[i] = 1;  // the origin's complement component is enclosed
          break;
        }
      }
    }
  });

  VoxelSet out(candidates.frame, candidates.grid);
  for (std::size_t i = 0; i < cand_cells.size(); ++i) {
    if (verdict[i]) out.bits.set(cand_cells[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// h_hull_sampled
// ---------------------------------------------------------------------------
GridSpec fit_value_grid(const std::vector<std::pair<double, double>>& bbox,
                        double target_cell, std::uint32_t min_cells,
                        std::uint32_t max_cells) {
  if (bbox.size() != 4 || !(target_cell > 0.0)) {
    throw std::invalid_argument("fit_value_grid: bad arguments");
  }
  if (min_cells < 3) min_cells = 3;
  if (max_cells < min_cells) max_cells = min_cells;

  std::vector<double> lo(4), hi(4);
  std::vector<std::uint32_t> cells(4);
  for (std::size_t a = 0; a < 4; ++a) {
    lo[a] = bbox[a].first - 2.0 * target_cell;
    hi[a] = bbox[a].second + 2.0 * target_cell;
    const double extent = std::max(hi[a] - lo[a], 1e-12);
    const double want = std::ceil(extent / target_cell);
    cells[a] = static_cast<std::uint32_t>(
        std::min<double>(max_cells, std::max<double>(min_cells, want)));
  }
  // Respect the global cell cap by shaving the per-axis counts uniformly.
  for (int guard = 0; guard < 64; ++guard) {
    double total = 1.0;
    for (std::size_t a = 0; a < 4; ++a) total *= cells[a];
    if (total <= static_cast<double>(kMaxGridCells)) break;
    const double scale =
        std::pow(static_cast<double>(kMaxGridCells) / total, 0.25) * 0.999;
    for (std::size_t a = 0; a < 4; ++a) {
      cells[a] = std::max<std::uint32_t>(
          min_cells,
          static_cast<std::uint32_t>(std::floor(cells[a] * scale)));
    }
  }
  GridSpec g;
  g.axes.reserve(4);
  for (std::size_t a = 0; a < 4; ++a) {
    g.axes.push_back(GridAxis{lo[a], hi[a], cells[a]});
  }
  g.validate();
  return g;
}

VoxelSet h_hull_sampled(const SceneSet& scene, const Frame& frame,
                        const GridSpec& grid,
                        const std::vector<Functional>& funcs,
                        const HullParams& p) {
  if (funcs.empty()) {
    throw std::invalid_argument("h_hull_sampled: needs at least one functional");
  }
  if (frame.ambient_n != scene.ambient_n) {
    throw std::invalid_argument("h_hull_sampled: frame/scene dimension mismatch");
  }
  const std::size_t d = grid.dim();
  const unsigned ss = p.supersample ? p.supersample : (d >= 5 ? 1u : 2u);

  // Per-cell sample offsets in step fractions: always the center, plus the
  // +/- quarter-step corners when supersampling.
  std::vector<std::vector<double>> offs;
  offs.emplace_back(d, 0.0);
  if (ss >= 2) {
    for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
      std::vector<double> off(d);
      for (std::size_t a = 0; a < d; ++a) {
        off[a] = ((mask >> a) & 1u) ? 0.25 : -0.25;
      }
      offs.push_back(std::move(off));
    }
  }
  const std::size_t npts = offs.size();
  const std::uint64_t ncells = grid.size();

  // One scene-membership sweep shared by every functional.
  const auto pred = compile_restricted(scene, frame.affine());
  std::vector<std::uint8_t> inside(ncells * npts, 0);
  parallel_for(0, ncells, p.threads, [&](std::size_t clo, std::size_t chi) {
    std::vector<std::uint32_t> idx = grid.multi_index(clo);
    std::vector<double> local(d);
    for (std::uint64_t lin = clo; lin < chi; ++lin) {
      for (std::size_t s = 0; s < npts; ++s) {
        for (std::size_t a = 0; a < d; ++a) {
          const auto& ax = grid.axes[a];
          local[a] = ax.lo +
                     (static_cast<double>(idx[a]) + 0.5 + offs[s][a]) * ax.step();
        }
        if (pred->eval(local.data())) inside[lin * npts + s] = 1;
      }
      for (std::size_t a = d; a-- > 0;) {
        if (++idx[a] < grid.axes[a].cells) break;
        idx[a] = 0;
      }
    }
  });

  Bitset alive(ncells);
  alive.invert();  // start from the full window

  const double target_cell = p.image_target_cell_frac * grid.min_step();

  for (const Functional& f : funcs) {
    const Functional fn = normalized_functional(f);
    const Affine vm = pairing_affine(fn).compose(frame.affine());

    // Exact bounding box of the affine value map over the window box.
    std::vector<std::pair<double, double>> bbox(4);
    for (std::size_t r = 0; r < 4; ++r) {
      double blo = vm.b[r], bhi = vm.b[r];
      for (std::size_t c = 0; c < d; ++c) {
        const double coef = vm.at(r, c);
        const double v0 = coef * grid.axes[c].lo;
        const double v1 = coef * grid.axes[c].hi;
        blo += std::min(v0, v1);
        bhi += std::max(v0, v1);
      }
      bbox[r] = {blo, bhi};
    }
    const GridSpec ig =
        fit_value_grid(bbox, target_cell, p.image_cells_min, p.image_cells_max);

    // Splat the image of every inside sample point.
    VoxelSet img(Frame::canonical(1, {0, 1, 2, 3}), ig);
    std::mutex merge;
    parallel_for(0, ncells, p.threads, [&](std::size_t clo, std::size_t chi) {
      std::vector<std::uint64_t> hits;
      std::vector<std::uint32_t> idx = grid.multi_index(clo);
      std::vector<double> local(d);
      std::vector<std::uint32_t> vi(4);
      double value[4];
      for (std::uint64_t lin = clo; lin < chi; ++lin) {
        for (std::size_t s = 0; s < npts; ++s) {
          if (!inside[lin * npts + s]) continue;
          for (std::size_t a = 0; a < d; ++a) {
            const auto& ax = grid.axes[a];
            local[a] = ax.lo +
                       (static_cast<double>(idx[a]) + 0.5 + offs[s][a]) * ax.step();
          }
          vm.apply(local.data(), value);
          bool ok = true;
          for (std::size_t a = 0; a < 4; ++a) {
            if (!GridSpec::contains(ig.axes[a], value[a])) {
              ok = false;  // cannot happen: the grid covers the affine bbox
              break;
            }
            vi[a] = GridSpec::nearest(ig.axes[a], value[a]);
          }
          if (ok) hits.push_back(ig.linear_index(vi));
        }
        for (std::size_t a = d; a-- > 0;) {
          if (++idx[a] < grid.axes[a].cells) break;
          idx[a] = 0;
        }
      }
      std::lock_guard<std::mutex> lock(merge);
      for (std::uint64_t h : hits) img.bits.set(h);
    });

    const VoxelSet imgC = h_combination(dilate_chebyshev(img, 1));

    // Keep the candidate cells whose center value lands inside the combined
    // image.
    std::vector<std::uint8_t> keep(ncells, 0);
    parallel_for(0, ncells, p.threads, [&](std::size_t clo, std::size_t chi) {
      std::vector<std::uint32_t> idx = grid.multi_index(clo);
      std::vector<double> local(d);
      std::vector<std::uint32_t> vi(4);
      double value[4];
      for (std::uint64_t lin = clo; lin < chi; ++lin) {
        if (alive.get(lin)) {
          for (std::size_t a = 0; a < d; ++a) {
            local[a] = grid.axes[a].center(idx[a]);
          }
          vm.apply(local.data(), value);
          bool ok = true;
          for (std::size_t a = 0; a < 4; ++a) {
            if (!GridSpec::contains(ig.axes[a], value[a])) {
              ok = false;
              break;
            }
            vi[a] = GridSpec::nearest(ig.axes[a], value[a]);
          }
          if (ok && imgC.bits.get(ig.linear_index(vi))) keep[lin] = 1;
        }
        for (std::size_t a = d; a-- > 0;) {
          if (++idx[a] < grid.axes[a].cells) break;
          idx[a] = 0;
        }
      }
    });
    for (std::uint64_t lin = 0; lin < ncells; ++lin) {
      if (!keep[lin]) alive.reset(lin);
    }
  }

  VoxelSet out(frame, grid);
  out.bits = alive;
  return out;
}

// ---------------------------------------------------------------------------
// Conjugate sets
// ---------------------------------------------------------------------------
VoxelSet conjugate_set(const std::vector<HPoint>& samples, const Frame& hframe,
                       const GridSpec& hgrid, double eps, unsigned threads) {
  if (!(eps >= 0.0)) {
    throw std::invalid_argument("conjugate_set: eps must be >= 0");
  }
  for (const HPoint& x : samples) {
    if (x.size() != hframe.ambient_n) {
      throw std::invalid_argument("conjugate_set: sample dimension mismatch");
    }
  }
  const std::uint64_t n = hgrid.size();
  std::vector<std::uint8_t> marked(n, 0);
  const double eps_sq = eps * eps;
  parallel_for(0, n, threads, [&](std::size_t lo, std::size_t hi) {
    std::vector<std::uint32_t> idx = hgrid.multi_index(lo);
    const std::size_t d = hgrid.dim();
    std::vector<double> local(d);
    for (std::uint64_t lin = lo; lin < hi; ++lin) {
      for (std::size_t a = 0; a < d; ++a) local[a] = hgrid.axes[a].center(idx[a]);
      const HPoint h = unflatten(hframe.to_ambient(local));
      bool keep = true;
      for (const HPoint& x : samples) {
        const Quaternion q = pairing(h, x);
        const double dw = q.w - 1.0;
        if (dw * dw + q.x * q.x + q.y * q.y + q.z * q.z <= eps_sq) {
          keep = false;
          break;
        }
      }
      marked[lin] = keep ? 1 : 0;
      for (std::size_t a = d; a-- > 0;) {
        if (++idx[a] < hgrid.axes[a].cells) break;
        idx[a] = 0;
      }
    }
  });
  VoxelSet out(hframe, hgrid);
  for (std::uint64_t lin = 0; lin < n; ++lin) {
    if (marked[lin]) out.bits.set(lin);
  }
  return out;
}

namespace {

// Uniform 4D spatial hash for nearest-sample queries.
class SampleHash4 {
 public:
  SampleHash4(const std::vector<double>& pts /*4 per sample*/, double bucket)
      : pts_(pts), bucket_(bucket) {
    base_[0] = base_[1] = base_[2] = base_[3] =
        std::numeric_limits<double>::infinity();
    const std::size_t count = pts.size() / 4;
    for (std::size_t i = 0; i < count; ++i) {
      for (int a = 0; a < 4; ++a) {
        base_[a] = std::min(base_[a], pts[4 * i + a]);
      }
    }
    for (std::size_t i = 0; i < count; ++i) {
      map_[key_of(&pts[4 * i])].push_back(static_cast<std::uint32_t>(i));
    }
  }

  // True if some sample lies within radius of q AND passes `confirm`.
  template <typename Confirm>
  bool any_within(const double* q, double radius, Confirm&& confirm) const {
    const double r_sq = radius * radius;
    std::int64_t cell[4];
    for (int a = 0; a < 4; ++a) {
      cell[a] = static_cast<std::int64_t>(
          std::floor((q[a] - base_[a]) / bucket_));
    }
    std::int64_t off[4];
    for (off[0] = -1; off[0] <= 1; ++off[0])
      for (off[1] = -1; off[1] <= 1; ++off[1])
        for (off[2] = -1; off[2] <= 1; ++off[2])
          for (off[3] = -1; off[3] <= 1; ++off[3]) {
            const auto it = map_.find(pack(cell[0] + off[0], cell[1] + off[1],
                                           cell[2] + off[2], cell[3] + off[3]));
            if (it == map_.end()) continue;
            for (const std::uint32_t i : it->second) {
              const double* x = &pts_[4 * i];
              double s = 0.0;
              for (int a = 0; a < 4; ++a) {
                const double dd = x[a] - q[a];
                s += dd * dd;
              }
              if (s <= r_sq && confirm(x)) return true;
            }
          }
    return false;
  }

 private:
  static std::uint64_t pack(std::int64_t a, std::int64_t b, std::int64_t c,
                            std::int64_t d) {
    const std::uint64_t m = 0xFFFF;
    return ((static_cast<std::uint64_t>(a + 32768) & m) << 48) |
           ((static_cast<std::uint64_t>(b + 32768) & m) << 32) |
           ((static_cast<std::uint64_t>(c + 32768) & m) << 16) |
           (static_cast<std::uint64_t>(d + 32768) & m);
  }
  std::uint64_t key_of(const double* p) const {
    std::int64_t k[4];
    for (int a = 0; a < 4; ++a) {
      k[a] = static_cast<std::int64_t>(std::floor((p[a] - base_[a]) / bucket_));
    }
    return pack(k[0], k[1], k[2], k[3]);
  }

  const std::vector<double>& pts_;
  double bucket_;
  double base_[4];
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> map_;
};

}  // namespace

VoxelSet conjugate_set_n1(const VoxelSet& e, const GridSpec& hgrid, double eps,
                          unsigned threads) {
  if (e.frame.ambient_n != 1 || e.frame.local_dim() != 4) {
    throw std::invalid_argument("conjugate_set_n1: input must be a 4D H^1 set");
  }
  if (!(eps >= 0.0 && eps < 1.0)) {
    throw std::invalid_argument("conjugate_set_n1: eps must lie in [0, 1)");
  }
  const Frame dual_frame = Frame::canonical(1, {0, 1, 2, 3});
  VoxelSet out(dual_frame, hgrid);
  const std::uint64_t n = hgrid.size();

  // Collect sample points (ambient centers of set cells).
  const std::vector<std::uint64_t> cells = e.set_cells();
  if (cells.empty()) {
    out.bits.invert();  // empty set: every h is conjugate to it
    return out;
  }
  std::vector<double> pts;
  pts.reserve(cells.size() * 4);
  double max_norm = 0.0, extent = 1e-9;
  for (const std::uint64_t lin : cells) {
    const std::vector<double> amb = e.center_ambient(lin);
    pts.insert(pts.end(), amb.begin(), amb.end());
    max_norm = std::max(max_norm, std::sqrt(norm4_sq(amb.data())));
  }
  for (int a = 0; a < 4; ++a) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      lo = std::min(lo, pts[4 * i + a]);
      hi = std::max(hi, pts[4 * i + a]);
    }
    extent = std::max(extent, hi - lo);
  }

  // Largest query radius that can ever hit: r = eps/|h| with |h^{-1}| within
  // max_norm + r, so r <= eps * max_norm / (1 - eps).
  const double r_max = eps > 0.0 ? eps * max_norm / (1.0 - eps) : 0.0;
  const double bucket =
      std::max({r_max * 1.001 + 1e-12, extent / 4000.0, 1e-9});
  const SampleHash4 hash(pts, bucket);
  const double eps_sq = eps * eps;

  std::vector<std::uint8_t> marked(n, 0);
  parallel_for(0, n, threads, [&](std::size_t lo, std::size_t hi) {
    std::vector<std::uint32_t> idx = hgrid.multi_index(lo);
    double h[4];
    for (std::uint64_t lin = lo; lin < hi; ++lin) {
      for (std::size_t a = 0; a < 4; ++a) h[a] = hgrid.axes[a].center(idx[a]);
      const double hn_sq = norm4_sq(h);
      bool keep = true;
      if (hn_sq > 1e-24) {
        // q = h^{-1} = conj(h)/|h|^2; |h*x - 1| = |h| * |x - q|.
        const double inv = 1.0 / hn_sq;
        const double q[4] = {h[0] * inv, -h[1] * inv, -h[2] * inv, -h[3] * inv};
        const double r = eps / std::sqrt(hn_sq);
        const double r_eff = r * (1.0 + 1e-9) + 1e-12;
        const double qn = std::sqrt(norm4_sq(q));
        if (qn <= max_norm + r_eff) {
          const Quaternion hq(h[0], h[1], h[2], h[3]);
          keep = !hash.any_within(q, r_eff, [&](const double* x) {
            // Confirm with the direct strictness test.
            const Quaternion prod = hq * Quaternion(x[0], x[1], x[2], x[3]);
            const double dw = prod.w - 1.0;
            return dw * dw + prod.x * prod.x + prod.y * prod.y +
                       prod.z * prod.z <=
                   eps_sq;
          });
        }
      }
      marked[lin] = keep ? 1 : 0;
      for (std::size_t a = 4; a-- > 0;) {
        if (++idx[a] < hgrid.axes[a].cells) break;
        idx[a] = 0;
      }
    }
  });
  for (std::uint64_t lin = 0; lin < n; ++lin) {
    if (marked[lin]) out.bits.set(lin);
  }
  return out;
}

double conjugate_default_eps(const GridSpec& grid, double set_radius) {
  return std::max(1e-9, grid.cell_diagonal() * set_radius);
}

VoxelSet hull_via_conjugate_n1(const VoxelSet& e, double eps,
                               std::uint32_t dual_cells,
                               ConjugateHullInfo* info, unsigned threads) {
  if (e.cell_count() == 0) {
    throw std::invalid_argument("hull_via_conjugate_n1: empty input set");
  }
  if (dual_cells < 3) {
    throw std::invalid_argument("hull_via_conjugate_n1: dual window too coarse");
  }
  double radius = 0.0;
  for (const std::uint64_t lin : e.set_cells()) {
    radius = std::max(radius, std::sqrt(norm4_sq(e.center_ambient(lin).data())));
  }

  // Dual window sized from the nearest boundary sample: the origin component
  // of the conjugate set lives within ~(1 - eps)/min|x| over the set's
  // boundary.
  const VoxelSet bnd = boundary_shell(e);
  double min_bnd = std::numeric_limits<double>::infinity();
  for (const std::uint64_t lin : bnd.set_cells()) {
    min_bnd = std::min(min_bnd,
                       std::sqrt(norm4_sq(e.center_ambient(lin).data())));
  }
  if (!(min_bnd > 1e-9)) {
    throw WindowError(
        "hull_via_conjugate_n1: boundary samples reach the origin; dual "
        "window cannot be sized");
  }

  // The strictness margin and the window are chosen jointly.  A dual cell h
  // is judged against point samples spaced by the input grid, so any cell
  // with |h| * (half cell diagonal) > eps can carry a spurious mark even
  // when h^{-1} lies deep inside the set; those marks bridge the origin
  // component to the window boundary and, worse, erode the interior on the
  // way back.  eps must therefore dominate (window corner norm) * (half
  // diagonal), while the window only needs to hold the origin component,
  // whose norm reach is about (1 - eps)/min_bnd.  Solving the two coupled
  // constraints with 10% / 25% headroom gives the fixed point below.  The
  // double conjugation itself is exact for every eps in (0, 1), so raising
  // eps costs only the (already present) discretization error.
  const double half_diag = 0.5 * e.grid.cell_diagonal();
  const bool auto_eps = eps <= 0.0;
  if (auto_eps) {
    const double gamma = 2.75 * half_diag / min_bnd;
    eps = std::max(conjugate_default_eps(e.grid, radius),
                   gamma / (1.0 + gamma));
    eps = std::min(eps, 0.95);
  }
  if (eps >= 1.0) {
    throw std::invalid_argument(
        "hull_via_conjugate_n1: degenerate — strictness margin >= 1 removes "
        "the origin from the conjugate set");
  }

  const std::vector<double> zero4(4, 0.0);
  double W = std::min(1.25 * (1.0 - eps) / min_bnd, 1e3);
  for (int attempt = 0; attempt < 3; ++attempt, W *= 1.6) {
    if (auto_eps) {
      // Keep the aliasing floor valid for the (possibly enlarged) window.
      eps = std::min(0.95, std::max(eps, 1.1 * (2.0 * W) * half_diag));
    }
    const GridSpec hg = make_cube_grid(4, -W, W, dual_cells);
    const VoxelSet dual = conjugate_set_n1(e, hg, eps, threads);
    const auto oc = dual.cell_of_local(zero4);
    if (!oc || !dual.bits.get(*oc)) {
      throw std::runtime_error(
          "hull_via_conjugate_n1: degenerate — origin not in the conjugate "
          "set");
    }
    const VoxelSet comp = component_containing(dual, *oc, Adjacency::kFace);
    if (comp.touches_window_boundary()) continue;  // leaked: enlarge and retry
    if (info) {
      info->eps = eps;
      info->dual_radius = W;
      info->dual_cells = dual_cells;
      info->dual_component_cells = comp.cell_count();
    }
    return conjugate_set_n1(comp, e.grid, eps, threads);
  }
  throw WindowError(
      "hull_via_conjugate_n1: conjugate origin component reaches the dual "
      "window boundary after enlarging retries");
}

// ---------------------------------------------------------------------------
// Section surveys
// ---------------------------------------------------------------------------
SectionSurvey section_survey(const SceneSet& scene,
                             const std::vector<HLine>& lines,
                             std::uint32_t section_cells, HomologyField field,
                             unsigned threads) {
  SectionSurvey out;
  out.sections.resize(lines.size());
  parallel_for(0, lines.size(), threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      SectionRecord rec;
      rec.line = lines[i];
      const GridSpec win = section_window(scene, lines[i], section_cells);
      const VoxelSet sec = line_section(scene, lines[i], win, 1);
      rec.cells = sec.cell_count();
      rec.empty = rec.cells == 0;
      if (!rec.empty) rec.betti = betti_numbers(sec, field);
      out.sections[i] = std::move(rec);
    }
  });
  for (const SectionRecord& rec : out.sections) {
    if (rec.empty) {
      ++out.empty_count;
      continue;
    }
    ++out.nonempty_count;
    const auto& b = rec.betti.b;
    if (b.size() > 3 && b[3] != 0) ++out.b3_failures;
    bool acyclic = !b.empty() && b[0] == 1;
    for (std::size_t k = 1; k < b.size() && acyclic; ++k) {
      if (b[k] != 0) acyclic = false;
    }
    if (!acyclic) ++out.acyclic_failures;
  }
  return out;
}

SectionSurvey quasiconvex_check(const SceneSet& scene,
                                const std::vector<HLine>& lines,
                                std::uint32_t section_cells,
                                HomologyField field, unsigned threads) {
  return section_survey(scene, lines, section_cells, field, threads);
}

SectionSurvey strong_convexity_evidence(const SceneSet& scene,
                                        const std::vector<HLine>& lines,
                                        std::uint32_t section_cells,
                                        HomologyField field, unsigned threads) {
  return section_survey(scene, lines, section_cells, field, threads);
}

std::vector<HLine> sample_scene_lines(const VoxelSet& raster, std::size_t count,
                                      std::uint64_t seed) {
  const std::vector<std::uint64_t> cells = raster.set_cells();
  if (cells.empty()) {
    throw std::invalid_argument("sample_scene_lines: raster is empty");
  }
  const std::size_t n = raster.frame.ambient_n;
  const DirectionSample dirs =
      DirectionSample::unit_sphere(n, count, derive_seed(seed, 0x11DULL));
  std::uint64_t st = derive_seed(seed, 0xBA5EULL);
  double offset = u01(st);
  constexpr double kInvPhi = 0.6180339887498949;

  std::vector<HLine> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    double u = offset + static_cast<double>(i + 1) * kInvPhi;
    u -= std::floor(u);
    const std::size_t pick = std::min<std::size_t>(
        cells.size() - 1, static_cast<std::size_t>(u * cells.size()));
    out.push_back(HLine{unflatten(raster.center_ambient(cells[pick])),
                        dirs.items[i]});
  }
  return out;
}

// ---------------------------------------------------------------------------
// h_extremal_points
// ---------------------------------------------------------------------------
VoxelSet h_extremal_points(const SceneSet& scene, const VoxelSet& boundary,
                           const DirectionSample& dirs, double r,
                           const ExtremalParams& p) {
  const double diag = boundary.grid.cell_diagonal();
  if (!(r >= 2.0 * diag)) {
    throw std::invalid_argument(
        "h_extremal_points: disk radius below grid resolution (need r >= 2 "
        "cell diagonals)");
  }
  if (dirs.items.empty()) {
    throw std::invalid_argument("h_extremal_points: needs directions");
  }
  if (boundary.frame.ambient_n != scene.ambient_n) {
    throw std::invalid_argument("h_extremal_points: frame/scene mismatch");
  }
  const DirectionSample tsample = DirectionSample::unit_sphere(
      1, p.shell_points, derive_seed(dirs.seed, 0xE1ULL));

  const std::vector<std::uint64_t> bcells = boundary.set_cells();
  std::vector<std::uint8_t> nonextremal(bcells.size(), 0);
  parallel_for(0, bcells.size(), p.threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const HPoint x = unflatten(boundary.center_ambient(bcells[i]));
      for (const HPoint& d : dirs.items) {
        bool inside_all = true;
        // Shells of decreasing |t|: boundary-adjacent escapes fail fast.
        for (const double rho : p.shell_radii) {
          for (const HPoint& u : tsample.items) {
            const Quaternion t = u[0] * (rho * r);
            if (!scene_contains(scene, flatten(line_eval(HLine{x, d}, t)))) {
              inside_all = false;
              break;
            }
          }
          if (!inside_all) break;
        }
        if (inside_all) {
          nonextremal[i] = 1;
          break;
        }
      }
    }
  });

  VoxelSet out = boundary;
  for (std::size_t i = 0; i < bcells.size(); ++i) {
    if (nonextremal[i]) out.bits.reset(bcells[i]);
  }
  return out;
}

}  // namespace hxconv
