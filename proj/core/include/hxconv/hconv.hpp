#pragma once
// Convexity-style operators for discretized quaternionic sets:
//   * h_combination      — a set plus the bounded components of its complement
//                          (computed on a 4D window by boundary flood fill);
//   * hcomb_n            — the same notion in H^n, decided per candidate cell
//                          through line sections;
//   * h_hull_sampled     — intersection of preimages of combined projection
//                          images over a sampled functional family;
//   * conjugate_set      — the dual set {h : <h,x> != 1 for all x in E},
//                          certified up to a strictness margin eps;
//   * hull_via_conjugate_n1 — the double-conjugate hull construction in H^1;
//   * section_survey / quasiconvex_check / strong_convexity_evidence —
//                          per-line Betti evidence for convexity notions;
//   * h_extremal_points  — boundary cells admitting no interior line-disk.
//
// Every sampled family (directions, functionals, base points) is produced by
// a deterministic seeded sequence, and prefixes agree across counts, so
// monotonicity statements ("adding directions can only add cells") are
// meaningful for nested samples.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hxconv/cubical.hpp"
#include "hxconv/quat.hpp"
#include "hxconv/raster.hpp"
#include "hxconv/scene.hpp"
#include "hxconv/voxel.hpp"

namespace hxconv {

// Thrown when a window is too small to certify a boundedness claim, e.g.
// when the input set touches the window boundary ("unbounded in window").
class WindowError : public std::runtime_error {
 public:
  explicit WindowError(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Deterministic direction / functional samples.
// ---------------------------------------------------------------------------
struct DirectionSample {
  std::uint64_t seed = 0;
  std::vector<HPoint> items;  // unit vectors of H^n (|.| = 1 in R^{4n})

  std::size_t count() const { return items.size(); }

  // `count` unit directions in H^n from an additive low-discrepancy sequence
  // on [0,1)^{4n} (seeded offsets), mapped through the inverse normal CDF and
  // normalized.  For fixed (n, seed) the first k items are identical for
  // every count >= k (prefix property).
  static DirectionSample unit_sphere(std::size_t n, std::size_t count,
                                     std::uint64_t seed);
};

// ---------------------------------------------------------------------------
// h-combination on a 4D (or any-dimensional) voxel window: the set together
// with every face-connected component of its complement that does not reach
// the window boundary.  Throws WindowError if the set itself touches the
// window boundary (boundedness of complement components cannot be certified).
// Idempotent; result always contains the input.
// ---------------------------------------------------------------------------
VoxelSet h_combination(const VoxelSet& e);

// ---------------------------------------------------------------------------
// h-combination through line sections (the H^n notion).
//
// A candidate cell x is marked iff for some sampled direction d the cell of
// t = 0 belongs to the h-combination of the line section
// {t : x + t*d in scene} on a t-window certified to contain the whole
// section (derived from the scene's bound).  Cells of the rasterized scene
// are always marked (t = 0 itself lies in the section).  Monotone
// nondecreasing in the direction count.
//
// For ambient_n == 1 a line's section is an affine copy of the whole set,
// so the operator reduces exactly to h_combination of the raster; this path
// is taken automatically.
//
// `candidates` selects which cells of the window are decided (bits outside
// it are never marked).  Use hcombn_candidates() to build the standard
// sampled candidate family for large windows.
// ---------------------------------------------------------------------------
struct HCombNParams {
  std::uint32_t section_cells = 21;  // per-axis cells of the 4D t-sections
  unsigned threads = 1;
};

VoxelSet hcomb_n(const SceneSet& scene, const VoxelSet& candidates,
                 const DirectionSample& dirs, const HCombNParams& p = {});

// Standard candidate family on a window: the rasterized scene itself, a
// strided sample of its 1-cell dilation ring (at most ring_samples), and
// stratified far-field probes (far_samples cells drawn seeded from the rest
// of the window).  The scene raster is returned alongside for reuse.
struct CandidateFamily {
  VoxelSet base;        // rasterized scene
  VoxelSet candidates;  // base + ring sample + far probes
};
CandidateFamily hcombn_candidates(const SceneSet& scene, const Frame& frame,
                                  const GridSpec& grid,
                                  std::size_t ring_samples,
                                  std::size_t far_samples, std::uint64_t seed,
                                  unsigned threads = 1);

// ---------------------------------------------------------------------------
// Sampled h-hull: a candidate cell x is kept iff for EVERY functional f in
// `funcs` the value <x, f> falls inside the h-combination of the projected
// image of the scene under f.  Monotone nonincreasing in the functional
// count; always contains the rasterized scene (cell centers are included in
// the image sampling).
//
// Functionals are normalized to unit length before use.  Every functional
// gets its own value-space grid fitted around the exact image of the window
// (target cell size = image_target_cell_frac × the window's smallest cell
// step, per-axis counts clamped to [image_cells_min, image_cells_max] and
// the global cell cap), so preimage constraints resolve at roughly half a
// window cell.
// ---------------------------------------------------------------------------
// Fit a 4D value-space grid around a bounding box at roughly `target_cell`
// resolution with a 2-cell margin; per-axis counts clamped to
// [min_cells, max_cells], then scaled down uniformly if the total would
// exceed the global cell cap.
GridSpec fit_value_grid(const std::vector<std::pair<double, double>>& bbox,
                        double target_cell, std::uint32_t min_cells,
                        std::uint32_t max_cells);

struct HullParams {
  double image_target_cell_frac = 0.5;
  std::uint32_t image_cells_min = 5;
  std::uint32_t image_cells_max = 129;
  // Scene sampling density per window cell axis when building images:
  // 0 = auto (2 for windows of dimension <= 4, 1 for 5D windows).  The cell
  // center is always included.
  unsigned supersample = 0;
  unsigned threads = 1;
};

VoxelSet h_hull_sampled(const SceneSet& scene, const Frame& frame,
                        const GridSpec& grid,
                        const std::vector<Functional>& funcs,
                        const HullParams& p = {});

// ---------------------------------------------------------------------------
// Conjugate set.  A dual cell h is marked iff
//     min over sample points x of |<h, x> - 1|  >  eps.
// The generic form takes explicit sample points (e.g. cell centers of a
// rasterized set) and a dual frame+grid of dimension <= 5.
// ---------------------------------------------------------------------------
VoxelSet conjugate_set(const std::vector<HPoint>& samples, const Frame& hframe,
                       const GridSpec& hgrid, double eps, unsigned threads = 1);

// Fast H^1 path: samples are the set-cell centers of a 4D voxel set, the
// dual window is the canonical H^1 frame over hgrid.  Uses the identity
// |h*x - 1| = |h| * |x - h^{-1}| to turn each dual cell into one nearest-
// neighbor query against a spatial hash of the samples.  Exact same verdict
// as conjugate_set.
VoxelSet conjugate_set_n1(const VoxelSet& e, const GridSpec& hgrid, double eps,
                          unsigned threads = 1);

// Default strictness margin for a window: cell diagonal × set radius (the
// radius of the smallest origin-centered ball holding the sample points).
double conjugate_default_eps(const GridSpec& grid, double set_radius);

// ---------------------------------------------------------------------------
// Double-conjugate hull in H^1: compute the conjugate set of e on an
// automatically sized dual window, keep the face-connected component of the
// origin, and conjugate that component back onto e's own window with the
// SAME eps.  The result agrees with h_combination(e) at grid tolerance for
// well-resolved inputs (the eps shifts of the two passes cancel).
//
// eps <= 0 picks conjugate_default_eps of e's grid and radius.  Throws
// std::invalid_argument for eps >= 1 (the origin would not belong to the
// conjugate set) and WindowError if the origin component still reaches the
// dual window boundary after enlarging retries.
// ---------------------------------------------------------------------------
struct ConjugateHullInfo {
  double eps = 0.0;
  double dual_radius = 0.0;      // half-width of the dual window used
  std::uint32_t dual_cells = 0;  // per-axis cells of the dual window
  std::uint64_t dual_component_cells = 0;
};

VoxelSet hull_via_conjugate_n1(const VoxelSet& e, double eps = 0.0,
                               std::uint32_t dual_cells = 31,
                               ConjugateHullInfo* info = nullptr,
                               unsigned threads = 1);

// ---------------------------------------------------------------------------
// Per-line section evidence.
// ---------------------------------------------------------------------------
struct SectionRecord {
  HLine line;
  bool empty = false;
  std::uint64_t cells = 0;   // set cells of the section raster
  BettiVector betti;         // valid when !empty
};

struct SectionSurvey {
  std::vector<SectionRecord> sections;
  std::size_t empty_count = 0;
  std::size_t nonempty_count = 0;
  std::size_t b3_failures = 0;       // nonempty sections with b3 != 0
  std::size_t acyclic_failures = 0;  // nonempty sections not acyclic

  bool quasiconvex_pass() const {
    return nonempty_count > 0 && b3_failures == 0;
  }
  bool strong_convexity_pass() const {
    return nonempty_count > 0 && acyclic_failures == 0;
  }
};

// Rasterize and measure the section of the scene along every line; windows
// come from section_window (the scene must carry a bound certificate).
SectionSurvey section_survey(const SceneSet& scene,
                             const std::vector<HLine>& lines,
                             std::uint32_t section_cells,
                             HomologyField field = HomologyField::kMod2,
                             unsigned threads = 1);

// Verdict wrappers.  quasiconvex: every nonempty section has b3 = 0.
// strong convexity evidence: every nonempty section is acyclic.
SectionSurvey quasiconvex_check(const SceneSet& scene,
                                const std::vector<HLine>& lines,
                                std::uint32_t section_cells,
                                HomologyField field = HomologyField::kMod2,
                                unsigned threads = 1);
SectionSurvey strong_convexity_evidence(const SceneSet& scene,
                                        const std::vector<HLine>& lines,
                                        std::uint32_t section_cells,
                                        HomologyField field = HomologyField::kMod2,
                                        unsigned threads = 1);

// Lines through seeded base cells of a rasterized set, paired with sampled
// unit directions (one direction per base).  Base cells are drawn from the
// set cells by a deterministic seeded stride; throws std::invalid_argument
// if the raster is empty.
std::vector<HLine> sample_scene_lines(const VoxelSet& raster, std::size_t count,
                                      std::uint64_t seed);

// ---------------------------------------------------------------------------
// h-extremal points.  `boundary` holds the boundary cells of the rasterized
// scene (set cells with a face neighbor outside the set or outside the
// window).  A boundary cell x is NON-extremal iff for some sampled direction
// d the full parameter disk {x + t*d : |t| < r} lies inside the scene —
// tested on deterministic t-shells of decreasing radius (openness makes
// centered disks sufficient).  Result = boundary minus non-extremal cells.
//
// Throws std::invalid_argument if r < 2 × the grid's cell diagonal (the
// disk would be sub-resolution).
// ---------------------------------------------------------------------------
struct ExtremalParams {
  std::size_t shell_points = 20;  // unit t-samples per shell
  std::vector<double> shell_radii = {0.95, 0.7, 0.45, 0.2};  // fractions of r
  unsigned threads = 1;
};

VoxelSet h_extremal_points(const SceneSet& scene, const VoxelSet& boundary,
                           const DirectionSample& dirs, double r,
                           const ExtremalParams& p = {});

}  // namespace hxconv
