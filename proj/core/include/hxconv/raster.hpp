#pragma once
// Discretization of scenes: rasterize a scene onto a frame's window, cut
// line sections, and push discretized sets through pairing functionals into
// image windows.  All loops evaluate a compiled restriction of the scene,
// so the per-cell cost is a handful of flops per leaf.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hxconv/scene.hpp"

namespace hxconv {

// Thrown when points escape a fixed target window; carries the bounds the
// window would have needed.
class BoundsError : public std::runtime_error {
 public:
  BoundsError(const std::string& what, std::vector<std::pair<double, double>> req)
      : std::runtime_error(what), required(std::move(req)) {}
  std::vector<std::pair<double, double>> required;  // per-axis [lo, hi]
};

// Fill a (frame, grid) window: a cell is set iff the scene contains the
// ambient image of the cell center.
VoxelSet rasterize(const SceneSet& scene, const Frame& frame, const GridSpec& grid,
                   unsigned threads = 1);

// Section of the scene by a line, discretized over the quaternionic
// parameter t: cell (tw, tx, ty, tz) is set iff base + t * dir_hat lies in
// the scene.  (The line's direction is normalized inside the frame; that
// reparametrization rescales t and changes no topology.)
VoxelSet line_section(const SceneSet& scene, const HLine& line,
                      const GridSpec& tgrid, unsigned threads = 1);

// Window in t-space guaranteed to contain the whole section, derived from
// the scene's bound certificate (each axis spans the certificate ball plus
// `pad_frac` slack).  Throws std::invalid_argument if the scene has no
// bound.
GridSpec section_window(const SceneSet& scene, const HLine& line,
                        std::uint32_t cells_per_axis, double pad_frac = 0.05);

// The pairing x -> <x, h> = sum_k x_k h_k as a real-linear map
// R^{4n} -> R^4 (rows: w, x, y, z of the value).
Affine pairing_affine(const Functional& h);

// Bounding box in value space of {<x, h> : x in scene within the window},
// scanned at supersample^d points per cell.  Returns nullopt if the window
// holds no scene points.
std::optional<std::vector<std::pair<double, double>>> image_bbox(
    const SceneSet& scene, const Frame& frame, const GridSpec& grid,
    const Functional& h, unsigned supersample = 1, unsigned threads = 1);

// Build a 4D value-space grid containing `bbox` with roughly `target_cell`
// resolution; cells per axis clamped to [5, 129] (and the global cell cap).
// `margin_cells` widens every side.
GridSpec fit_image_grid(const std::vector<std::pair<double, double>>& bbox,
                        double target_cell, double margin_cells = 2.0);

// Rasterize the image {<x, h>} of the scene (window-restricted, scanned at
// supersample^d points per cell) onto img_grid, then thicken by one cell
// (Chebyshev) to heal sampling pinholes.  The image frame is the canonical
// H^1 value space.  Throws BoundsError if any image point escapes img_grid.
VoxelSet project_scene_image(const SceneSet& scene, const Frame& frame,
                             const GridSpec& grid, const Functional& h,
                             const GridSpec& img_grid, unsigned supersample = 2,
                             unsigned threads = 1);

// Local-coordinate points of all set cell centers.
std::vector<std::vector<double>> cell_center_points(const VoxelSet& vox);

}  // namespace hxconv
