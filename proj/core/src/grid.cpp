#include "hxconv/grid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hxconv {

std::uint64_t GridSpec::size() const {
  std::uint64_t total = 1;
  for (const auto& a : axes) total *= a.cells;
  return total;
}

void GridSpec::validate() const {
  if (axes.empty()) throw std::invalid_argument("GridSpec: no axes");
  std::uint64_t total = 1;
  for (const auto& a : axes) {
    if (!(a.lo < a.hi) || !std::isfinite(a.lo) || !std::isfinite(a.hi)) {
      throw std::invalid_argument("GridSpec: axis needs finite lo < hi");
    }
    if (a.cells < 1) throw std::invalid_argument("GridSpec: axis needs cells >= 1");
    if (total > kMaxGridCells / a.cells) {
      throw std::invalid_argument("GridSpec: total cell count exceeds cap");
    }
    total *= a.cells;
  }
}

std::uint32_t GridSpec::nearest(const GridAxis& axis, double x) {
  const double f = (x - axis.lo) / axis.step();
  if (f <= 0.0) return 0;
  const std::uint32_t i = static_cast<std::uint32_t>(f);
  return i >= axis.cells ? axis.cells - 1 : i;
}

bool GridSpec::contains(const GridAxis& axis, double x) {
  return x >= axis.lo && x < axis.hi;
}

std::vector<std::uint64_t> GridSpec::strides() const {
  std::vector<std::uint64_t> s(axes.size(), 1);
  for (std::size_t a = axes.size(); a-- > 1;) {
    s[a - 1] = s[a] * axes[a].cells;
  }
  return s;
}

std::uint64_t GridSpec::linear_index(const std::vector<std::uint32_t>& idx) const {
  std::uint64_t lin = 0;
  for (std::size_t a = 0; a < axes.size(); ++a) {
    lin = lin * axes[a].cells + idx[a];
  }
  return lin;
}

std::vector<std::uint32_t> GridSpec::multi_index(std::uint64_t linear) const {
  std::vector<std::uint32_t> idx(axes.size(), 0);
  for (std::size_t a = axes.size(); a-- > 0;) {
    idx[a] = static_cast<std::uint32_t>(linear % axes[a].cells);
    linear /= axes[a].cells;
  }
  return idx;
}

std::vector<double> GridSpec::cell_center(
    const std::vector<std::uint32_t>& idx) const {
  std::vector<double> c(axes.size());
  for (std::size_t a = 0; a < axes.size(); ++a) c[a] = axes[a].center(idx[a]);
  return c;
}

double GridSpec::min_step() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& a : axes) m = std::min(m, a.step());
  return m;
}

double GridSpec::max_step() const {
  double m = 0.0;
  for (const auto& a : axes) m = std::max(m, a.step());
  return m;
}

double GridSpec::cell_diagonal() const {
  double acc = 0.0;
  for (const auto& a : axes) acc += a.step() * a.step();
  return std::sqrt(acc);
}

bool GridSpec::same_shape(const GridSpec& other) const {
  if (axes.size() != other.axes.size()) return false;
  for (std::size_t a = 0; a < axes.size(); ++a) {
    if (axes[a].cells != other.axes[a].cells) return false;
  }
  return true;
}

GridSpec make_cube_grid(std::size_t d, double lo, double hi, std::uint32_t cells) {
  GridSpec g;
  g.axes.assign(d, GridAxis{lo, hi, cells});
  g.validate();
  return g;
}

void Frame::validate() const {
  const std::size_t m = ambient_real_dim();
  if (ambient_n == 0) throw std::invalid_argument("Frame: ambient_n must be >= 1");
  if (origin.size() != m) throw std::invalid_argument("Frame: origin has wrong size");
  if (axes.empty() || axes.size() > m) {
    throw std::invalid_argument("Frame: need between 1 and 4n axes");
  }
  constexpr double tol = 1e-9;
  for (std::size_t a = 0; a < axes.size(); ++a) {
    if (axes[a].size() != m) throw std::invalid_argument("Frame: axis has wrong size");
    for (std::size_t b = a; b < axes.size(); ++b) {
      double dot = 0.0;
      for (std::size_t c = 0; c < m; ++c) dot += axes[a][c] * axes[b][c];
      const double want = (a == b) ? 1.0 : 0.0;
      if (std::abs(dot - want) > tol) {
        throw std::invalid_argument("Frame: axes are not orthonormal");
      }
    }
  }
}

Frame Frame::canonical(std::size_t ambient_n,
                       const std::vector<std::size_t>& coord_idx) {
  Frame f;
  f.ambient_n = ambient_n;
  const std::size_t m = 4 * ambient_n;
  f.origin.assign(m, 0.0);
  for (std::size_t idx : coord_idx) {
    if (idx >= m) throw std::invalid_argument("Frame::canonical: index out of range");
    std::vector<double> axis(m, 0.0);
    axis[idx] = 1.0;
    f.axes.push_back(std::move(axis));
  }
  f.validate();
  return f;
}

Frame Frame::from_line(const HLine& line) {
  const double nrm = hpoint_norm(line.dir);
  if (!(nrm > 0.0) || !std::isfinite(nrm)) {
    throw std::invalid_argument("Frame::from_line: zero or non-finite direction");
  }
  HPoint dir_hat = line.dir;
  for (auto& q : dir_hat) q *= 1.0 / nrm;

  Frame f;
  f.ambient_n = line.base.size();
  f.origin = flatten(line.base);
  f.axes.reserve(4);
  for (std::size_t c = 0; c < 4; ++c) {
    f.axes.push_back(flatten(left_scale(Quaternion::basis(c), dir_hat)));
  }
  f.validate();
  return f;
}

std::vector<double> Frame::to_ambient(const std::vector<double>& local) const {
  if (local.size() != axes.size()) {
    throw std::invalid_argument("Frame::to_ambient: dimension mismatch");
  }
  std::vector<double> out = origin;
  for (std::size_t a = 0; a < axes.size(); ++a) {
    const double t = local[a];
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += t * axes[a][c];
  }
  return out;
}

std::vector<double> Frame::local_coords(const std::vector<double>& ambient) const {
  if (ambient.size() != ambient_real_dim()) {
    throw std::invalid_argument("Frame::local_coords: dimension mismatch");
  }
  std::vector<double> out(axes.size(), 0.0);
  for (std::size_t a = 0; a < axes.size(); ++a) {
    double acc = 0.0;
    for (std::size_t c = 0; c < ambient.size(); ++c) {
      acc += axes[a][c] * (ambient[c] - origin[c]);
    }
    out[a] = acc;
  }
  return out;
}

Affine Frame::affine() const {
  Affine m(ambient_real_dim(), axes.size());
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) m.at(r, c) = axes[c][r];
    m.b[r] = origin[r];
  }
  return m;
}

}  // namespace hxconv
