#include "hxconv/quat.hpp"

#include <cmath>
#include <stdexcept>

namespace hxconv {

Quaternion Quaternion::basis(std::size_t c) {
  switch (c) {
    case 0: return one();
    case 1: return i();
    case 2: return j();
    case 3: return k();
    default: throw std::invalid_argument("Quaternion::basis: index out of range");
  }
}

double Quaternion::norm() const { return std::sqrt(norm_sq()); }

Quaternion Quaternion::inverse() const {
  const double n2 = norm_sq();
  if (n2 <= 0.0 || !std::isfinite(n2)) {
    throw std::domain_error("Quaternion::inverse: zero or non-finite operand");
  }
  return {w / n2, -x / n2, -y / n2, -z / n2};
}

bool Quaternion::is_zero(double tol) const {
  return std::abs(w) <= tol && std::abs(x) <= tol && std::abs(y) <= tol &&
         std::abs(z) <= tol;
}

Quaternion& Quaternion::operator+=(const Quaternion& o) {
  w += o.w;
  x += o.x;
  y += o.y;
  z += o.z;
  return *this;
}

Quaternion& Quaternion::operator-=(const Quaternion& o) {
  w -= o.w;
  x -= o.x;
  y -= o.y;
  z -= o.z;
  return *this;
}

Quaternion& Quaternion::operator*=(const Quaternion& o) {
  *this = (*this) * o;
  return *this;
}

Quaternion& Quaternion::operator*=(double s) {
  w *= s;
  x *= s;
  y *= s;
  z *= s;
  return *this;
}

Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }

Quaternion operator*(Quaternion a, const Quaternion& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

Quaternion operator*(Quaternion a, double s) { return a *= s; }
Quaternion operator*(double s, Quaternion a) { return a *= s; }

bool operator==(const Quaternion& a, const Quaternion& b) {
  return a.w == b.w && a.x == b.x && a.y == b.y && a.z == b.z;
}

bool quat_close(const Quaternion& a, const Quaternion& b, double tol) {
  return std::abs(a.w - b.w) <= tol && std::abs(a.x - b.x) <= tol &&
         std::abs(a.y - b.y) <= tol && std::abs(a.z - b.z) <= tol;
}

namespace {
void require_same_dim(const HPoint& a, const HPoint& b, const char* who) {
  if (a.size() != b.size() || a.empty()) {
    throw std::invalid_argument(std::string(who) +
                                ": dimension mismatch or empty tuple");
  }
}
}  // namespace

HPoint hpoint_add(const HPoint& a, const HPoint& b) {
  require_same_dim(a, b, "hpoint_add");
  HPoint out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] + b[k];
  return out;
}

HPoint hpoint_sub(const HPoint& a, const HPoint& b) {
  require_same_dim(a, b, "hpoint_sub");
  HPoint out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] - b[k];
  return out;
}

HPoint left_scale(const Quaternion& s, const HPoint& x) {
  HPoint out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = s * x[k];
  return out;
}

HPoint right_scale(const HPoint& x, const Quaternion& s) {
  HPoint out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = x[k] * s;
  return out;
}

double hpoint_norm(const HPoint& x) {
  double acc = 0.0;
  for (const auto& q : x) acc += q.norm_sq();
  return std::sqrt(acc);
}

bool hpoint_close(const HPoint& a, const HPoint& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!quat_close(a[k], b[k], tol)) return false;
  }
  return true;
}

Quaternion pairing(const HPoint& x, const HPoint& h) {
  require_same_dim(x, h, "pairing");
  Quaternion acc = Quaternion::zero();
  for (std::size_t k = 0; k < x.size(); ++k) acc += x[k] * h[k];
  return acc;
}

HPoint line_eval(const HLine& line, const Quaternion& t) {
  require_same_dim(line.base, line.dir, "line_eval");
  HPoint out(line.base.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = line.base[k] + t * line.dir[k];
  }
  return out;
}

Functional annihilating_functional(const HPoint& d) {
  if (d.size() < 2) {
    throw std::invalid_argument(
        "annihilating_functional: needs dimension >= 2 (in H^1 a nonzero "
        "direction has no nonzero annihilator)");
  }
  std::size_t pivot = 0;
  double best = -1.0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    const double nk = d[k].norm_sq();
    if (nk > best) {
      best = nk;
      pivot = k;
    }
  }
  if (best <= 0.0) {
    throw std::invalid_argument("annihilating_functional: zero direction");
  }
  Functional h(d.size(), Quaternion::one());
  Quaternion rest = Quaternion::zero();
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (k != pivot) rest += d[k];
  }
  h[pivot] = -(d[pivot].inverse() * rest);
  return h;
}

std::vector<double> flatten(const HPoint& x) {
  std::vector<double> v(4 * x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    v[4 * k + 0] = x[k].w;
    v[4 * k + 1] = x[k].x;
    v[4 * k + 2] = x[k].y;
    v[4 * k + 3] = x[k].z;
  }
  return v;
}

HPoint unflatten(const std::vector<double>& v) {
  if (v.size() % 4 != 0 || v.empty()) {
    throw std::invalid_argument("unflatten: length must be a positive multiple of 4");
  }
  HPoint x(v.size() / 4);
  for (std::size_t k = 0; k < x.size(); ++k) {
    x[k] = Quaternion(v[4 * k + 0], v[4 * k + 1], v[4 * k + 2], v[4 * k + 3]);
  }
  return x;
}

}  // namespace hxconv
