#pragma once
// Quaternion arithmetic and the basic objects of the library: points of
// H^n (n-tuples of quaternions), right-linear pairings, parametrized lines,
// and annihilating functionals for directions.
//
// Conventions fixed here and relied on everywhere else:
//   * the pairing contracts with the variable on the LEFT of the fixed
//     coefficient:  pairing(x, h) = sum_k x_k * h_k;
//   * lines place the parameter on the LEFT of the direction:
//     line_eval(L, t) = base_k + t * dir_k.
// With these two choices the pairing is exactly affine along every line:
//   pairing(base + t*dir, h) = pairing(base, h) + t * pairing(dir, h).

#include <cstddef>
#include <vector>

namespace hxconv {

struct Quaternion {
  double w = 0.0;  // real part
  double x = 0.0;  // i coefficient
  double y = 0.0;  // j coefficient
  double z = 0.0;  // k coefficient

  constexpr Quaternion() = default;
  constexpr Quaternion(double w_, double x_ = 0.0, double y_ = 0.0,
                       double z_ = 0.0)
      : w(w_), x(x_), y(y_), z(z_) {}

  static constexpr Quaternion zero() { return {0.0, 0.0, 0.0, 0.0}; }
  static constexpr Quaternion one() { return {1.0, 0.0, 0.0, 0.0}; }
  static constexpr Quaternion i() { return {0.0, 1.0, 0.0, 0.0}; }
  static constexpr Quaternion j() { return {0.0, 0.0, 1.0, 0.0}; }
  static constexpr Quaternion k() { return {0.0, 0.0, 0.0, 1.0}; }

  // The four basis quaternions 1, i, j, k in component order.
  static Quaternion basis(std::size_t c);

  double norm_sq() const { return w * w + x * x + y * y + z * z; }
  double norm() const;

  Quaternion conjugate() const { return {w, -x, -y, -z}; }

  // Multiplicative inverse; throws std::domain_error on (near-)zero input.
  Quaternion inverse() const;

  bool is_zero(double tol = 0.0) const;

  Quaternion operator-() const { return {-w, -x, -y, -z}; }
  Quaternion& operator+=(const Quaternion& o);
  Quaternion& operator-=(const Quaternion& o);
  Quaternion& operator*=(const Quaternion& o);
  Quaternion& operator*=(double s);
};

Quaternion operator+(Quaternion a, const Quaternion& b);
Quaternion operator-(Quaternion a, const Quaternion& b);
// Hamilton product (i*j = k, j*i = -k).
Quaternion operator*(Quaternion a, const Quaternion& b);
Quaternion operator*(Quaternion a, double s);
Quaternion operator*(double s, Quaternion a);
bool operator==(const Quaternion& a, const Quaternion& b);

// Componentwise closeness within an absolute tolerance.
bool quat_close(const Quaternion& a, const Quaternion& b, double tol);

// ---------------------------------------------------------------------------
// Points of H^n.
// ---------------------------------------------------------------------------
using HPoint = std::vector<Quaternion>;
using Functional = HPoint;  // a functional is a coefficient tuple h in H^n

HPoint hpoint_add(const HPoint& a, const HPoint& b);
HPoint hpoint_sub(const HPoint& a, const HPoint& b);
// Left scalar action: (s*x)_k = s * x_k.
HPoint left_scale(const Quaternion& s, const HPoint& x);
// Right scalar action: (x*s)_k = x_k * s.
HPoint right_scale(const HPoint& x, const Quaternion& s);
// Euclidean norm sqrt(sum |x_k|^2).
double hpoint_norm(const HPoint& x);
bool hpoint_close(const HPoint& a, const HPoint& b, double tol);

// pairing(x, h) = sum_k x_k * h_k (variable on the left).
// Throws std::invalid_argument on dimension mismatch or empty tuples.
Quaternion pairing(const HPoint& x, const HPoint& h);

// ---------------------------------------------------------------------------
// Lines x(t) = base + t * dir with quaternionic parameter t on the left.
// The direction is stored as given (not normalized): the parametrization,
// not just the carrier set, is part of the object.
// ---------------------------------------------------------------------------
struct HLine {
  HPoint base;
  HPoint dir;
};

HPoint line_eval(const HLine& line, const Quaternion& t);

// ---------------------------------------------------------------------------
// Annihilating functional: given a nonzero direction d in H^n with n >= 2,
// produce h != 0 with pairing(d, h) = 0, so the pairing is constant along
// every line with direction d.
//
// Pivot construction: let p = argmax_k |d_k| (first maximum).  Set h_k = 1
// for k != p and h_p = -d_p^{-1} * sum_{k != p} d_k.  Then
//   pairing(d, h) = sum_{k != p} d_k + d_p * h_p = 0
// by associativity.  The result is unique only up to a nonzero right
// scalar multiple when n = 2.
// Throws std::invalid_argument for n < 2 or d == 0.
// ---------------------------------------------------------------------------
Functional annihilating_functional(const HPoint& d);

// ---------------------------------------------------------------------------
// Flattening between H^n and R^{4n}: component order (w, x, y, z) per
// quaternion slot, slots in order.  flatten/unflatten are inverse bijections
// and carry the Euclidean norm across: |x|_{H^n} = |flatten(x)|_{R^{4n}}.
// ---------------------------------------------------------------------------
std::vector<double> flatten(const HPoint& x);
HPoint unflatten(const std::vector<double>& v);

}  // namespace hxconv
