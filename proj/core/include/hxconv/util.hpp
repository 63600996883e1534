#pragma once
// Small shared utilities: deterministic RNG streams, the inverse normal CDF,
// a bounded thread pool helper, and dense affine maps between coordinate
// spaces.  Everything here is deterministic given its inputs.

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace hxconv {

// ---------------------------------------------------------------------------
// Deterministic RNG.
//
// splitmix64 is used as the seeding/stream-splitting primitive: it walks a
// 64-bit counter through a strong avalanche, so distinct (seed, index) pairs
// give independent-looking values and every consumer can derive its own
// stream without sharing mutable state.
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derive a child seed from (seed, index) without mutating either.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed ^ (0x632be59bd9b4e019ULL * (index + 1));
  return splitmix64(s);
}

// Uniform double in [0, 1) from one 64-bit draw (53 mantissa bits).
inline double u01(std::uint64_t& state) {
  return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

// Uniform double in [lo, hi).
inline double uniform_in(std::uint64_t& state, double lo, double hi) {
  return lo + (hi - lo) * u01(state);
}

// ---------------------------------------------------------------------------
// Inverse normal CDF (Acklam's rational approximation, |rel err| < 1.15e-9).
// Used to turn low-discrepancy/uniform draws into Gaussian coordinates for
// direction sampling on spheres.
// ---------------------------------------------------------------------------
inline double inv_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("inv_normal_cdf: p must lie in (0,1)");
  }
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  const double phigh = 1.0 - plow;
  double q, r;
  if (p < plow) {
    q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > phigh) {
    q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  q = p - 0.5;
  r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// ---------------------------------------------------------------------------
// parallel_for: run body(begin..end) split across `threads` workers.
// threads <= 1 runs inline.  Chunks are contiguous index ranges, so callers
// that write disjoint slots need no synchronization.
// ---------------------------------------------------------------------------
inline void parallel_for(std::size_t begin, std::size_t end, unsigned threads,
                         const std::function<void(std::size_t, std::size_t)>& body) {
  if (end <= begin) return;
  const std::size_t total = end - begin;
  if (threads <= 1 || total < 2) {
    body(begin, end);
    return;
  }
  const unsigned nworkers = static_cast<unsigned>(
      std::min<std::size_t>(threads, total));
  std::vector<std::thread> pool;
  pool.reserve(nworkers);
  const std::size_t chunk = (total + nworkers - 1) / nworkers;
  for (unsigned w = 0; w < nworkers; ++w) {
    const std::size_t lo = begin + static_cast<std::size_t>(w) * chunk;
    const std::size_t hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& t : pool) t.join();
}

// ---------------------------------------------------------------------------
// Affine: dense real affine map u -> A*u + b between low-dimensional real
// coordinate spaces (rows x cols, row-major).  Used to restrict scene
// predicates onto frames and lines.
// ---------------------------------------------------------------------------
struct Affine {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> A;  // row-major, rows*cols
  std::vector<double> b;  // rows

  Affine() = default;
  Affine(std::size_t r, std::size_t c)
      : rows(r), cols(c), A(r * c, 0.0), b(r, 0.0) {}

  static Affine identity(std::size_t n) {
    Affine m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.A[i * n + i] = 1.0;
    return m;
  }

  double& at(std::size_t r, std::size_t c) { return A[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return A[r * cols + c]; }

  // out[rows] = A*u + b for u[cols].
  void apply(const double* u, double* out) const {
    for (std::size_t r = 0; r < rows; ++r) {
      double acc = b[r];
      const double* row = A.data() + r * cols;
      for (std::size_t c = 0; c < cols; ++c) acc += row[c] * u[c];
      out[r] = acc;
    }
  }

  std::vector<double> apply(const std::vector<double>& u) const {
    if (u.size() != cols) {
      throw std::invalid_argument("Affine::apply: dimension mismatch");
    }
    std::vector<double> out(rows, 0.0);
    apply(u.data(), out.data());
    return out;
  }

  // Composition (*this) after inner: x -> this(inner(x)).
  Affine compose(const Affine& inner) const {
    if (cols != inner.rows) {
      throw std::invalid_argument("Affine::compose: dimension mismatch");
    }
    Affine out(rows, inner.cols);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < inner.cols; ++c) {
        double acc = 0.0;
        for (std::size_t k = 0; k < cols; ++k) {
          acc += at(r, k) * inner.at(k, c);
        }
        out.at(r, c) = acc;
      }
      double acc = b[r];
      for (std::size_t k = 0; k < cols; ++k) acc += at(r, k) * inner.b[k];
      out.b[r] = acc;
    }
    return out;
  }
};

}  // namespace hxconv
