#include <doctest.h>

#include <cmath>

#include "hxconv/quat.hpp"
#include "hxconv/util.hpp"

using namespace hxconv;

namespace {

Quaternion random_quat(std::uint64_t& st, double scale = 2.0) {
  return Quaternion(uniform_in(st, -scale, scale), uniform_in(st, -scale, scale),
                    uniform_in(st, -scale, scale), uniform_in(st, -scale, scale));
}

HPoint random_hpoint(std::uint64_t& st, std::size_t n, double scale = 2.0) {
  HPoint p(n);
  for (auto& q : p) q = random_quat(st, scale);
  return p;
}

}  // namespace

TEST_CASE("hamilton table") {
  const Quaternion i = Quaternion::i(), j = Quaternion::j(), k = Quaternion::k();
  CHECK(i * j == k);
  CHECK(j * i == -k);
  CHECK(j * k == i);
  CHECK(k * j == -i);
  CHECK(k * i == j);
  CHECK(i * k == -j);
  CHECK(i * i == -Quaternion::one());
  CHECK(j * j == -Quaternion::one());
  CHECK(k * k == -Quaternion::one());
}

TEST_CASE("product norm and associativity") {
  std::uint64_t st = 41;
  for (int rep = 0; rep < 200; ++rep) {
    const Quaternion a = random_quat(st), b = random_quat(st), c = random_quat(st);
    CHECK(std::fabs((a * b).norm() - a.norm() * b.norm()) < 1e-9);
    CHECK(quat_close((a * b) * c, a * (b * c), 1e-9));
    CHECK(quat_close(a * (b + c), a * b + a * c, 1e-9));
  }
}

TEST_CASE("inverse and conjugate") {
  std::uint64_t st = 42;
  for (int rep = 0; rep < 100; ++rep) {
    Quaternion a = random_quat(st);
    if (a.norm() < 1e-6) a = Quaternion::one();
    CHECK(quat_close(a * a.inverse(), Quaternion::one(), 1e-9));
    CHECK(quat_close(a.inverse() * a, Quaternion::one(), 1e-9));
    CHECK(std::fabs((a * a.conjugate()).w - a.norm_sq()) < 1e-9);
  }
  CHECK_THROWS_AS(Quaternion::zero().inverse(), std::domain_error);
}

TEST_CASE("pairing is affine along lines") {
  std::uint64_t st = 43;
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 1 + rep % 3;
    HLine line{random_hpoint(st, n), random_hpoint(st, n)};
    const HPoint h = random_hpoint(st, n);
    const Quaternion t = random_quat(st);
    const Quaternion lhs = pairing(line_eval(line, t), h);
    const Quaternion rhs = pairing(line.base, h) + t * pairing(line.dir, h);
    CHECK(quat_close(lhs, rhs, 1e-8));
  }
}

TEST_CASE("one-variable pairing distance identity") {
  // h*x - 1 = h*(x - h^{-1}) and x*h - 1 = (x - h^{-1})*h, so on either
  // side |.*. - 1| = |h| * |x - h^{-1}|: the conjugate-set margin is a
  // scaled nearest-neighbor distance in H^1.
  std::uint64_t st = 44;
  for (int rep = 0; rep < 200; ++rep) {
    Quaternion h = random_quat(st);
    if (h.norm() < 1e-3) h = Quaternion::one();
    const Quaternion x = random_quat(st);
    const double rhs = h.norm() * (x - h.inverse()).norm();
    CHECK(std::fabs((h * x - Quaternion::one()).norm() - rhs) < 1e-8);
    CHECK(std::fabs((x * h - Quaternion::one()).norm() - rhs) < 1e-8);
  }
}

TEST_CASE("annihilating functional kills the direction") {
  std::uint64_t st = 45;
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 2 + rep % 2;
    HPoint d = random_hpoint(st, n);
    if (hpoint_norm(d) < 1e-6) d[0] = Quaternion::one();
    const Functional h = annihilating_functional(d);
    CHECK(hpoint_norm(h) > 1e-9);
    CHECK(pairing(d, h).norm() < 1e-8);
    // The pairing is then constant along any line with direction d.
    HLine line{random_hpoint(st, n), d};
    const Quaternion at0 = pairing(line_eval(line, Quaternion::zero()), h);
    const Quaternion at_t = pairing(line_eval(line, random_quat(st)), h);
    CHECK(quat_close(at0, at_t, 1e-7));
  }
  CHECK_THROWS_AS(annihilating_functional(HPoint{Quaternion::one()}),
                  std::invalid_argument);
}

TEST_CASE("flatten roundtrip preserves norm") {
  std::uint64_t st = 46;
  const HPoint p = random_hpoint(st, 3);
  const std::vector<double> f = flatten(p);
  CHECK(f.size() == 12);
  CHECK(hpoint_close(unflatten(f), p, 0.0));
  double n2 = 0.0;
  for (const double v : f) n2 += v * v;
  CHECK(std::fabs(std::sqrt(n2) - hpoint_norm(p)) < 1e-12);
}
