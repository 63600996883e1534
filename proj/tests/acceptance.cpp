// Acceptance gate: one self-contained check per shipped guarantee, each
// printing exactly one "[criterion N] PASS" / "[criterion N] FAIL (reason)"
// line.  Run all with no arguments or a single one with --criterion N.
// Exit status 0 iff every selected criterion passed.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <exception>
#include <string>
#include <vector>

#include "floodfill_reference.hpp"
#include "hxconv/cubical.hpp"
#include "hxconv/fixtures.hpp"
#include "hxconv/hconv.hpp"
#include "hxconv/report.hpp"
#include "hxconv/util.hpp"
#include "hxconv/voxel.hpp"

using namespace hxconv;

namespace {

struct Outcome {
  bool pass = false;
  std::string reason;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_secs(double s) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", s);
  return buf;
}

const Frame kH1 = Frame::canonical(1, {0, 1, 2, 3});

const CheckRow* find_row(const CheckReport& rep, const std::string& id) {
  for (const CheckRow& c : rep.checks) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

// Require the named rows to exist and pass; fill `reason` otherwise.
bool rows_pass(const CheckReport& rep, const std::vector<std::string>& ids,
               std::string& reason) {
  for (const std::string& id : ids) {
    const CheckRow* row = find_row(rep, id);
    if (!row) {
      reason = "missing row " + id;
      return false;
    }
    if (!row->pass) {
      reason = "row " + id + " failed";
      return false;
    }
  }
  return true;
}

bool betti_equals(const BettiVector& got, const std::vector<long long>& want) {
  return !got.empty_set && got.b == want;
}

std::string betti_str(const BettiVector& b) {
  std::string s = "(";
  for (std::size_t i = 0; i < b.b.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(b.b[i]);
  }
  return s + ")";
}

// --------------------------------------------------------------------------
// 1. Homology oracle shapes: exact Betti vectors, each under a second.
// --------------------------------------------------------------------------
Outcome criterion1() {
  struct Shape {
    const char* name;
    VoxelSet vox;
    std::vector<long long> want;
    bool b1_only;
  };
  std::vector<Shape> shapes;

  {
    VoxelSet v(kH1, make_cube_grid(4, -1.0, 1.0, 5));
    v.bits.set(v.grid.linear_index({2, 2, 2, 2}));
    shapes.push_back({"single voxel", v, {1, 0, 0, 0, 0}, false});
  }
  {
    VoxelSet v(kH1, make_cube_grid(4, -1.0, 1.0, 5));
    for (std::uint32_t a = 1; a <= 3; ++a)
      for (std::uint32_t b = 1; b <= 3; ++b)
        for (std::uint32_t c = 1; c <= 3; ++c)
          for (std::uint32_t d = 1; d <= 3; ++d) v.bits.set(v.grid.linear_index({a, b, c, d}));
    v.bits.reset(v.grid.linear_index({2, 2, 2, 2}));
    shapes.push_back({"3^4 block minus center", v, {1, 0, 0, 1, 0}, false});
  }
  {
    VoxelSet v(kH1, make_cube_grid(4, -1.0, 1.0, 5));
    v.bits.set(v.grid.linear_index({0, 0, 0, 0}));
    v.bits.set(v.grid.linear_index({4, 4, 4, 4}));
    shapes.push_back({"two components", v, {2, 0, 0, 0, 0}, false});
  }
  {
    GridSpec g;
    g.axes = {GridAxis{-1, 1, 9}, GridAxis{-1, 1, 9}, GridAxis{-1, 1, 3},
              GridAxis{-1, 1, 3}};
    VoxelSet v(kH1, g);
    for (std::uint32_t i = 0; i < 9; ++i) {
      for (std::uint32_t j = 0; j < 9; ++j) {
        const std::uint32_t di = i > 4 ? i - 4 : 4 - i;
        const std::uint32_t dj = j > 4 ? j - 4 : 4 - j;
        const std::uint32_t cheb = di > dj ? di : dj;
        if (cheb < 1 || cheb > 3) continue;
        for (std::uint32_t k = 0; k < 2; ++k) v.bits.set(v.grid.linear_index({i, j, k, 1}));
      }
    }
    shapes.push_back({"thickened planar loop", v, {1, 1, 0, 0, 0}, true});
  }

  for (const Shape& s : shapes) {
    const auto t0 = Clock::now();
    const BettiVector got = betti_numbers(s.vox);
    const double el = seconds_since(t0);
    const bool ok = s.b1_only
                        ? (!got.empty_set && got.b.size() > 1 && got.b[1] == 1)
                        : betti_equals(got, s.want);
    if (!ok) {
      return {false, std::string(s.name) + " gave " + betti_str(got)};
    }
    if (el >= 1.0) {
      return {false, std::string(s.name) + " took " + fmt_secs(el) + " s"};
    }
  }
  return {true, ""};
}

// --------------------------------------------------------------------------
// 2. Flood fill equals brute-force complement labeling on random bitsets.
// --------------------------------------------------------------------------
Outcome criterion2() {
  const auto t0 = Clock::now();
  for (std::uint64_t t = 0; t < 200; ++t) {
    const std::uint32_t cells = 5 + static_cast<std::uint32_t>(t % 5);  // 5..9
    const double density = 0.10 + 0.05 * static_cast<double>(t % 8);
    const VoxelSet e =
        testref::random_interior_set(kH1, derive_seed(26082200, t), cells, density);
    const VoxelSet got = h_combination(e);
    const VoxelSet want = testref::brute_h_combination(e);
    if (!(got.bits == want.bits)) {
      return {false, "mismatch on random set " + std::to_string(t)};
    }
  }
  const double el = seconds_since(t0);
  if (el >= 10.0) return {false, "took " + fmt_secs(el) + " s (limit 10)"};
  return {true, ""};
}

// --------------------------------------------------------------------------
// 3. First worked example: image topology and hull tightness.
// --------------------------------------------------------------------------
Outcome criterion3() {
  const auto t0 = Clock::now();
  const CheckReport rep = run_fixture("example1", RunOptions{});
  const double el = seconds_since(t0);
  std::string reason;
  if (!rows_pass(rep,
                 {"image-first-coord-no-loop", "image-identification-two-classes",
                  "images-keep-loop", "hull-matches-set"},
                 reason)) {
    return {false, reason};
  }
  if (el > 300.0) return {false, "took " + fmt_secs(el) + " s (limit 300)"};
  return {true, ""};
}

// --------------------------------------------------------------------------
// 4. Second worked example: vanishing top section homology and minimality.
// --------------------------------------------------------------------------
Outcome criterion4() {
  const auto t0 = Clock::now();
  const CheckReport rep = run_fixture("example2", RunOptions{});
  const double el = seconds_since(t0);
  std::string reason;
  if (!rows_pass(rep,
                 {"sections-vanishing-h3", "hcombn-stable",
                  "shell-smaller-than-solid"},
                 reason)) {
    return {false, reason};
  }
  if (el > 600.0) return {false, "took " + fmt_secs(el) + " s (limit 600)"};
  return {true, ""};
}

// --------------------------------------------------------------------------
// 5. Intersections of convex-compact pairs stay quasiconvex (50 trials).
// --------------------------------------------------------------------------
Outcome criterion5() {
  const auto t0 = Clock::now();
  const CheckReport rep = run_suite("theorem4", RunOptions{});
  const double el = seconds_since(t0);
  if (!rep.overall_pass) {
    for (const CheckRow& c : rep.checks) {
      if (!c.pass) return {false, "trial " + c.id + " failed"};
    }
    return {false, "suite failed"};
  }
  if (el > 600.0) return {false, "took " + fmt_secs(el) + " s (limit 600)"};
  return {true, ""};
}

// --------------------------------------------------------------------------
// 6. Products of acyclic factors: all nonempty sections have b3 = 0.
// --------------------------------------------------------------------------
Outcome criterion6() {
  const CheckReport rep = run_suite("lemma4", RunOptions{});
  if (!rep.overall_pass) {
    for (const CheckRow& c : rep.checks) {
      if (!c.pass) return {false, "trial " + c.id + " failed"};
    }
    return {false, "suite failed"};
  }
  return {true, ""};
}

// --------------------------------------------------------------------------
// 7. Idempotence: the combination fixes the hull on every shipped fixture.
// --------------------------------------------------------------------------
Outcome criterion7() {
  const CheckReport rep = run_suite("theorem1", RunOptions{});
  if (!rep.overall_pass) {
    for (const CheckRow& c : rep.checks) {
      if (!c.pass) return {false, "row " + c.id + " failed"};
    }
    return {false, "suite failed"};
  }
  return {true, ""};
}

// --------------------------------------------------------------------------
// 8. Double-conjugate hull agrees with the flood fill on seeded balls.
// --------------------------------------------------------------------------
Outcome criterion8() {
  const CheckReport rep = run_suite("theorem2_n1", RunOptions{});
  if (!rep.overall_pass) {
    for (const CheckRow& c : rep.checks) {
      if (!c.pass) return {false, "trial " + c.id + " failed"};
    }
    return {false, "suite failed"};
  }
  return {true, ""};
}

// --------------------------------------------------------------------------
// 9. Contrapositive witness: the hollow shell moves under the hull AND
//    fails the section check.
// --------------------------------------------------------------------------
Outcome criterion9() {
  const CheckReport rep = run_fixture("shell_h1", RunOptions{});
  std::string reason;
  if (!rows_pass(rep, {"hull-differs-from-set", "quasiconvex-fails"}, reason)) {
    return {false, reason};
  }
  return {true, ""};
}

// --------------------------------------------------------------------------
// 10. Extremal cells of the closed ball: exactly the boundary shell, and
//     the combination regenerates the ball from them.
// --------------------------------------------------------------------------
Outcome criterion10() {
  const CheckReport rep = run_fixture("ball_h1", RunOptions{});
  std::string reason;
  if (!rows_pass(rep, {"extremal-is-boundary", "extremal-recovers-set"}, reason)) {
    return {false, reason};
  }
  return {true, ""};
}

// --------------------------------------------------------------------------
// 11. Determinism: identical seeds give byte-identical report bodies.
// --------------------------------------------------------------------------
Outcome criterion11() {
  {
    const CheckReport a = run_fixture("ball_h1", RunOptions{});
    const CheckReport b = run_fixture("ball_h1", RunOptions{});
    if (a.body_string() != b.body_string()) {
      return {false, "ball_h1 fixture bodies differ between runs"};
    }
  }
  {
    RunOptions opt;
    opt.trials = 2;
    const CheckReport a = run_suite("theorem2_n1", opt);
    const CheckReport b = run_suite("theorem2_n1", opt);
    if (a.body_string() != b.body_string()) {
      return {false, "theorem2_n1 suite bodies differ between runs"};
    }
  }
  return {true, ""};
}

using CriterionFn = Outcome (*)();

}  // namespace

int main(int argc, char** argv) {
  int selected = 0;  // 0 = all
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      selected = std::atoi(argv[++i]);
    } else if (std::strcmp(argv[i], "--help") == 0) {
      std::printf("usage: %s [--criterion N]   (N in 1..11; default: all)\n",
                  argv[0]);
      return 0;
    } else {
      std::fprintf(stderr, "unknown argument: %s\n", argv[i]);
      return 2;
    }
  }
  if (selected < 0 || selected > 11) {
    std::fprintf(stderr, "criterion must be in 1..11 (or 0 for all)\n");
    return 2;
  }

  const CriterionFn fns[11] = {criterion1, criterion2, criterion3, criterion4,
                               criterion5, criterion6, criterion7, criterion8,
                               criterion9, criterion10, criterion11};
  bool all_pass = true;
  for (int n = 1; n <= 11; ++n) {
    if (selected != 0 && selected != n) continue;
    Outcome out;
    const auto t0 = Clock::now();
    try {
      out = fns[n - 1]();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double el = seconds_since(t0);
    if (out.pass) {
      std::printf("[criterion %d] PASS (%s s)\n", n, fmt_secs(el).c_str());
    } else {
      std::printf("[criterion %d] FAIL (%s)\n", n, out.reason.c_str());
    }
    std::fflush(stdout);
    all_pass = all_pass && out.pass;
  }
  return all_pass ? 0 : 1;
}
