#pragma once
// Shipped scene fixtures and seeded property suites, reported as CheckReports.
//
// Fixtures are concrete compact sets with known structure (worked examples
// and hand-built shapes); suites generate randomized families of sets with a
// certified property and verify the property's computational counterpart.
// Everything is deterministic given (name, seed, options).

#include <cstdint>
#include <string>
#include <vector>

#include "hxconv/cubical.hpp"
#include "hxconv/hconv.hpp"
#include "hxconv/report.hpp"
#include "hxconv/scene.hpp"

namespace hxconv {

// A scene plus the frame/window it is meant to be discretized on.
struct FixtureScene {
  std::string name;
  SceneSet scene;
  Frame frame;
  GridSpec grid;
};

// Parse a scene description.  Schema (see README): an object with
// "name", "ambient_n", "frame" ({"coords": [ambient real dims]} or
// {"origin": [...], "axes": [[...], ...]}), "grid" ([{lo,hi,cells}, ...]),
// optional "bound" ({"center": [...], "radius": r}), and "predicate", a tree
// of nodes {"type": "const"|"and"|"or"|"not"|"linear"|"quad"|"ball", ...}
// with relations "le"|"ge"|"shell" and "tau" either a number or "auto"
// (= 1.5 x grid cell diagonal).
FixtureScene load_scene_json(const std::string& text);
FixtureScene load_scene_file(const std::string& path);

// Options shared by fixture runs and suites.  Zero / negative values mean
// "use the per-check default".  Threads are deliberately not echoed into
// report bodies: results are thread-count independent.
struct RunOptions {
  unsigned threads = 1;
  HomologyField field = HomologyField::kMod2;
  std::uint32_t resolution = 0;  // cells per axis for the fixture window
  double tolerance = -1.0;       // Hausdorff tolerance override, in cells
  std::uint64_t seed = 20260822ULL;
  std::size_t lines = 0;         // section sampling override
  std::size_t functionals = 0;   // hull sampling override
  double radius = 0.0;           // extremal disk radius override
  std::size_t trials = 0;        // suite trial count override
  std::string fixtures_dir;      // where the shipped *.json scenes live
};

// Directory containing the shipped scene files: explicit argument if
// nonempty, else $HXCONV_FIXTURES, else the compiled-in default.
std::string resolve_fixtures_dir(const std::string& override_dir);

std::vector<std::string> fixture_names();  // example1, example2, ball_h1, ...
std::vector<std::string> suite_names();    // theorem1, theorem4, lemma4, ...

// Runs all checks of one named fixture / suite.  Throws
// std::invalid_argument for unknown names.
CheckReport run_fixture(const std::string& name, const RunOptions& opt);
CheckReport run_suite(const std::string& name, const RunOptions& opt);

// The functional-constrained compact used by the "polyhedron" fixture,
// exposed for tests: an intersection of pairing preimages of balls,
// discretized on a 4D slice frame through an interior point.
FixtureScene polyhedron_fixture();

// Seeded low-discrepancy functionals on the unit sphere of H^n.
std::vector<Functional> sample_functionals(std::size_t n, std::size_t count,
                                           std::uint64_t seed);

// Hausdorff distance in cells as a double; +infinity when the capped search
// gave up (sets too far apart or shape mismatch).
double hausdorff_distance_cells(const VoxelSet& a, const VoxelSet& b);

}  // namespace hxconv
