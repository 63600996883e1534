// hxconv: command-line front end for the quaternionic convex-analysis
// library.  Runs shipped fixtures, randomized suites, and one-off operations
// on scene files, emitting a JSON check report.
//
// Exit codes: 0 all checks passed, 1 a check failed or a runtime error
// occurred, 2 usage error (unknown command, unknown name, unreadable file).
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "hxconv/fixtures.hpp"
#include "hxconv/hconv.hpp"
#include "hxconv/report.hpp"

namespace {

using namespace hxconv;

struct CliOptions {
  RunOptions run;
  std::string out_path;
  std::string scene_path;
  std::string field_name = "mod2";
};

void add_common_flags(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--seed", o.run.seed, "Random seed (default 20260822)");
  cmd->add_option("--threads", o.run.threads, "Worker threads (default 1)");
  cmd->add_option("--resolution", o.run.resolution,
                  "Cells per window axis override");
  cmd->add_option("--tolerance", o.run.tolerance,
                  "Hausdorff tolerance override, in cells");
  cmd->add_option("--field", o.field_name, "Homology coefficients")
      ->check(CLI::IsMember({"mod2", "rational"}));
  cmd->add_option("--lines", o.run.lines, "Section line count override");
  cmd->add_option("--functionals", o.run.functionals,
                  "Hull functional count override");
  cmd->add_option("--radius", o.run.radius, "Extremal disk radius override");
  cmd->add_option("--trials", o.run.trials, "Suite trial count override");
  cmd->add_option("--fixtures", o.run.fixtures_dir,
                  "Directory with the shipped scene files");
  cmd->add_option("--out", o.out_path, "Also write the report to this file");
}

int emit(CheckReport& rep, const CliOptions& o, double wall_ms) {
  rep.wall_ms = wall_ms;
  std::cout << rep.full_string() << "\n";
  if (!o.out_path.empty()) rep.write_file(o.out_path);
  return rep.overall_pass ? 0 : 1;
}

std::string betti_json(const BettiVector& bv) {
  std::string s = "[";
  for (std::size_t i = 0; i < bv.b.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(bv.b[i]);
  }
  return s + "]";
}

CheckRow betti_row(const char* id, const BettiVector& bv, bool pass) {
  CheckRow row;
  row.id = id;
  row.pass = pass;
  row.provenance = "definition";
  row.has_betti = true;
  for (const long long v : bv.b) {
    row.betti.push_back(static_cast<std::uint64_t>(v < 0 ? 0 : v));
  }
  return row;
}

// ---------------------------------------------------------------------------
// One-off operations on a scene file.
// ---------------------------------------------------------------------------
CheckReport op_betti(const CliOptions& o) {
  FixtureScene fx = load_scene_file(o.scene_path);
  CheckReport rep;
  rep.name = "betti:" + fx.name;
  rep.seed = o.run.seed;
  const VoxelSet raster = rasterize(fx.scene, fx.frame, fx.grid, o.run.threads);
  const BettiVector bv = betti_numbers(raster, o.run.field);
  CheckRow row = betti_row("betti", bv, true);
  row.inputs_json = "{\"cells\": " + std::to_string(raster.cell_count()) +
                    ", \"betti\": " + betti_json(bv) + "}";
  rep.add(row);
  return rep;
}

CheckReport op_hull(const CliOptions& o) {
  FixtureScene fx = load_scene_file(o.scene_path);
  CheckReport rep;
  rep.name = "hull:" + fx.name;
  rep.seed = o.run.seed;
  const std::size_t nf = o.run.functionals ? o.run.functionals : 16;
  const VoxelSet raster = rasterize(fx.scene, fx.frame, fx.grid, o.run.threads);
  HullParams hp;
  hp.threads = o.run.threads;
  const VoxelSet hull = h_hull_sampled(
      fx.scene, fx.frame, fx.grid,
      sample_functionals(fx.scene.ambient_n, nf, o.run.seed), hp);
  const double d = hausdorff_distance_cells(hull, raster);
  CheckRow row;
  row.id = "hull";
  row.provenance = "definition";
  row.inputs_json = "{\"functionals\": " + std::to_string(nf) +
                    ", \"set_cells\": " + std::to_string(raster.cell_count()) +
                    ", \"hull_cells\": " + std::to_string(hull.cell_count()) +
                    "}";
  row.has_hausdorff = true;
  row.hausdorff_cells = d;
  row.pass = o.run.tolerance >= 0.0 ? d <= o.run.tolerance : true;
  rep.add(row);
  return rep;
}

CheckReport op_quasiconvex(const CliOptions& o) {
  FixtureScene fx = load_scene_file(o.scene_path);
  CheckReport rep;
  rep.name = "quasiconvex:" + fx.name;
  rep.seed = o.run.seed;
  const std::size_t nl = o.run.lines ? o.run.lines : 32;
  const VoxelSet raster = rasterize(fx.scene, fx.frame, fx.grid, o.run.threads);
  const SectionSurvey sv =
      quasiconvex_check(fx.scene, sample_scene_lines(raster, nl, o.run.seed),
                        13, o.run.field, o.run.threads);
  CheckRow row;
  row.id = "sections-vanishing-h3";
  row.provenance = "definition";
  row.inputs_json =
      "{\"lines\": " + std::to_string(nl) +
      ", \"nonempty\": " + std::to_string(sv.nonempty_count) +
      ", \"b3_failures\": " + std::to_string(sv.b3_failures) + "}";
  row.pass = sv.quasiconvex_pass();
  rep.add(row);
  return rep;
}

CheckReport op_extremal(const CliOptions& o) {
  FixtureScene fx = load_scene_file(o.scene_path);
  CheckReport rep;
  rep.name = "extremal:" + fx.name;
  rep.seed = o.run.seed;
  const VoxelSet raster = rasterize(fx.scene, fx.frame, fx.grid, o.run.threads);
  const VoxelSet bnd = boundary_shell(raster);
  const double r = o.run.radius > 0.0 ? o.run.radius
                                      : 2.5 * fx.grid.cell_diagonal();
  ExtremalParams ep;
  ep.threads = o.run.threads;
  const VoxelSet ext = h_extremal_points(
      fx.scene, bnd, DirectionSample::unit_sphere(fx.scene.ambient_n, 12, o.run.seed),
      r, ep);
  CheckRow row;
  row.id = "extremal";
  row.provenance = "definition";
  row.inputs_json =
      "{\"disk_radius\": " + std::to_string(r) +
      ", \"boundary_cells\": " + std::to_string(bnd.cell_count()) +
      ", \"extremal_cells\": " + std::to_string(ext.cell_count()) + "}";
  row.pass = true;
  rep.add(row);
  return rep;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quaternionic convex-analysis toolkit"};
  app.require_subcommand(1);
  CliOptions o;

  std::string fixture_name, suite_name;
  CLI::App* c_fixture =
      app.add_subcommand("fixture", "Run all checks of a shipped fixture");
  c_fixture->add_option("name", fixture_name, "Fixture name")->required();
  CLI::App* c_suite =
      app.add_subcommand("suite", "Run a randomized property suite");
  c_suite->add_option("name", suite_name, "Suite name")->required();
  CLI::App* c_betti =
      app.add_subcommand("betti", "Homology ranks of a scene raster");
  CLI::App* c_hull = app.add_subcommand("hull", "Sampled hull of a scene");
  CLI::App* c_quasi = app.add_subcommand(
      "quasiconvex", "Third-homology line-section probe of a scene");
  CLI::App* c_ext =
      app.add_subcommand("extremal", "Extremal boundary cells of a scene");
  for (CLI::App* c : {c_fixture, c_suite, c_betti, c_hull, c_quasi, c_ext}) {
    add_common_flags(c, o);
  }
  for (CLI::App* c : {c_betti, c_hull, c_quasi, c_ext}) {
    c->add_option("--scene", o.scene_path, "Scene JSON file")->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    // Normalize: help is success, every other parse problem is a usage error.
    return code == 0 ? 0 : 2;
  }

  if (o.field_name == "rational") o.run.field = HomologyField::kRational;

  if (!o.scene_path.empty()) {
    std::ifstream probe(o.scene_path);
    if (!probe) {
      std::cerr << "error: cannot open scene file: " << o.scene_path << "\n";
      return 2;
    }
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    CheckReport rep;
    if (c_fixture->parsed()) {
      rep = run_fixture(fixture_name, o.run);
    } else if (c_suite->parsed()) {
      rep = run_suite(suite_name, o.run);
    } else if (c_betti->parsed()) {
      rep = op_betti(o);
    } else if (c_hull->parsed()) {
      rep = op_hull(o);
    } else if (c_quasi->parsed()) {
      rep = op_quasiconvex(o);
    } else {
      rep = op_extremal(o);
    }
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
    return emit(rep, o, ms);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
