#include "hxconv/fixtures.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fixtures_detail.hpp"

#ifndef HXCONV_DEFAULT_FIXTURES_DIR
#define HXCONV_DEFAULT_FIXTURES_DIR "fixtures"
#endif

namespace hxconv {

using detail::ojson;

// ---------------------------------------------------------------------------
// Scene JSON loader
// ---------------------------------------------------------------------------
namespace {

Relation parse_rel(const ojson& node) {
  const std::string r = node.value("rel", "le");
  if (r == "le") return Relation::kLE;
  if (r == "ge") return Relation::kGE;
  if (r == "shell") return Relation::kShell;
  throw std::invalid_argument("scene json: unknown rel '" + r + "'");
}

double parse_tau(const ojson& node, const GridSpec& grid) {
  if (!node.contains("tau")) return 0.0;
  const ojson& t = node.at("tau");
  if (t.is_string()) {
    if (t.get<std::string>() == "auto") return 1.5 * grid.cell_diagonal();
    throw std::invalid_argument("scene json: tau must be a number or \"auto\"");
  }
  return t.get<double>();
}

std::vector<double> parse_vec(const ojson& j, std::size_t want,
                              const char* what) {
  std::vector<double> v = j.get<std::vector<double>>();
  if (v.size() != want) {
    throw std::invalid_argument(std::string("scene json: ") + what +
                                " must have " + std::to_string(want) +
                                " entries");
  }
  return v;
}

SceneNodePtr parse_node(const ojson& j, std::size_t dim4n,
                        const GridSpec& grid) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "const") {
    return scene_const(j.at("value").get<bool>());
  }
  if (type == "and" || type == "or") {
    std::vector<SceneNodePtr> kids;
    for (const ojson& c : j.at("children")) {
      kids.push_back(parse_node(c, dim4n, grid));
    }
    return type == "and" ? scene_and(std::move(kids))
                         : scene_or(std::move(kids));
  }
  if (type == "not") {
    return scene_not(parse_node(j.at("child"), dim4n, grid));
  }
  if (type == "linear") {
    return scene_linear(parse_vec(j.at("g"), dim4n, "linear g"),
                        j.value("offset", 0.0), parse_rel(j),
                        parse_tau(j, grid));
  }
  if (type == "quad") {
    std::vector<SceneNode::QuadTerm> terms;
    for (const ojson& t : j.at("terms")) {
      if (!t.is_array() || t.size() != 3) {
        throw std::invalid_argument("scene json: quad term must be [r, c, coef]");
      }
      SceneNode::QuadTerm q;
      q.r = t.at(0).get<std::uint32_t>();
      q.c = t.at(1).get<std::uint32_t>();
      q.coef = t.at(2).get<double>();
      if (q.r >= dim4n || q.c >= dim4n) {
        throw std::invalid_argument("scene json: quad term index out of range");
      }
      terms.push_back(q);
    }
    std::vector<double> g;
    if (j.contains("g")) g = parse_vec(j.at("g"), dim4n, "quad g");
    return scene_quad(std::move(terms), std::move(g), j.value("offset", 0.0),
                      parse_rel(j), parse_tau(j, grid));
  }
  if (type == "ball") {
    return scene_ball(parse_vec(j.at("center"), dim4n, "ball center"),
                      j.at("radius").get<double>(), parse_rel(j),
                      parse_tau(j, grid));
  }
  throw std::invalid_argument("scene json: unknown node type '" + type + "'");
}

}  // namespace

FixtureScene load_scene_json(const std::string& text) {
  ojson j = ojson::parse(text, nullptr, false);
  if (j.is_discarded()) {
    throw std::invalid_argument("scene json: parse error");
  }
  FixtureScene fx;
  fx.name = j.value("name", "scene");
  const std::size_t n = j.at("ambient_n").get<std::size_t>();
  if (n == 0 || n > 8) {
    throw std::invalid_argument("scene json: ambient_n out of range");
  }
  const std::size_t dim4n = 4 * n;

  const ojson& jf = j.at("frame");
  if (jf.contains("coords")) {
    fx.frame = Frame::canonical(n, jf.at("coords").get<std::vector<std::size_t>>());
  } else {
    fx.frame.ambient_n = n;
    fx.frame.origin = parse_vec(jf.at("origin"), dim4n, "frame origin");
    for (const ojson& ax : jf.at("axes")) {
      fx.frame.axes.push_back(parse_vec(ax, dim4n, "frame axis"));
    }
    fx.frame.validate();
  }

  for (const ojson& ja : j.at("grid")) {
    GridAxis ax;
    ax.lo = ja.at("lo").get<double>();
    ax.hi = ja.at("hi").get<double>();
    ax.cells = ja.at("cells").get<std::uint32_t>();
    fx.grid.axes.push_back(ax);
  }
  if (fx.grid.dim() != fx.frame.local_dim()) {
    throw std::invalid_argument("scene json: grid/frame dimension mismatch");
  }
  fx.grid.validate();

  fx.scene.ambient_n = n;
  fx.scene.root = parse_node(j.at("predicate"), dim4n, fx.grid);
  if (j.contains("bound")) {
    SceneBound b;
    b.center = parse_vec(j.at("bound").at("center"), dim4n, "bound center");
    b.radius = j.at("bound").at("radius").get<double>();
    fx.scene.bound = b;
  }
  return fx;
}

FixtureScene load_scene_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open scene file: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_scene_json(ss.str());
}

std::string resolve_fixtures_dir(const std::string& override_dir) {
  if (!override_dir.empty()) return override_dir;
  if (const char* env = std::getenv("HXCONV_FIXTURES")) {
    if (*env) return env;
  }
  return HXCONV_DEFAULT_FIXTURES_DIR;
}

std::vector<std::string> fixture_names() {
  return {"example1", "example2", "ball_h1", "shell_h1", "polyhedron"};
}

std::vector<std::string> suite_names() {
  return {"theorem1", "theorem4",    "lemma4",
          "lemma1_n1", "theorem2_n1", "corollary4_n1"};
}

std::vector<Functional> sample_functionals(std::size_t n, std::size_t count,
                                           std::uint64_t seed) {
  return DirectionSample::unit_sphere(n, count, seed).items;
}

double hausdorff_distance_cells(const VoxelSet& a, const VoxelSet& b) {
  const auto d = hausdorff_cells(a, b, 64);
  if (!d) return std::numeric_limits<double>::infinity();
  return static_cast<double>(*d);
}

// ---------------------------------------------------------------------------
// Fixture runners
// ---------------------------------------------------------------------------
namespace {

using detail::attach_betti;
using detail::attach_hausdorff;
using detail::funcs_or;
using detail::lines_or;
using detail::make_row;
using detail::tol_or;

FixtureScene load_fixture_scene(const RunOptions& opt, const char* file) {
  const std::string dir = resolve_fixtures_dir(opt.fixtures_dir);
  FixtureScene fx = load_scene_file(dir + "/" + file);
  detail::apply_resolution(fx.grid, opt.resolution);
  return fx;
}

// --- ball_h1 ---------------------------------------------------------------
CheckReport fixture_ball_h1(const RunOptions& opt) {
  CheckReport rep;
  rep.name = "ball_h1";
  rep.seed = opt.seed;
  rep.config_json = detail::options_json(opt).dump();

  const FixtureScene fx = load_fixture_scene(opt, "ball_h1.json");
  const double radius = 0.8;
  const VoxelSet raster = rasterize(fx.scene, fx.frame, fx.grid, opt.threads);

  {  // volume against the closed-form 4-ball volume pi^2 r^4 / 2
    double cellvol = 1.0;
    for (const auto& ax : fx.grid.axes) cellvol *= ax.step();
    const double measured = static_cast<double>(raster.cell_count()) * cellvol;
    const double expected =
        M_PI * M_PI * radius * radius * radius * radius / 2.0;
    const double relerr = std::fabs(measured - expected) / expected;
    ojson in;
    in["radius"] = radius;
    in["grid_cells"] = detail::grid_cells_json(fx.grid);
    in["measured_volume"] = measured;
    in["expected_volume"] = expected;
    in["relative_error"] = relerr;
    rep.add(make_row("raster-volume", in, relerr <= 0.10, "analytic"));
  }

  {  // solid ball homology: one component, nothing else
    const BettiVector bv = betti_numbers(raster, opt.field);
    ojson in;
    in["cells"] = raster.cell_count();
    CheckRow r = make_row("betti-point", in, bv.is_point_like(), "analytic");
    attach_betti(r, bv);
    rep.add(r);
  }

  {  // no cavities: the window h-combination adds nothing
    const VoxelSet hc = h_combination(raster);
    const double d = hausdorff_distance_cells(hc, raster);
    ojson in;
    in["added_cells"] = hc.cell_count() - raster.cell_count();
    CheckRow r = make_row("hcomb-no-growth", in, hc.bits == raster.bits,
                          "analytic");
    attach_hausdorff(r, d);
    rep.add(r);
  }

  {  // line-wise combination keeps the set fixed, outside candidates stay out
    const CandidateFamily fam = hcombn_candidates(
        fx.scene, fx.frame, fx.grid, 256, 256, derive_seed(opt.seed, 11),
        opt.threads);
    const DirectionSample dirs =
        DirectionSample::unit_sphere(1, 8, derive_seed(opt.seed, 12));
    HCombNParams hp;
    hp.threads = opt.threads;
    const VoxelSet hn = hcomb_n(fx.scene, fam.candidates, dirs, hp);
    const double d = hausdorff_distance_cells(hn, fam.base);
    ojson in;
    in["candidate_cells"] = fam.candidates.cell_count();
    in["base_cells"] = fam.base.cell_count();
    in["result_cells"] = hn.cell_count();
    CheckRow r =
        make_row("hcombn-stable", in, d <= tol_or(opt, 1.0), "analytic");
    attach_hausdorff(r, d);
    rep.add(r);
  }

  {  // hull of a convex set is the set
    const std::size_t nf = funcs_or(opt, 16);
    const std::vector<Functional> funcs =
        sample_functionals(1, nf, derive_seed(opt.seed, 13));
    HullParams hp;
    hp.threads = opt.threads;
    const VoxelSet hull =
        h_hull_sampled(fx.scene, fx.frame, fx.grid, funcs, hp);
    const double d = hausdorff_distance_cells(hull, raster);
    ojson in;
    in["functionals"] = nf;
    in["hull_cells"] = hull.cell_count();
    in["raster_cells"] = raster.cell_count();
    CheckRow r =
        make_row("hull-matches-set", in, d <= tol_or(opt, 2.0), "analytic");
    attach_hausdorff(r, d);
    rep.add(r);
  }

  const VoxelSet bnd = boundary_shell(raster);
  VoxelSet ext(fx.frame, fx.grid);
  {  // strict convexity: every boundary cell is extremal
    const DirectionSample dirs =
        DirectionSample::unit_sphere(1, 12, derive_seed(opt.seed, 14));
    const double r_disk = opt.radius > 0.0 ? opt.radius : 0.5;
    ExtremalParams ep;
    ep.threads = opt.threads;
    ext = h_extremal_points(fx.scene, bnd, dirs, r_disk, ep);
    const double d = hausdorff_distance_cells(ext, bnd);
    ojson in;
    in["disk_radius"] = r_disk;
    in["boundary_cells"] = bnd.cell_count();
    in["extremal_cells"] = ext.cell_count();
    CheckRow r = make_row("extremal-is-boundary", in, d <= tol_or(opt, 1.0),
                          "analytic");
    attach_hausdorff(r, d);
    rep.add(r);
  }

  {  // the extremal shell regenerates the ball under h-combination
    const VoxelSet rec = h_combination(ext);
    const double d = hausdorff_distance_cells(rec, raster);
    ojson in;
    in["recovered_cells"] = rec.cell_count();
    CheckRow r = make_row("extremal-recovers-set", in, d <= tol_or(opt, 1.0),
                          "analytic");
    attach_hausdorff(r, d);
    rep.add(r);
  }

  {  // sections of a convex set: no third homology, in fact acyclic
    const std::size_t nl = lines_or(opt, 8);
    const std::vector<HLine> lines =
        sample_scene_lines(raster, nl, derive_seed(opt.seed, 15));
    const SectionSurvey sv =
        section_survey(fx.scene, lines, 21, opt.field, opt.threads);
    rep.add(make_row("sections-vanishing-h3", detail::survey_json(sv),
                     sv.quasiconvex_pass(), "analytic"));
    rep.add(make_row("sections-acyclic", detail::survey_json(sv),
                     sv.strong_convexity_pass(), "analytic"));
  }

  return rep;
}

// --- shell_h1 --------------------------------------------------------------
CheckReport fixture_shell_h1(const RunOptions& opt) {
  CheckReport rep;
  rep.name = "shell_h1";
  rep.seed = opt.seed;
  rep.config_json = detail::options_json(opt).dump();

  const FixtureScene fx = load_fixture_scene(opt, "shell_h1.json");
  const double r_sq = 0.64, band = 0.3716;  // must match the shipped file
  const VoxelSet raster = rasterize(fx.scene, fx.frame, fx.grid, opt.threads);

  {  // thickened 3-sphere homology
    const BettiVector bv = betti_numbers(raster, opt.field);
    const bool pass = !bv.empty_set && bv.b.size() == 5 && bv.b[0] == 1 &&
                      bv.b[1] == 0 && bv.b[2] == 0 && bv.b[3] == 1 &&
                      bv.b[4] == 0;
    ojson in;
    in["cells"] = raster.cell_count();
    CheckRow r = make_row("betti-shell", in, pass, "analytic");
    attach_betti(r, bv);
    rep.add(r);
  }

  const VoxelSet filled = h_combination(raster);
  {  // the cavity fills to the solid ball of the outer radius
    SceneSet solid;
    solid.ambient_n = 1;
    solid.root = scene_ball({0, 0, 0, 0}, std::sqrt(r_sq + band),
                            Relation::kLE);
    solid.bound = fx.scene.bound;
    const VoxelSet solid_raster =
        rasterize(solid, fx.frame, fx.grid, opt.threads);
    const double d = hausdorff_distance_cells(filled, solid_raster);
    ojson in;
    in["filled_cells"] = filled.cell_count();
    in["solid_cells"] = solid_raster.cell_count();
    CheckRow r = make_row("hcomb-fills-cavity", in, d <= tol_or(opt, 1.0),
                          "analytic");
    attach_hausdorff(r, d);
    rep.add(r);
  }

  {  // hull strictly exceeds the set, and matches the filled set
    const std::size_t nf = funcs_or(opt, 16);
    const std::vector<Functional> funcs =
        sample_functionals(1, nf, derive_seed(opt.seed, 21));
    HullParams hp;
    hp.threads = opt.threads;
    const VoxelSet hull =
        h_hull_sampled(fx.scene, fx.frame, fx.grid, funcs, hp);
    const double d_set = hausdorff_distance_cells(hull, raster);
    const double d_filled = hausdorff_distance_cells(hull, filled);
    ojson in;
    in["functionals"] = nf;
    in["hull_cells"] = hull.cell_count();
    in["raster_cells"] = raster.cell_count();
    CheckRow r1 = make_row("hull-differs-from-set", in,
                           d_set > tol_or(opt, 2.0), "analytic");
    attach_hausdorff(r1, d_set);
    rep.add(r1);
    CheckRow r2 = make_row("hull-matches-filled", in,
                           d_filled <= tol_or(opt, 2.0), "analytic");
    attach_hausdorff(r2, d_filled);
    rep.add(r2);
  }

  {  // the convexity probe must fail: line sections keep the cavity
    const std::size_t nl = lines_or(opt, 8);
    const std::vector<HLine> lines =
        sample_scene_lines(raster, nl, derive_seed(opt.seed, 22));
    const SectionSurvey sv =
        section_survey(fx.scene, lines, 21, opt.field, opt.threads);
    rep.add(make_row("quasiconvex-fails", detail::survey_json(sv),
                     sv.nonempty_count > 0 && sv.b3_failures > 0, "analytic"));
  }

  return rep;
}

// --- example1 --------------------------------------------------------------

// The loaded scene is and(or(A, B, C, D), range, slabs...); the runner needs
// the four strand sub-scenes for the identification check.
SceneSet example1_strand(const FixtureScene& fx, std::size_t strand) {
  const SceneNode& root = *fx.scene.root;
  if (root.kind != SceneNode::Kind::kAnd || root.children.empty() ||
      root.children[0]->kind != SceneNode::Kind::kOr ||
      root.children[0]->children.size() != 4) {
    throw std::runtime_error("example1 scene: unexpected predicate shape");
  }
  std::vector<SceneNodePtr> kids;
  kids.push_back(root.children[0]->children[strand]);
  for (std::size_t i = 1; i < root.children.size(); ++i) {
    kids.push_back(root.children[i]);
  }
  SceneSet s;
  s.ambient_n = fx.scene.ambient_n;
  s.root = scene_and(std::move(kids));
  s.bound = fx.scene.bound;
  return s;
}

CheckReport fixture_example1(const RunOptions& opt) {
  CheckReport rep;
  rep.name = "example1";
  rep.seed = opt.seed;
  rep.config_json = detail::options_json(opt).dump();

  const FixtureScene fx = load_fixture_scene(opt, "example1_k.json");
  const FixtureScene fx3 = load_fixture_scene(opt, "example1_k3.json");
  // Coarse image cells keep segment-identification distances stable in cell
  // units; the loop-visibility row below needs finer cells so the thickened
  // image tube cannot swallow its own hole.
  const double img_cell = 1.5 * fx.grid.cell_diagonal();
  const double img_cell_fine = 0.75 * fx.grid.cell_diagonal();
  const VoxelSet raster = rasterize(fx.scene, fx.frame, fx.grid, opt.threads);

  {  // the four joined strands form one closed loop
    const BettiVector bv = betti_numbers(raster, opt.field);
    const bool pass = !bv.empty_set && bv.b.size() == 4 && bv.b[0] == 1 &&
                      bv.b[1] == 1 && bv.b[2] == 0 && bv.b[3] == 0;
    ojson in;
    in["cells"] = raster.cell_count();
    CheckRow r = make_row("set-betti-loop", in, pass, "reference");
    attach_betti(r, bv);
    rep.add(r);
  }

  const Functional f_first = {Quaternion(1, 0, 0, 0), Quaternion(0, 0, 0, 0)};
  const Functional f_ident = {Quaternion(1, 0, 0, 0), Quaternion(0, -2, 0, 0)};

  {  // first-coordinate image: a wedge of two segments, no loop
    const auto bbox =
        image_bbox(fx.scene, fx.frame, fx.grid, f_first, 2, opt.threads);
    if (!bbox) throw std::runtime_error("example1: empty first-coord image");
    const GridSpec ig = fit_value_grid(*bbox, img_cell, 5, 63);
    const VoxelSet img = project_scene_image(fx.scene, fx.frame, fx.grid,
                                             f_first, ig, 2, opt.threads);
    const BettiVector bv = betti_numbers(img, opt.field);
    const bool pass =
        !bv.empty_set && bv.b.size() == 5 && bv.b[0] == 1 && bv.b[1] == 0;
    ojson in;
    in["functional"] = "(1, 0)";
    in["image_cells"] = img.cell_count();
    in["image_grid"] = detail::grid_cells_json(ig);
    CheckRow r = make_row("image-first-coord-no-loop", in, pass, "reference");
    attach_betti(r, bv);
    rep.add(r);
  }

  {  // identification functional: strands project pairwise onto the same
     // segments, so distinct strand images fall into exactly two classes,
     // and the two class images share one endpoint (single component).
    const auto bbox =
        image_bbox(fx.scene, fx.frame, fx.grid, f_ident, 2, opt.threads);
    if (!bbox) throw std::runtime_error("example1: empty identification image");
    const GridSpec ig = fit_value_grid(*bbox, img_cell, 5, 63);
    std::vector<VoxelSet> strand_img;
    for (std::size_t s = 0; s < 4; ++s) {
      strand_img.push_back(project_scene_image(example1_strand(fx, s),
                                               fx.frame, fx.grid, f_ident, ig,
                                               2, opt.threads));
    }
    // Union-find over pairwise image equality (within one cell).
    std::size_t cls[4] = {0, 1, 2, 3};
    auto find = [&](std::size_t i) {
      while (cls[i] != i) i = cls[i];
      return i;
    };
    ojson pair_dist = ojson::array();
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = i + 1; j < 4; ++j) {
        const double d = hausdorff_distance_cells(strand_img[i], strand_img[j]);
        pair_dist.push_back(std::isfinite(d) ? ojson(d) : ojson(nullptr));
        // Identified strands rasterize through differently shaped tubes, so
        // their images can disagree by a couple of cells near the ends.
        if (d <= 2.0) cls[find(j)] = find(i);
      }
    }
    std::size_t classes = 0;
    for (std::size_t i = 0; i < 4; ++i) {
      if (find(i) == i) ++classes;
    }
    VoxelSet whole = strand_img[0];
    for (std::size_t s = 1; s < 4; ++s) whole = v_or(whole, strand_img[s]);
    const std::uint32_t comp = component_count(whole, Adjacency::kFace);
    ojson in;
    in["functional"] = "(1, -2i)";
    in["image_grid"] = detail::grid_cells_json(ig);
    in["pairwise_hausdorff"] = pair_dist;
    in["identification_classes"] = classes;
    in["image_components"] = comp;
    rep.add(make_row("image-identification-two-classes", in,
                     classes == 2 && comp == 1, "reference"));
  }

  {  // generic projections keep the loop visible
    const std::size_t nf = funcs_or(opt, 32);
    const std::vector<Functional> funcs =
        sample_functionals(2, nf, derive_seed(opt.seed, 31));
    std::size_t looped = 0, computed = 0;
    for (const Functional& f : funcs) {
      const auto bbox =
          image_bbox(fx.scene, fx.frame, fx.grid, f, 2, opt.threads);
      if (!bbox) continue;
      const GridSpec ig = fit_value_grid(*bbox, img_cell_fine, 5, 63);
      const VoxelSet img = project_scene_image(fx.scene, fx.frame, fx.grid, f,
                                               ig, 2, opt.threads);
      const BettiVector bv = betti_numbers(img, opt.field);
      ++computed;
      if (!bv.empty_set && bv.b.size() == 5 && bv.b[1] >= 1) ++looped;
    }
    const std::size_t required =
        static_cast<std::size_t>(std::ceil(0.9 * static_cast<double>(nf)));
    ojson in;
    in["functionals"] = nf;
    in["computed"] = computed;
    in["with_loop"] = looped;
    in["required"] = required;
    rep.add(make_row("images-keep-loop", in, looped >= required, "reference"));
  }

  {  // the sampled hull reproduces the set
    std::vector<Functional> funcs = {f_first, f_ident};
    const std::vector<Functional> extra =
        sample_functionals(2, funcs_or(opt, 24), derive_seed(opt.seed, 32));
    funcs.insert(funcs.end(), extra.begin(), extra.end());
    HullParams hp;
    hp.threads = opt.threads;
    hp.image_target_cell_frac = 0.8;
    hp.image_cells_max = 63;
    const VoxelSet hull =
        h_hull_sampled(fx.scene, fx.frame, fx.grid, funcs, hp);
    const double d = hausdorff_distance_cells(hull, raster);
    ojson in;
    in["functionals"] = funcs.size();
    in["hull_cells"] = hull.cell_count();
    in["raster_cells"] = raster.cell_count();
    CheckRow r =
        make_row("hull-matches-set", in, d <= tol_or(opt, 2.0), "reference");
    attach_hausdorff(r, d);
    rep.add(r);
  }

  {  // two strands joined at a point: contractible
    const VoxelSet r3 = rasterize(fx3.scene, fx3.frame, fx3.grid, opt.threads);
    const BettiVector bv = betti_numbers(r3, opt.field);
    const bool pass = !bv.empty_set && bv.b.size() == 4 && bv.b[0] == 1 &&
                      bv.b[1] == 0 && bv.b[2] == 0 && bv.b[3] == 0;
    ojson in;
    in["cells"] = r3.cell_count();
    CheckRow r = make_row("two-strand-contractible", in, pass, "reference");
    attach_betti(r, bv);
    rep.add(r);
  }

  return rep;
}

// --- example2 --------------------------------------------------------------
CheckReport fixture_example2(const RunOptions& opt) {
  CheckReport rep;
  rep.name = "example2";
  rep.seed = opt.seed;
  rep.config_json = detail::options_json(opt).dump();

  const FixtureScene shell = load_fixture_scene(opt, "example2_s4plus.json");
  const FixtureScene solid = load_fixture_scene(opt, "example2_solid.json");
  const VoxelSet shell_raster =
      rasterize(shell.scene, shell.frame, shell.grid, opt.threads);
  const VoxelSet solid_raster =
      rasterize(solid.scene, solid.frame, solid.grid, opt.threads);

  {  // one piece
    const std::uint32_t comp = component_count(shell_raster, Adjacency::kFace);
    ojson in;
    in["cells"] = shell_raster.cell_count();
    in["components"] = comp;
    rep.add(make_row("raster-connected", in, comp == 1, "reference"));
  }

  {  // the cut shell is a proper subset of the solid set
    const bool subset = shell_raster.bits.is_subset_of(solid_raster.bits);
    const bool fewer = shell_raster.cell_count() < solid_raster.cell_count();
    ojson in;
    in["shell_cells"] = shell_raster.cell_count();
    in["solid_cells"] = solid_raster.cell_count();
    in["subset"] = subset;
    rep.add(make_row("shell-smaller-than-solid", in, subset && fewer,
                     "reference"));
  }

  {  // every sampled section escapes: no third homology
    const std::size_t nl = lines_or(opt, 64);
    const std::vector<HLine> lines =
        sample_scene_lines(shell_raster, nl, derive_seed(opt.seed, 41));
    const SectionSurvey sv =
        section_survey(shell.scene, lines, 21, opt.field, opt.threads);
    rep.add(make_row("sections-vanishing-h3", detail::survey_json(sv),
                     sv.quasiconvex_pass(), "reference"));
  }

  {  // line-wise combination marks nothing beyond the set
    const CandidateFamily fam = hcombn_candidates(
        shell.scene, shell.frame, shell.grid, 400, 400,
        derive_seed(opt.seed, 42), opt.threads);
    const DirectionSample dirs =
        DirectionSample::unit_sphere(2, 16, derive_seed(opt.seed, 43));
    HCombNParams hp;
    hp.section_cells = 13;
    hp.threads = opt.threads;
    const VoxelSet hn = hcomb_n(shell.scene, fam.candidates, dirs, hp);
    const double d = hausdorff_distance_cells(hn, fam.base);
    ojson in;
    in["candidate_cells"] = fam.candidates.cell_count();
    in["base_cells"] = fam.base.cell_count();
    in["result_cells"] = hn.cell_count();
    in["directions"] = dirs.count();
    CheckRow r =
        make_row("hcombn-stable", in, d <= tol_or(opt, 1.0), "reference");
    attach_hausdorff(r, d);
    rep.add(r);
  }

  {  // sections of the solid set are acyclic (convex sections)
    const std::size_t nl = lines_or(opt, 64);
    const std::vector<HLine> lines =
        sample_scene_lines(solid_raster, nl, derive_seed(opt.seed, 44));
    const SectionSurvey sv =
        section_survey(solid.scene, lines, 21, opt.field, opt.threads);
    rep.add(make_row("solid-sections-acyclic", detail::survey_json(sv),
                     sv.strong_convexity_pass(), "analytic"));
  }

  return rep;
}

// --- polyhedron ------------------------------------------------------------
SceneNodePtr pairing_ball_node(const Functional& f,
                               const std::vector<double>& center,
                               double radius) {
  const Affine A = pairing_affine(f);
  const std::size_t cols = A.cols;
  std::vector<SceneNode::QuadTerm> terms;
  std::vector<double> g(cols, 0.0);
  double off = -radius * radius;
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t a = 0; a < cols; ++a) {
      const double ar = A.at(r, a);
      if (ar == 0.0) continue;
      g[a] += -2.0 * center[r] * ar;
      for (std::size_t b = a; b < cols; ++b) {
        const double coef = ar * A.at(r, b) * (a == b ? 1.0 : 2.0);
        if (coef != 0.0) {
          terms.push_back({static_cast<std::uint32_t>(a),
                           static_cast<std::uint32_t>(b), coef});
        }
      }
    }
    off += center[r] * center[r];
  }
  // Merge duplicate (a, b) terms accumulated across rows.
  std::vector<SceneNode::QuadTerm> merged;
  for (const auto& t : terms) {
    bool found = false;
    for (auto& m : merged) {
      if (m.r == t.r && m.c == t.c) {
        m.coef += t.coef;
        found = true;
        break;
      }
    }
    if (!found) merged.push_back(t);
  }
  return scene_quad(std::move(merged), std::move(g), off, Relation::kLE);
}

}  // namespace

FixtureScene polyhedron_fixture() {
  FixtureScene fx;
  fx.name = "polyhedron";
  const Functional f1 = {Quaternion(1, 0, 0, 0), Quaternion(0, 0, 0, 0)};
  const Functional f2 = {Quaternion(0, 0, 0, 0), Quaternion(1, 0, 0, 0)};
  const Functional f3 = {Quaternion(1, 0, 0, 0),
                         Quaternion(0.5, 0.5, 0.5, 0.5)};
  fx.scene.ambient_n = 2;
  fx.scene.root = scene_and({
      pairing_ball_node(f1, {0.1, 0, 0, 0}, 0.9),
      pairing_ball_node(f2, {0, 0, 0, 0}, 0.9),
      pairing_ball_node(f3, {0, 0, 0, 0}, 0.7),
  });
  fx.scene.bound = SceneBound{{0, 0, 0, 0, 0, 0, 0, 0}, 1.35};

  // 4D slice frame: vary the first quaternion coordinate, hold the second at
  // an interior value.
  fx.frame.ambient_n = 2;
  fx.frame.origin = {0, 0, 0, 0, 0.3, 0, 0, 0};
  for (std::size_t a = 0; a < 4; ++a) {
    std::vector<double> axis(8, 0.0);
    axis[a] = 1.0;
    fx.frame.axes.push_back(axis);
  }
  fx.frame.validate();
  fx.grid = make_cube_grid(4, -1.2, 1.2, 21);
  return fx;
}

namespace {

CheckReport fixture_polyhedron(const RunOptions& opt) {
  CheckReport rep;
  rep.name = "polyhedron";
  rep.seed = opt.seed;
  rep.config_json = detail::options_json(opt).dump();

  FixtureScene fx = polyhedron_fixture();
  detail::apply_resolution(fx.grid, opt.resolution);
  const VoxelSet raster = rasterize(fx.scene, fx.frame, fx.grid, opt.threads);

  {  // the slice base point is in the set
    const bool inside = scene_contains(fx.scene, fx.frame.origin);
    ojson in;
    in["cells"] = raster.cell_count();
    rep.add(make_row("slice-origin-in-set", in, inside && raster.cell_count() > 0,
                     "definition"));
  }

  {  // slice of an intersection of pairing-ball constraints: convex, so
     // contractible
    const BettiVector bv = betti_numbers(raster, opt.field);
    ojson in;
    in["cells"] = raster.cell_count();
    CheckRow r = make_row("slice-betti-point", in, bv.is_point_like(),
                          "analytic");
    attach_betti(r, bv);
    rep.add(r);
  }

  {  // sections remain acyclic
    const std::size_t nl = lines_or(opt, 32);
    const std::vector<HLine> lines =
        sample_scene_lines(raster, nl, derive_seed(opt.seed, 51));
    const SectionSurvey sv =
        section_survey(fx.scene, lines, 13, opt.field, opt.threads);
    rep.add(make_row("sections-vanishing-h3", detail::survey_json(sv),
                     sv.quasiconvex_pass(), "analytic"));
    rep.add(make_row("sections-acyclic", detail::survey_json(sv),
                     sv.strong_convexity_pass(), "analytic"));
  }

  {  // hull of the convex slice is the slice
    const std::size_t nf = funcs_or(opt, 16);
    const std::vector<Functional> funcs =
        sample_functionals(2, nf, derive_seed(opt.seed, 52));
    HullParams hp;
    hp.threads = opt.threads;
    const VoxelSet hull =
        h_hull_sampled(fx.scene, fx.frame, fx.grid, funcs, hp);
    const double d = hausdorff_distance_cells(hull, raster);
    ojson in;
    in["functionals"] = nf;
    in["hull_cells"] = hull.cell_count();
    in["raster_cells"] = raster.cell_count();
    CheckRow r =
        make_row("hull-matches-slice", in, d <= tol_or(opt, 2.0), "analytic");
    attach_hausdorff(r, d);
    rep.add(r);
  }

  return rep;
}

}  // namespace

CheckReport run_fixture(const std::string& name, const RunOptions& opt) {
  if (name == "ball_h1") return fixture_ball_h1(opt);
  if (name == "shell_h1") return fixture_shell_h1(opt);
  if (name == "example1") return fixture_example1(opt);
  if (name == "example2") return fixture_example2(opt);
  if (name == "polyhedron") return fixture_polyhedron(opt);
  throw std::invalid_argument("unknown fixture: " + name);
}

}  // namespace hxconv
