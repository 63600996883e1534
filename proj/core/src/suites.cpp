// Randomized property suites: each suite draws seeded instances of a set
// class, runs one library construction on every instance, and records one
// check row per trial (plus shared precondition rows where needed).  All
// randomness flows from RunOptions::seed through derive_seed, so reports are
// reproducible byte-for-byte.
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <stdexcept>

#include "fixtures_detail.hpp"
#include "hxconv/fixtures.hpp"

namespace hxconv {

using detail::attach_betti;
using detail::attach_hausdorff;
using detail::make_row;
using detail::ojson;
using detail::tol_or;
using detail::trials_or;

namespace {

std::string trial_id(const char* prefix, std::size_t t) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s-%02zu", prefix, t);
  return buf;
}

// Uniform point in the d-dimensional ball of radius R: gaussian direction
// scaled by u^(1/d).
std::vector<double> random_in_ball(std::uint64_t& st, std::size_t d,
                                   double R) {
  std::vector<double> p(d);
  double nsq = 0.0;
  do {
    nsq = 0.0;
    for (auto& v : p) {
      const double u = std::clamp(u01(st), 1e-12, 1.0 - 1e-12);
      v = inv_normal_cdf(u);
      nsq += v * v;
    }
  } while (nsq < 1e-12);
  const double scale =
      R * std::pow(std::max(u01(st), 1e-300), 1.0 / static_cast<double>(d)) /
      std::sqrt(nsq);
  for (auto& v : p) v *= scale;
  return p;
}

HPoint hpoint_from(const std::vector<double>& coords) {
  if (coords.size() % 4 != 0) {
    throw std::invalid_argument("hpoint_from: length not a multiple of 4");
  }
  HPoint p(coords.size() / 4);
  for (std::size_t k = 0; k < p.size(); ++k) {
    p[k] = Quaternion(coords[4 * k], coords[4 * k + 1], coords[4 * k + 2],
                      coords[4 * k + 3]);
  }
  return p;
}

FixtureScene load_named_fixture(const std::string& name,
                                const RunOptions& opt) {
  if (name == "polyhedron") {
    FixtureScene fx = polyhedron_fixture();
    detail::apply_resolution(fx.grid, opt.resolution);
    return fx;
  }
  const char* file = nullptr;
  if (name == "ball_h1") file = "ball_h1.json";
  if (name == "shell_h1") file = "shell_h1.json";
  if (name == "example1") file = "example1_k.json";
  if (name == "example2") file = "example2_s4plus.json";
  if (!file) throw std::invalid_argument("unknown fixture: " + name);
  const std::string dir = resolve_fixtures_dir(opt.fixtures_dir);
  FixtureScene fx = load_scene_file(dir + "/" + file);
  detail::apply_resolution(fx.grid, opt.resolution);
  return fx;
}

// ---------------------------------------------------------------------------
// Hull idempotence: the sampled hull, re-read as a scene, is stable under
// line-wise combination — running the combination over the hull plus near-
// and far-field probe cells adds nothing beyond grid tolerance.
// ---------------------------------------------------------------------------
CheckReport suite_theorem1(const RunOptions& opt) {
  CheckReport rep;
  rep.name = "theorem1";
  rep.seed = opt.seed;
  rep.config_json = detail::options_json(opt).dump();

  const std::vector<std::string> names = fixture_names();
  for (std::size_t fi = 0; fi < names.size(); ++fi) {
    const std::string& name = names[fi];
    const FixtureScene fx = load_named_fixture(name, opt);
    const std::uint64_t fseed = derive_seed(opt.seed, 3000 + fi);

    std::vector<Functional> funcs = sample_functionals(
        fx.scene.ambient_n, detail::funcs_or(opt, 16), derive_seed(fseed, 1));
    HullParams hp;
    hp.threads = opt.threads;
    hp.image_cells_max = 63;
    if (name == "example1") {
      // Tight per-axis cuts for the anisotropic window; see the fixture.
      funcs.push_back({Quaternion(1), Quaternion(0)});
      funcs.push_back({Quaternion(1), Quaternion(0, -2, 0, 0)});
      hp.image_target_cell_frac = 0.8;
    }
    const auto hull = std::make_shared<VoxelSet>(
        h_hull_sampled(fx.scene, fx.frame, fx.grid, funcs, hp));

    const SceneSet hull_scene = scene_from_voxels(hull);
    const CandidateFamily fam =
        hcombn_candidates(hull_scene, fx.frame, fx.grid, 200, 200,
                          derive_seed(fseed, 2), opt.threads);
    const DirectionSample dirs = DirectionSample::unit_sphere(
        fx.scene.ambient_n, 12, derive_seed(fseed, 3));
    HCombNParams cp;
    cp.section_cells = 13;
    cp.threads = opt.threads;
    const VoxelSet combined = hcomb_n(hull_scene, fam.candidates, dirs, cp);
    const double d = hausdorff_distance_cells(combined, *hull);

    ojson in;
    in["fixture"] = name;
    in["functionals"] = funcs.size();
    in["hull_cells"] = hull->cell_count();
    in["candidate_cells"] = fam.candidates.cell_count();
    in["combined_cells"] = combined.cell_count();
    in["directions"] = dirs.count();
    CheckRow r = make_row("idempotent:" + name, in, d <= tol_or(opt, 1.0),
                          "reference");
    attach_hausdorff(r, d);
    rep.add(r);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Intersections of ball intersections stay quasiconvex: for random convex
// A, B in H^2 every sampled line section of A, B, and A∩B has vanishing
// third homology.
// ---------------------------------------------------------------------------
SceneSet random_ball_intersection(std::uint64_t& st, std::size_t n_balls,
                                  ojson* desc) {
  std::vector<SceneNodePtr> kids;
  SceneBound bound;
  double best_r = 0.0;
  *desc = ojson::array();
  for (std::size_t j = 0; j < n_balls; ++j) {
    const std::vector<double> c = random_in_ball(st, 8, 0.5);
    double cn = 0.0;
    for (double v : c) cn += v * v;
    cn = std::sqrt(cn);
    const double r = uniform_in(st, cn + 0.2, 1.0);
    kids.push_back(scene_ball(c, r, Relation::kLE));
    desc->push_back({{"center_norm", cn}, {"radius", r}});
    if (j == 0 || r < best_r) {
      best_r = r;
      bound = SceneBound{c, r};
    }
  }
  SceneSet s;
  s.ambient_n = 2;
  s.root = scene_and(std::move(kids));
  s.bound = bound;
  return s;
}

std::vector<HLine> lines_through_core(std::uint64_t seed, std::size_t count) {
  const DirectionSample dirs = DirectionSample::unit_sphere(2, count, seed);
  std::uint64_t st = derive_seed(seed, 0xB);
  std::vector<HLine> lines(count);
  for (std::size_t i = 0; i < count; ++i) {
    lines[i].base = hpoint_from(random_in_ball(st, 8, 0.15));
    lines[i].dir = dirs.items[i];
  }
  return lines;
}

CheckReport suite_theorem4(const RunOptions& opt) {
  CheckReport rep;
  rep.name = "theorem4";
  rep.seed = opt.seed;
  rep.config_json = detail::options_json(opt).dump();

  const std::size_t trials = trials_or(opt, 50);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t ts = derive_seed(opt.seed, 4000 + t);
    std::uint64_t st = derive_seed(ts, 1);

    // Every ball contains ball(0, 0.2), so A, B, and A∩B all do.
    ojson desc_a, desc_b;
    const std::size_t na = 3 + static_cast<std::size_t>(u01(st) * 4.0);
    const std::size_t nb = 3 + static_cast<std::size_t>(u01(st) * 4.0);
    const SceneSet a = random_ball_intersection(st, na, &desc_a);
    const SceneSet b = random_ball_intersection(st, nb, &desc_b);
    SceneSet both;
    both.ambient_n = 2;
    both.root = scene_and({a.root, b.root});
    both.bound = a.bound->radius <= b.bound->radius ? a.bound : b.bound;

    const SectionSurvey sa = quasiconvex_check(
        a, lines_through_core(derive_seed(ts, 2), detail::lines_or(opt, 8)),
        13, opt.field, opt.threads);
    const SectionSurvey sb = quasiconvex_check(
        b, lines_through_core(derive_seed(ts, 3), detail::lines_or(opt, 8)),
        13, opt.field, opt.threads);
    const SectionSurvey sab = quasiconvex_check(
        both,
        lines_through_core(derive_seed(ts, 4), 2 * detail::lines_or(opt, 8)),
        13, opt.field, opt.threads);

    ojson in;
    in["balls_a"] = desc_a;
    in["balls_b"] = desc_b;
    in["survey_a"] = detail::survey_json(sa);
    in["survey_b"] = detail::survey_json(sb);
    in["survey_intersection"] = detail::survey_json(sab);
    const bool pass = sa.quasiconvex_pass() && sb.quasiconvex_pass() &&
                      sab.quasiconvex_pass();
    rep.add(make_row(trial_id("trial", t), in, pass, "reference"));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Products of acyclic sets stay quasiconvex: random contractible box unions
// in H^1, paired into a cylinder product over H^2; sampled sections must
// have vanishing third homology.
// ---------------------------------------------------------------------------
struct BoxChain {
  VoxelSet vox;
  ojson desc;
  std::size_t attempts = 0;
  BettiVector betti;
};

BoxChain random_box_chain(std::uint64_t& st, HomologyField field) {
  const Frame frame = Frame::canonical(1, {0, 1, 2, 3});
  const GridSpec grid = make_cube_grid(4, -1.1, 1.1, 21);
  BoxChain out;
  for (out.attempts = 1; out.attempts <= 10; ++out.attempts) {
    const std::size_t n_boxes = 2 + static_cast<std::size_t>(u01(st) * 3.0);
    std::vector<std::array<double, 8>> boxes;  // lo[4], hi[4]
    std::array<double, 4> c{}, e{};
    for (std::size_t a = 0; a < 4; ++a) {
      c[a] = uniform_in(st, -0.4, 0.4);
      e[a] = uniform_in(st, 0.25, 0.45);
    }
    ojson desc = ojson::array();
    for (std::size_t j = 0; j < n_boxes; ++j) {
      if (j > 0) {
        std::array<double, 4> ne{};
        for (std::size_t a = 0; a < 4; ++a) {
          ne[a] = uniform_in(st, 0.25, 0.45);
          // Consecutive boxes overlap by at least 0.2 on every axis.
          const double slack = e[a] + ne[a] - 0.2;
          c[a] = std::clamp(c[a] + uniform_in(st, -slack, slack),
                            ne[a] - 1.05, 1.05 - ne[a]);
        }
        e = ne;
      }
      std::array<double, 8> box{};
      ojson jb = ojson::array();
      for (std::size_t a = 0; a < 4; ++a) {
        box[a] = c[a] - e[a];
        box[4 + a] = c[a] + e[a];
        jb.push_back({{"lo", box[a]}, {"hi", box[4 + a]}});
      }
      boxes.push_back(box);
      desc.push_back(jb);
    }

    VoxelSet v(frame, grid);
    const std::uint64_t total = grid.size();
    for (std::uint64_t lin = 0; lin < total; ++lin) {
      const std::vector<double> p = v.center_local(lin);
      for (const auto& box : boxes) {
        bool inside = true;
        for (std::size_t a = 0; a < 4 && inside; ++a) {
          inside = p[a] >= box[a] && p[a] <= box[4 + a];
        }
        if (inside) {
          v.set(lin);
          break;
        }
      }
    }

    // Certify contractibility; non-consecutive boxes may meet by accident
    // and close a loop, in which case the draw is rejected.
    const BettiVector bv = betti_numbers(v, field);
    if (bv.is_point_like()) {
      out.vox = std::move(v);
      out.desc = std::move(desc);
      out.betti = bv;
      return out;
    }
  }
  throw std::runtime_error("random_box_chain: no contractible draw in 10 tries");
}

CheckReport suite_lemma4(const RunOptions& opt) {
  CheckReport rep;
  rep.name = "lemma4";
  rep.seed = opt.seed;
  rep.config_json = detail::options_json(opt).dump();

  const std::size_t trials = trials_or(opt, 20);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t ts = derive_seed(opt.seed, 5000 + t);
    std::uint64_t st = derive_seed(ts, 1);
    const BoxChain f1 = random_box_chain(st, opt.field);
    const BoxChain f2 = random_box_chain(st, opt.field);
    const auto e1 = std::make_shared<VoxelSet>(f1.vox);
    const auto e2 = std::make_shared<VoxelSet>(f2.vox);
    const SceneSet prod = product_scene(e1, e2);

    const std::size_t nl = detail::lines_or(opt, 64);
    const DirectionSample dirs =
        DirectionSample::unit_sphere(2, nl, derive_seed(ts, 2));
    const std::vector<std::uint64_t> cells1 = e1->set_cells();
    const std::vector<std::uint64_t> cells2 = e2->set_cells();
    std::uint64_t bst = derive_seed(ts, 3);
    std::vector<HLine> lines(nl);
    for (std::size_t i = 0; i < nl; ++i) {
      const auto& p1 = e1->center_ambient(
          cells1[splitmix64(bst) % cells1.size()]);
      const auto& p2 = e2->center_ambient(
          cells2[splitmix64(bst) % cells2.size()]);
      std::vector<double> cat = p1;
      cat.insert(cat.end(), p2.begin(), p2.end());
      lines[i].base = hpoint_from(cat);
      lines[i].dir = dirs.items[i];
    }
    const SectionSurvey sv =
        quasiconvex_check(prod, lines, 21, opt.field, opt.threads);

    ojson in;
    in["factor1"] = {{"boxes", f1.desc},
                     {"attempts", f1.attempts},
                     {"cells", e1->cell_count()}};
    in["factor2"] = {{"boxes", f2.desc},
                     {"attempts", f2.attempts},
                     {"cells", e2->cell_count()}};
    in["survey"] = detail::survey_json(sv);
    rep.add(make_row(trial_id("trial", t), in, sv.quasiconvex_pass(),
                     "reference"));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Extremal points regenerate strictly convex sets: for random balls in H^1,
// the window combination of the extremal cells recovers the set (and the
// sampled hull agrees).
// ---------------------------------------------------------------------------
CheckReport suite_lemma1_n1(const RunOptions& opt) {
  CheckReport rep;
  rep.name = "lemma1_n1";
  rep.seed = opt.seed;
  rep.config_json = detail::options_json(opt).dump();

  const Frame frame = Frame::canonical(1, {0, 1, 2, 3});
  const GridSpec grid = make_cube_grid(4, -1.3, 1.3, 21);
  const std::size_t trials = trials_or(opt, 10);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t ts = derive_seed(opt.seed, 6000 + t);
    std::uint64_t st = derive_seed(ts, 1);
    const std::vector<double> c = detail::random_in_ball4(st, 0.3);
    const double r = uniform_in(st, 0.5, 0.75);

    SceneSet scene;
    scene.ambient_n = 1;
    scene.root = scene_ball(c, r, Relation::kLE);
    scene.bound = SceneBound{c, r};
    const VoxelSet raster = rasterize(scene, frame, grid, opt.threads);
    const VoxelSet bnd = boundary_shell(raster);

    const double r_disk = std::max(opt.radius, 2.5 * grid.cell_diagonal());
    const DirectionSample dirs =
        DirectionSample::unit_sphere(1, 12, derive_seed(ts, 2));
    ExtremalParams ep;
    ep.threads = opt.threads;
    const VoxelSet ext = h_extremal_points(scene, bnd, dirs, r_disk, ep);
    const VoxelSet recovered = h_combination(ext);
    const double d_set = hausdorff_distance_cells(recovered, raster);

    HullParams hp;
    hp.threads = opt.threads;
    const std::vector<Functional> funcs =
        sample_functionals(1, detail::funcs_or(opt, 16), derive_seed(ts, 3));
    const VoxelSet hull = h_hull_sampled(scene, frame, grid, funcs, hp);
    const double d_hull = hausdorff_distance_cells(recovered, hull);

    ojson in;
    in["ball"] = {{"center", c}, {"radius", r}};
    in["disk_radius"] = r_disk;
    in["boundary_cells"] = bnd.cell_count();
    in["extremal_cells"] = ext.cell_count();
    in["recovered_cells"] = recovered.cell_count();
    in["hull_cells"] = hull.cell_count();
    in["hausdorff_vs_hull"] = d_hull;
    const bool pass =
        d_set <= tol_or(opt, 2.0) && d_hull <= tol_or(opt, 2.0);
    CheckRow row = make_row(trial_id("trial", t), in, pass, "reference");
    attach_hausdorff(row, d_set);
    rep.add(row);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Double conjugation computes the hull in H^1: for random balls, the
// conjugate-of-conjugate agrees with the window combination at grid
// tolerance.
// ---------------------------------------------------------------------------
CheckReport suite_theorem2_n1(const RunOptions& opt) {
  CheckReport rep;
  rep.name = "theorem2_n1";
  rep.seed = opt.seed;
  rep.config_json = detail::options_json(opt).dump();

  const Frame frame = Frame::canonical(1, {0, 1, 2, 3});
  const GridSpec grid = make_cube_grid(4, -1.4, 1.4, 21);
  const std::size_t trials = trials_or(opt, 10);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t ts = derive_seed(opt.seed, 7000 + t);
    std::uint64_t st = derive_seed(ts, 1);
    const std::vector<double> c = detail::random_in_ball4(st, 0.15);
    const double r = uniform_in(st, 0.6, 0.8);

    SceneSet scene;
    scene.ambient_n = 1;
    scene.root = scene_ball(c, r, Relation::kLE);
    scene.bound = SceneBound{c, r};
    const VoxelSet raster = rasterize(scene, frame, grid, opt.threads);

    ConjugateHullInfo info;
    const VoxelSet via_dual =
        hull_via_conjugate_n1(raster, 0.0, 31, &info, opt.threads);
    const VoxelSet direct = h_combination(raster);
    const double d = hausdorff_distance_cells(via_dual, direct);

    ojson in;
    in["ball"] = {{"center", c}, {"radius", r}};
    in["eps"] = info.eps;
    in["dual_radius"] = info.dual_radius;
    in["dual_cells"] = info.dual_cells;
    in["dual_component_cells"] = info.dual_component_cells;
    in["set_cells"] = raster.cell_count();
    in["via_dual_cells"] = via_dual.cell_count();
    in["direct_cells"] = direct.cell_count();
    CheckRow row = make_row(trial_id("trial", t), in, d <= tol_or(opt, 2.0),
                            "reference");
    attach_hausdorff(row, d);
    rep.add(row);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Conjugates of convex bodies around the origin are connected, as are their
// one-sided quaternion rotates.
// ---------------------------------------------------------------------------
CheckReport suite_corollary4_n1(const RunOptions& opt) {
  CheckReport rep;
  rep.name = "corollary4_n1";
  rep.seed = opt.seed;
  rep.config_json = detail::options_json(opt).dump();

  const Frame frame = Frame::canonical(1, {0, 1, 2, 3});
  const GridSpec grid = make_cube_grid(4, -1.0, 1.0, 41);
  const std::size_t trials = trials_or(opt, 8);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t ts = derive_seed(opt.seed, 8000 + t);
    std::uint64_t st = derive_seed(ts, 1);
    const std::vector<double> c = detail::random_in_ball4(st, 0.1);
    double cn = 0.0;
    for (double v : c) cn += v * v;
    cn = std::sqrt(cn);
    const double r = uniform_in(st, 0.65, 0.8);

    SceneSet scene;
    scene.ambient_n = 1;
    scene.root = scene_ball(c, r, Relation::kLE);
    scene.bound = SceneBound{c, r};
    const VoxelSet raster = rasterize(scene, frame, grid, opt.threads);

    {  // precondition: the set is its own hull (it is convex)
      HullParams hp;
      hp.threads = opt.threads;
      const std::vector<Functional> funcs =
          sample_functionals(1, detail::funcs_or(opt, 8), derive_seed(ts, 2));
      const VoxelSet hull = h_hull_sampled(scene, frame, grid, funcs, hp);
      const double d = hausdorff_distance_cells(hull, raster);
      ojson in;
      in["ball"] = {{"center", c}, {"radius", r}};
      in["functionals"] = funcs.size();
      CheckRow row = make_row(trial_id("hull-precondition", t), in,
                              d <= tol_or(opt, 2.0), "reference");
      attach_hausdorff(row, d);
      rep.add(row);
    }

    // The conjugate of ball(c, r) with 0 interior is (up to the strictness
    // margin) the ball with center -conj(c)/(r^2-|c|^2), radius r/(r^2-|c|^2);
    // the dual window is sized to contain it with 30% headroom.
    const double W = 1.3 * (cn + r) / (r * r - cn * cn);
    const GridSpec dual_grid = make_cube_grid(4, -W, W, 21);
    const double eps_default = conjugate_default_eps(grid, cn + r);
    const double eps_alias = 1.15 * (2.0 * W) * 0.5 * grid.cell_diagonal();
    const double eps = std::max(eps_default, eps_alias);
    const VoxelSet dual = conjugate_set_n1(raster, dual_grid, eps, opt.threads);
    const std::uint32_t comp = component_count(dual, Adjacency::kFace);

    {
      ojson in;
      in["ball"] = {{"center", c}, {"radius", r}};
      in["eps"] = eps;
      in["dual_half_width"] = W;
      in["dual_cells_set"] = dual.cell_count();
      in["components"] = comp;
      rep.add(make_row(trial_id("conjugate-connected", t), in, comp == 1,
                       "reference"));
    }

    {  // right-rotates of the conjugate stay connected
      const DirectionSample rots =
          DirectionSample::unit_sphere(1, 8, derive_seed(ts, 3));
      const std::vector<std::uint64_t> cells = dual.set_cells();
      bool all_connected = !cells.empty();
      ojson comps = ojson::array();
      for (const HPoint& rot : rots.items) {
        const Quaternion q = rot[0];
        std::vector<std::vector<double>> pts;
        pts.reserve(cells.size());
        std::vector<std::pair<double, double>> bbox(
            4, {std::numeric_limits<double>::infinity(),
                -std::numeric_limits<double>::infinity()});
        for (const std::uint64_t lin : cells) {
          const std::vector<double> h = dual.center_local(lin);
          const Quaternion p = Quaternion(h[0], h[1], h[2], h[3]) * q;
          const std::vector<double> v = {p.w, p.x, p.y, p.z};
          for (std::size_t a = 0; a < 4; ++a) {
            bbox[a].first = std::min(bbox[a].first, v[a]);
            bbox[a].second = std::max(bbox[a].second, v[a]);
          }
          pts.push_back(v);
        }
        const GridSpec ig =
            fit_value_grid(bbox, dual_grid.axes[0].step(), 5, 63);
        VoxelSet img(frame, ig);
        for (const auto& v : pts) {
          if (const auto cell = img.cell_of_local(v)) img.set(*cell);
        }
        const VoxelSet fat = dilate_chebyshev(img, 1);
        const std::uint32_t rc = component_count(fat, Adjacency::kFace);
        comps.push_back(rc);
        all_connected = all_connected && rc == 1;
      }
      ojson in;
      in["rotations"] = rots.count();
      in["components_per_rotation"] = comps;
      rep.add(make_row(trial_id("rotates-connected", t), in, all_connected,
                       "reference"));
    }
  }
  return rep;
}

}  // namespace

CheckReport run_suite(const std::string& name, const RunOptions& opt) {
  if (name == "theorem1") return suite_theorem1(opt);
  if (name == "theorem4") return suite_theorem4(opt);
  if (name == "lemma4") return suite_lemma4(opt);
  if (name == "lemma1_n1") return suite_lemma1_n1(opt);
  if (name == "theorem2_n1") return suite_theorem2_n1(opt);
  if (name == "corollary4_n1") return suite_corollary4_n1(opt);
  throw std::invalid_argument("unknown suite: " + name);
}

}  // namespace hxconv
