#pragma once
// Internal helpers shared by the fixture and suite runners.  Not installed.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "hxconv/fixtures.hpp"
#include "hxconv/raster.hpp"
#include "hxconv/voxel.hpp"

namespace hxconv::detail {

using ojson = nlohmann::ordered_json;

inline std::vector<std::uint64_t> betti_u64(const BettiVector& bv) {
  std::vector<std::uint64_t> out;
  out.reserve(bv.b.size());
  for (long long v : bv.b) {
    out.push_back(v > 0 ? static_cast<std::uint64_t>(v) : 0u);
  }
  return out;
}

inline CheckRow make_row(std::string id, const ojson& inputs, bool pass,
                         std::string provenance) {
  CheckRow r;
  r.id = std::move(id);
  r.inputs_json = inputs.dump();
  r.pass = pass;
  r.provenance = std::move(provenance);
  return r;
}

inline void attach_betti(CheckRow& r, const BettiVector& bv) {
  r.betti = betti_u64(bv);
  r.has_betti = true;
}

inline void attach_hausdorff(CheckRow& r, double d) {
  r.hausdorff_cells = d;
  r.has_hausdorff = true;
}

inline double tol_or(const RunOptions& o, double def) {
  return o.tolerance >= 0.0 ? o.tolerance : def;
}

inline std::size_t lines_or(const RunOptions& o, std::size_t def) {
  return o.lines ? o.lines : def;
}

inline std::size_t funcs_or(const RunOptions& o, std::size_t def) {
  return o.functionals ? o.functionals : def;
}

inline std::size_t trials_or(const RunOptions& o, std::size_t def) {
  return o.trials ? o.trials : def;
}

inline void apply_resolution(GridSpec& g, std::uint32_t cells) {
  if (!cells) return;
  for (auto& ax : g.axes) ax.cells = cells;
  g.validate();
}

inline ojson grid_cells_json(const GridSpec& g) {
  ojson arr = ojson::array();
  for (const auto& ax : g.axes) arr.push_back(ax.cells);
  return arr;
}

inline ojson survey_json(const SectionSurvey& sv) {
  ojson j;
  j["lines"] = sv.sections.size();
  j["nonempty"] = sv.nonempty_count;
  j["empty"] = sv.empty_count;
  j["b3_failures"] = sv.b3_failures;
  j["acyclic_failures"] = sv.acyclic_failures;
  return j;
}

inline const char* field_name(HomologyField f) {
  return f == HomologyField::kMod2 ? "mod2" : "rational";
}

inline ojson options_json(const RunOptions& o) {
  ojson j;
  j["seed"] = o.seed;
  j["field"] = field_name(o.field);
  j["resolution"] = o.resolution;
  j["tolerance"] = o.tolerance;
  j["lines"] = o.lines;
  j["functionals"] = o.functionals;
  j["radius"] = o.radius;
  j["trials"] = o.trials;
  return j;
}

// Uniform point in the closed 4-ball of radius R (deterministic rejection).
inline std::vector<double> random_in_ball4(std::uint64_t& st, double R) {
  for (;;) {
    std::vector<double> p(4);
    double s = 0.0;
    for (auto& v : p) {
      v = uniform_in(st, -R, R);
      s += v * v;
    }
    if (s <= R * R) return p;
  }
}

}  // namespace hxconv::detail
