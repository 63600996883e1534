#include "hxconv/report.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace hxconv {

namespace {

using ojson = nlohmann::ordered_json;

ojson parse_or_throw(const std::string& text, const char* what) {
  ojson j = ojson::parse(text, nullptr, false);
  if (j.is_discarded()) {
    throw std::invalid_argument(std::string("report: invalid JSON in ") + what);
  }
  return j;
}

ojson body_json(const CheckReport& r) {
  ojson j;
  j["name"] = r.name;
  j["seed"] = r.seed;
  j["config"] = parse_or_throw(r.config_json, "config");
  ojson rows = ojson::array();
  for (const CheckRow& c : r.checks) {
    ojson row;
    row["id"] = c.id;
    row["inputs"] = parse_or_throw(c.inputs_json, "check inputs");
    if (c.has_betti) {
      row["betti"] = c.betti;
    } else {
      row["betti"] = nullptr;
    }
    if (c.has_hausdorff && std::isfinite(c.hausdorff_cells)) {
      row["hausdorff_cells"] = c.hausdorff_cells;
    } else {
      row["hausdorff_cells"] = nullptr;
    }
    row["pass"] = c.pass;
    row["provenance"] = c.provenance;
    rows.push_back(std::move(row));
  }
  j["checks"] = std::move(rows);
  j["overall_pass"] = r.overall_pass;
  return j;
}

}  // namespace

void CheckReport::add(CheckRow row) {
  overall_pass = overall_pass && row.pass;
  checks.push_back(std::move(row));
}

std::string CheckReport::body_string() const { return body_json(*this).dump(2); }

std::string CheckReport::full_string() const {
  ojson j = body_json(*this);
  j["wall_ms"] = wall_ms;
  return j.dump(2);
}

void CheckReport::write_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("report: cannot open output file " + path);
  }
  out << full_string() << "\n";
}

}  // namespace hxconv
