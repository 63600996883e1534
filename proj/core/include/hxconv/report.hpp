#pragma once
// Structured run reports.  A report is a named list of check rows; its body
// serialization is canonical and byte-stable across runs with the same seed
// and configuration (wall time is excluded from the body on purpose, so two
// runs can be compared byte-for-byte).

#include <cstdint>
#include <string>
#include <vector>

namespace hxconv {

// One verified property.  `inputs_json` and `config_json` hold serialized
// JSON objects (insertion order preserved); keeping them as strings keeps
// the public header free of third-party types.
struct CheckRow {
  std::string id;                   // stable machine-readable identifier
  std::string inputs_json = "{}";   // parameters and measured values
  std::vector<std::uint64_t> betti; // reduced-to-ranks homology, if computed
  bool has_betti = false;
  double hausdorff_cells = 0.0;     // set distance in cells, if computed
  bool has_hausdorff = false;
  bool pass = false;
  std::string provenance;           // "definition" | "analytic" | "reference"
};

struct CheckReport {
  std::string name;
  std::uint64_t seed = 0;
  std::string config_json = "{}";
  std::vector<CheckRow> checks;
  bool overall_pass = true;
  double wall_ms = 0.0;

  // Appends a row and folds its verdict into overall_pass.
  void add(CheckRow row);

  // Canonical serialization WITHOUT wall_ms: byte-identical for identical
  // seeds and configuration.
  std::string body_string() const;

  // body plus wall_ms, for human consumption / files on disk.
  std::string full_string() const;

  void write_file(const std::string& path) const;
};

}  // namespace hxconv
