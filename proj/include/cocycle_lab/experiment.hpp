#pragma once

#include "cocycle_lab/cocycle.hpp"
#include "cocycle_lab/group.hpp"
#include "cocycle_lab/io.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cocycle_lab::experiment {

using json = nlohmann::json;

const std::vector<std::string>& commands();

// Validated experiment description. Unknown fields are rejected with a JSON
// pointer to the offending entry.
struct ExperimentConfig {
  std::string command;
  json group;    // {"kind", "params"} | {"path"} | {"order", "table", ...}
  json psi;      // {"catalog", ...} | {"values"}
  json symbols;  // array of symbol specs
  std::vector<double> p;
  std::map<std::string, double> tolerances;
  std::uint64_t seed = 0;
  json output;   // {"json", "csv"}
  json options;  // command specific

  static ExperimentConfig from_json(const json& j);
  json to_json() const;
  double tol(const std::string& name, double fallback) const;
};

// Group, length function and (when available) cocycle named by a config.
struct Setup {
  GroupCarrier group;
  std::optional<LengthFunction> psi;
  std::shared_ptr<const Cocycle> cocycle;
  std::string group_id;
  std::vector<std::string> warnings;

  // The catalog cocycle, or one constructed from psi.
  std::shared_ptr<const Cocycle> require_cocycle();
  const LengthFunction& require_psi() const;
};

Setup load_setup(const ExperimentConfig& cfg);

struct RunResult {
  json report;
  std::vector<std::pair<std::string, io::CsvTable>> tables;
  bool pass = true;
};

// Executes the command's pipeline. Library errors propagate as cocycle_lab::Error.
RunResult run(const ExperimentConfig& cfg);

// Report without volatile fields (timing), as compared by golden files and
// determinism checks.
json stable_view(const json& report);

// Every numeric leaf below /results, tagged with a tolerance.
json make_golden(const json& report, double tol = 1e-6);

struct GoldenDiff {
  bool pass = true;
  std::vector<std::string> drifted;  // "pointer: expected x, got y (tol t)"
  std::vector<std::string> missing;
};

// |got - expected| <= tol (1 + |expected|) for every golden field.
GoldenDiff verify_golden(const json& report, const json& golden);

}  // namespace cocycle_lab::experiment
