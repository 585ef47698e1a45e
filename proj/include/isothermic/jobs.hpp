#pragma once

// Batch jobs behind the CLI: config parsing, chart and transform builders,
// the verification suite and its report.
//
// Config schema (JSON):
//   construction: {family: product | moore | theta | cyclide | warped, ...,
//                  perturb?: amplitude of a smooth mixed-term bump}
//   transform?:   {kind: darboux_sphere_factor | darboux_warped | darboux_curve |
//                  christoffel_product | christoffel_warped | trivial, ...}
//   checks:       list of check names (see check_names())
//   resolution, seed, tolerance_scale, tolerances {check: value},
//   export {format: obj | csv}, jets, finite_differences

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "isothermic/artifacts.hpp"
#include "isothermic/constructions.hpp"

namespace isothermic {

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitConfig = 2, kExitDegenerate = 3 };

// Central tolerance table; every entry can be overridden per check.
const std::map<std::string, double>& default_tolerances();
std::vector<std::string> check_names();

struct JobConfig {
  Json construction;
  std::optional<Json> transform;
  std::vector<std::string> checks;
  int resolution = 17;
  std::uint64_t seed = 20240917;
  double tolerance_scale = 1.0;
  std::map<std::string, double> tolerances;
  std::string export_format = "obj";
  bool jets = false;
  bool finite_differences = false;

  double tolerance(const std::string& check) const;
  // Normalized config after overrides; its dump is what the hash covers.
  Json effective() const;
  std::uint64_t hash() const;
};

// Throws ConfigError on schema violations.
JobConfig parse_config(const Json& j);
JobConfig load_config(const std::filesystem::path& path);

Chart build_chart(const Json& construction, int resolution);

struct TransformBuild {
  std::string kind;
  CombescureData data;
  bool ribaucour = false;           // f~ is the output; otherwise F
  std::optional<double> ode_drift;  // first integral (curve) or primitive monitor (warped)
  std::optional<double> curve_relation;
};
TransformBuild build_transform(const Json& construction, const Json& transform, int resolution);

struct CheckEntry {
  std::string check;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string verdict;  // christoffel only
};

struct VerificationReport {
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  int resolution = 0;
  std::vector<CheckEntry> checks;

  bool pass() const;
  Json to_json() const;
};

VerificationReport run_checks(const JobConfig& cfg, const Json& construction, int resolution,
                              Execution exec = Execution::parallel);

int exit_code_for(const std::exception& e);

// Each writes into `out` and returns an exit code; errors propagate as exceptions.
int cmd_generate(const JobConfig& cfg, const std::filesystem::path& out);
int cmd_transform(const JobConfig& cfg, const std::filesystem::path& out);
int cmd_verify(const JobConfig& cfg, const std::filesystem::path& out);
int cmd_export(const JobConfig& cfg, const std::filesystem::path& out);

}  // namespace isothermic
