// isothermic_cli: generate charts, compute transforms, run the verification
// suite and export meshes. Exit codes: 0 pass, 1 verification failure,
// 2 config/artifact error, 3 transform degeneracy.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "isothermic/error.hpp"
#include "isothermic/jobs.hpp"

namespace fs = std::filesystem;
using namespace isothermic;

int main(int argc, char** argv) {
  CLI::App app{"Conformal immersions in the light-cone model: constructions, transforms, residual checks"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> resolution;
  std::optional<double> tolerance_scale;
  app.add_option("--config", config_path, "job config (JSON)")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory (default: $ISOTHERMIC_OUT or ./isothermic_out)");
  app.add_option("--seed", seed, "seed for random tangent sampling");
  app.add_option("--resolution", resolution, "samples per axis (>= 3)");
  app.add_option("--tolerance-scale", tolerance_scale, "multiplier applied to every tolerance");

  auto* generate = app.add_subcommand("generate", "build a chart and write chart.json");
  auto* transform = app.add_subcommand("transform", "apply the configured transform to chart.json");
  auto* verify = app.add_subcommand("verify", "run the configured checks and write report.json");
  auto* export_cmd = app.add_subcommand("export", "write OBJ or CSV for chart.json (and transform.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    JobConfig cfg = load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (resolution) cfg.resolution = *resolution;
    if (tolerance_scale) cfg.tolerance_scale = *tolerance_scale;
    if (cfg.resolution < 3) throw ConfigError("resolution must be >= 3");
    if (!(cfg.tolerance_scale > 0.0)) throw ConfigError("tolerance scale must be positive");

    fs::path out = out_dir;
    if (out.empty()) {
      const char* env = std::getenv("ISOTHERMIC_OUT");
      out = env && *env ? fs::path(env) : fs::path("isothermic_out");
    }

    if (*generate) return cmd_generate(cfg, out);
    if (*transform) return cmd_transform(cfg, out);
    if (*verify) return cmd_verify(cfg, out);
    if (*export_cmd) return cmd_export(cfg, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kExitConfig;
}
