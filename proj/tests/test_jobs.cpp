#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "isothermic/error.hpp"
#include "isothermic/jobs.hpp"

using namespace isothermic;
namespace fs = std::filesystem;

namespace {

const char* kCyclide = R"({"construction":{"family":"cyclide","n":2,"m":1,"c":1.0},
  "checks":["conformality","adaptedness","cp_net","dupin"],"resolution":9})";

const char* kSphereFactor = R"({"construction":{"family":"product","parts":[
    {"kind":"line","point":[0],"direction":[1]},{"kind":"circle","radius":1.0,"range":[0.2,2.8]}]},
  "transform":{"kind":"darboux_sphere_factor"},
  "checks":["gnorm","darboux","christoffel","ribaucour_metric","ribaucour_reflection"],"resolution":7})";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("isothermic_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ISOTHERMIC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST(Config, RejectsSchemaViolations) {
  EXPECT_THROW(parse_config(Json::array()), ConfigError);
  EXPECT_THROW(parse_config(Json::parse(R"({"checks":[]})")), ConfigError);
  EXPECT_THROW(parse_config(Json::parse(R"({"construction":{},"resolution":2})")), ConfigError);
  EXPECT_THROW(parse_config(Json::parse(R"({"construction":{},"checks":["nope"]})")), ConfigError);
  EXPECT_THROW(parse_config(Json::parse(R"({"construction":{},"checks":["darboux"]})")), ConfigError);
  EXPECT_THROW(parse_config(Json::parse(R"({"construction":{},"tolerances":{"dupin":-1}})")), ConfigError);
  EXPECT_THROW(parse_config(Json::parse(R"({"construction":{},"export":{"format":"ply"}})")), ConfigError);
  EXPECT_THROW(parse_config(Json::parse(R"({"construction":{},"resolution":"many"})")), ConfigError);
  EXPECT_THROW(build_chart(Json::parse(R"({"family":"torus"})"), 5), ConfigError);
  EXPECT_THROW(build_chart(Json::parse(R"({"family":"product","parts":[{"kind":"circle","radius":-1}]})"), 5),
               ConfigError);
}

TEST(Config, TolerancesAndHash) {
  JobConfig a = parse_config(Json::parse(kCyclide));
  EXPECT_EQ(a.tolerance("dupin"), 1e-6);
  a.tolerance_scale = 10.0;
  EXPECT_DOUBLE_EQ(a.tolerance("dupin"), 1e-5);
  const JobConfig b = parse_config(Json::parse(kCyclide));
  EXPECT_EQ(b.hash(), parse_config(Json::parse(kCyclide)).hash());
  EXPECT_NE(a.hash(), b.hash());
}

TEST(Config, ExitCodes) {
  EXPECT_EQ(exit_code_for(ConfigError("x")), kExitConfig);
  EXPECT_EQ(exit_code_for(DomainError("x")), kExitConfig);
  EXPECT_EQ(exit_code_for(NullCongruence("x")), kExitDegenerate);
  EXPECT_EQ(exit_code_for(IntegratorAccuracy("x")), kExitDegenerate);
  EXPECT_EQ(exit_code_for(CompatibilityFailure("x")), kExitFail);
}

TEST(Jobs, ReportPassesForCyclide) {
  const JobConfig cfg = parse_config(Json::parse(kCyclide));
  const VerificationReport r = run_checks(cfg, cfg.construction, cfg.resolution);
  EXPECT_TRUE(r.pass());
  ASSERT_EQ(r.checks.size(), 4u);
  const Json j = r.to_json();
  EXPECT_EQ(j.at("config_hash").get<std::string>().size(), 16u);
  EXPECT_FALSE(j.dump().find("time") != std::string::npos);
}

TEST(Jobs, PerturbationFailsHonestly) {
  Json j = Json::parse(kCyclide);
  j["construction"]["perturb"] = 0.01;
  const JobConfig cfg = parse_config(j);
  EXPECT_FALSE(run_checks(cfg, cfg.construction, cfg.resolution).pass());
}

TEST(Jobs, ChristoffelVerdictOnDarbouxData) {
  const JobConfig cfg = parse_config(Json::parse(kSphereFactor));
  const VerificationReport r = run_checks(cfg, cfg.construction, cfg.resolution);
  for (const auto& c : r.checks) {
    if (c.check == "christoffel") {
      EXPECT_EQ(c.verdict, "neither");
      EXPECT_FALSE(c.pass);
    } else {
      EXPECT_TRUE(c.pass) << c.check << " " << c.residual;
    }
  }
}

TEST(Jobs, ExportsHaveExpectedShape) {
  const fs::path out = scratch("export");
  JobConfig cfg = parse_config(Json::parse(kCyclide));
  ASSERT_EQ(cmd_generate(cfg, out), kExitPass);
  ASSERT_EQ(cmd_export(cfg, out), kExitPass);
  std::ifstream obj(out / "chart.obj");
  int v = 0, f = 0;
  for (std::string line; std::getline(obj, line);) {
    if (line.rfind("v ", 0) == 0) ++v;
    if (line.rfind("f ", 0) == 0) ++f;
  }
  const int r = cfg.resolution;
  EXPECT_EQ(v, r * r);
  EXPECT_EQ(f, 2 * (r - 1) * (r - 1));
  // Triangulated square grid: V - E + F = 1 with E = 3(r-1)^2 + 2(r-1).
  const int e = 3 * (r - 1) * (r - 1) + 2 * (r - 1);
  EXPECT_EQ(v - e + f, 1);

  cfg.export_format = "csv";
  ASSERT_EQ(cmd_export(cfg, out), kExitPass);
  std::ifstream csv(out / "chart.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(std::count(header.begin(), header.end(), ',') + 1, 2 + 3);
  int rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  EXPECT_EQ(rows, r * r);
  for (const auto& entry : fs::directory_iterator(out)) EXPECT_NE(entry.path().extension(), ".tmp");
}

TEST(Jobs, VerifyNeedsArtifacts) {
  const fs::path out = scratch("missing");
  EXPECT_THROW(cmd_verify(parse_config(Json::parse(kCyclide)), out), ArtifactError);
}

TEST(Cli, EndToEndAndDeterminism) {
  const fs::path dir = scratch("cli");
  const fs::path cfg = write_config(dir, kSphereFactor);
  const std::string base = "--config " + cfg.string() + " --out " + (dir / "out").string();
  ASSERT_EQ(run_cli("generate " + base), 0);
  ASSERT_EQ(run_cli("transform " + base), 0);
  // The christoffel check fails by design on Darboux data.
  EXPECT_EQ(run_cli("verify " + base), 1);
  const std::string first = slurp(dir / "out" / "report.json");
  EXPECT_EQ(run_cli("verify " + base), 1);
  EXPECT_EQ(first, slurp(dir / "out" / "report.json"));
  EXPECT_EQ(run_cli("export " + base), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "transform.obj"));
}

TEST(Cli, ExitCodesForBadInput) {
  const fs::path dir = scratch("cli_bad");
  EXPECT_EQ(run_cli("generate --config " + (dir / "absent.json").string()), 2);
  const fs::path bad = write_config(dir, R"({"construction":{"family":"cyclide","n":2,"m":2}})");
  EXPECT_EQ(run_cli("generate --config " + bad.string() + " --out " + (dir / "o").string()), 2);
  // A straight line has no Frenet frame.
  const fs::path flat = write_config(
      dir, R"({"construction":{"family":"product","parts":[{"kind":"line","point":[0,0],"direction":[1,0]},
              {"kind":"circle"}]},"transform":{"kind":"darboux_curve","initial":[1.0,0.0,1.0]}})");
  const std::string base = "--config " + flat.string() + " --out " + (dir / "n").string();
  ASSERT_EQ(run_cli("generate " + base), 0);
  EXPECT_EQ(run_cli("transform " + base), 3);
  EXPECT_EQ(run_cli("verify --config " + flat.string() + " --out " + (dir / "empty").string()), 2);
}
