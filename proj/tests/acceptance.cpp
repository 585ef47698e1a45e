// Desk-scale acceptance run: one PASS/FAIL line per criterion, exit status 1
// if any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "isothermic/constructions.hpp"
#include "isothermic/lightcone.hpp"
#include "isothermic/transforms.hpp"

using namespace isothermic;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kLightCone = 1e-10;
constexpr double kLightConeSeconds = 5.0;
constexpr double kFrameChange = 1e-8;
constexpr double kAlphaSplit = 1e-6;
constexpr double kAlphaSplitSeconds = 30.0;
constexpr double kIsothermic = 1e-7;
constexpr double kNegativeControl = 1e-7;
constexpr double kCp = 1e-7;
constexpr double kTwist = 1e-8;
constexpr double kChristoffel = 1e-7;
constexpr double kRibaucour = 1e-6;
constexpr double kReflection = 1e-8;
constexpr double kCommuting = 1e-7;
constexpr double kDarbouxExact = 1e-10;
constexpr double kDarbouxCurve = 1e-7;
constexpr double kDrift = 1e-9;
constexpr double kDupin = 1e-6;
constexpr double kCurvature = 1e-6;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

Vec random_vec(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = d(rng);
  return v;
}

Mat random_lorentz(std::mt19937_64& rng, int n) {
  Mat t = Mat::Identity(n, n);
  for (int k = 0; k < 3; ++k) {
    Vec v;
    do v = random_vec(rng, n);
    while (lorentz_inner(v, v) < 0.2);
    t = reflection_matrix(v / std::sqrt(lorentz_inner(v, v))) * t;
  }
  return t;
}

Box interval(double a, double b, int n = 9) { return Box::uniform(Vec::Constant(1, a), Vec::Constant(1, b), n); }
Chart unit_circle() { return make_chart("circle", circle(1.0), interval(0.2, 2.8)); }
Chart unit_line() { return make_chart("line", line(Vec::Zero(1), Vec::Ones(1)), interval(-1.0, 1.0)); }
Chart profile() {
  return make_chart("profile", Map::analytic(1, 2, [](const TVec& x) { return TVec{x[0], 2.0 + cos(x[0])}; }),
                    interval(-1.0, 1.0));
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* name, double v) {
  std::ostringstream s;
  s << name << "=" << v << " ";
  return s.str();
}

Outcome light_cone_identities() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1);
  double worst = 0.0;
  for (int big_n : {2, 3, 5}) {
    const MoebiusFrame f = MoebiusFrame::canonical(big_n).transformed(random_lorentz(rng, big_n + 2));
    for (int k = 0; k < 10000; ++k) {
      const Vec x = random_vec(rng, big_n), y = random_vec(rng, big_n);
      const double ident = lorentz_inner(f.psi(x), f.psi(y)) + 0.5 * (x - y).squaredNorm();
      worst = std::max(worst, std::abs(ident) / (1.0 + (x - y).squaredNorm()));
      const double scale = std::exp(random_vec(rng, 1)(0));
      worst = std::max(worst, (drop_point(f, scale * f.psi(x)) - x).norm() / (1.0 + x.norm()));
    }
  }
  const double t = seconds_since(start);
  return {worst <= kLightCone && t < kLightConeSeconds, fmt("residual", worst) + fmt("seconds", t)};
}

Outcome frame_change_decomposition() {
  std::mt19937_64 rng(2);
  double worst = 0.0, ratio = 0.0;
  for (int pair = 0; pair < 20; ++pair) {
    const int big_n = 3;
    // Frame pairs whose similarity ratio is extreme are resampled: the drop
    // then loses digits in the slice coordinate, not in the decomposition.
    MoebiusFrame f1 = MoebiusFrame::canonical(big_n), f2 = f1;
    do {
      f1 = MoebiusFrame::canonical(big_n).transformed(random_lorentz(rng, big_n + 2));
      f2 = f1.transformed(random_lorentz(rng, big_n + 2));
    } while (std::abs(lorentz_inner(f2.w(), f1.w())) < 1e-2 || std::abs(lorentz_inner(f2.w(), f1.w())) > 1e2);
    const FrameChange c = frame_change(f1, f2);
    ratio = std::max(ratio, std::abs(c.ratio + 0.5 * lorentz_inner(f2.w(), f1.w())));
    for (int k = 0; k < 1000; ++k) {
      // Points sent to infinity of the first frame have no image; stay away from them.
      Vec x;
      do x = random_vec(rng, big_n);
      while (std::abs(lorentz_inner(f2.psi(x), f1.w())) < 1e-3 * f2.psi(x).norm());
      const Vec direct = drop_point(f1, f2.psi(x));
      worst = std::max(worst, (apply_frame_change(f1, c, x) - direct).norm() / (1.0 + direct.norm()));
    }
  }
  return {worst <= kFrameChange && ratio <= kFrameChange, fmt("residual", worst) + fmt("ratio", ratio)};
}

Outcome alpha_split() {
  const Map bump = Map::analytic(2, 1, [](const TVec& u) { return TVec{1.0 + 0.3 * sin(u[0]) * cos(u[1])}; });
  double worst = 0.0, slowest = 0.0;
  auto run = [&](Chart c, const Map& phi) {
    c.box = c.box.with_resolution(33);
    const auto start = Clock::now();
    const auto r = verify_alpha_F_split(MoebiusFrame::canonical(c.ambient_dim()), c.finite_differenced(), phi);
    slowest = std::max(slowest, seconds_since(start));
    worst = std::max(worst, r.residual);
  };
  const double r = std::sqrt(0.5);
  const Chart torus = moore_family({{make_chart("c1", circle(r), interval(0.2, 2.8)), 2.0},
                                    {make_chart("c2", circle(r), interval(0.2, 2.8)), 2.0}},
                                   1.0);
  const Chart cy = cyclide(2, 1, 1.0);
  run(torus, Map::constant(2, Vec::Ones(1)));
  run(cy, Map::constant(2, Vec::Ones(1)));
  run(cy, *cy.factor);
  run(torus, bump);
  return {worst <= kAlphaSplit && slowest < kAlphaSplitSeconds, fmt("residual", worst) + fmt("seconds", slowest)};
}

Chart perturbed(const Chart& c, double eps) {
  Chart p = c;
  const int n = c.dim(), big_n = c.ambient_dim();
  p.map = combine(n, big_n, {c.map, Map::identity(n)}, [eps, n, big_n](const std::vector<TVec>& x) {
    const Taylor b = eps / std::sqrt(double(big_n)) * sin(x[1][0] + 0.7) * sin(x[1][std::size_t(n - 1)] + 0.3);
    TVec r = x[0];
    for (auto& v : r) v += b;
    return r;
  });
  return p;
}

Outcome moore_families() {
  const double r = std::sqrt(0.5);
  MooreOptions o;
  o.inversion_center = (Vec(4) << 3.0, 0.5, -0.2, 0.1).finished();
  const Factor c1{make_chart("c1", circle(1.0), interval(0.2, 2.8)), 1.0};
  const Factor cr{make_chart("cr", circle(r), interval(0.2, 2.8)), 2.0};
  std::vector<Chart> charts{
      moore_family({c1, c1}, 0.0, o),
      moore_family({cr, cr}, 1.0),
      theta_family(make_chart("geo", hyperbolic_geodesic(2, 0.5), interval(-1, 1), Ambient::lorentz), {c1, c1}, Vec(),
                   0.5),
      cyclide(2, 1, 0.5),
  };
  double worst = 0.0;
  for (const Chart& c : charts)
    worst = std::max({worst, conformality_check(c).residual, adaptedness_check(c, *c.net)});
  double control = std::numeric_limits<double>::infinity();
  for (const Chart& c : charts) {
    const Chart p = perturbed(c, 1e-2);
    control = std::min(control, std::max(conformality_check(p).residual, adaptedness_check(p, *c.net)));
  }
  return {worst <= kIsothermic && control > kNegativeControl, fmt("residual", worst) + fmt("control", control)};
}

Outcome cp_nets() {
  double cp = 0.0;
  for (const Chart& c : {cyclide(2, 1, 1.0), warped_product_chart(profile(), unit_circle())}) {
    const MetricJet induced = [&c](const Vec& u, int order) { return induced_metric(c.map, c.ambient, u, order); };
    cp = std::max(cp, net_geometry_report(induced, c.box, *c.net).cp_residual);
  }
  // dx^2 + rho(x)^2 dy^2, rho = x^2: eta_2 = -grad log rho = (-2/x, 0).
  const ProductNet net = ProductNet::from_sizes({1, 1});
  const Box box = Box::uniform((Vec(2) << 0.5, 0.2).finished(), (Vec(2) << 1.5, 1.2).finished(), 9);
  const BaseMetric b = BaseMetric::twisted(
      net, {[](const TVec& x) { return 0.0 * x[0] + 1.0; }, [](const TVec& x) { return x[0] * x[0]; }});
  const auto r = net_geometry_report(b, box, net);
  double twist = r.twist_residual.value_or(1.0);
  for (std::size_t s = 0; s < box.size(); ++s) {
    const double x = box.point(s)(0);
    twist = std::max(twist, (r.block_normal[s][1] - (Vec(2) << -2.0 / x, 0.0).finished()).norm());
  }
  return {cp <= kCp && twist <= kTwist, fmt("cp", cp) + fmt("twist", twist)};
}

Outcome christoffel() {
  const double a = 1.5;
  const ChristoffelResult p = christoffel_product(unit_circle(), unit_line(), a, Vec::Zero(3));
  const CombescureResult pc = combescure_transform(p.data);
  double metric = 0.0;
  for (std::size_t s = 0; s < p.data.host.box.size(); ++s) {
    const Vec u = p.data.host.box.point(s);
    metric = std::max(metric, (first_fundamental_form(p.transform, u) -
                               a * a * first_fundamental_form(p.data.host, u)).norm());
  }
  const bool v1 = check_christoffel(codazzi_tensor(p.data)).verdict == ChristoffelVerdict::christoffel;

  const Map gamma = Map::analytic(1, 2, [](const TVec& x) { return TVec{0.3 * x[0], exp(x[0])}; });
  const ChristoffelWarpedResult w = christoffel_warped(gamma, unit_circle(), 0.0, 1.0, 1.0, Vec::Zero(3));
  const CombescureResult wc = combescure_transform(w.data);
  const bool v2 = check_christoffel(codazzi_tensor(w.data)).verdict == ChristoffelVerdict::christoffel;
  double prim = 0.0;
  for (std::size_t k = 0; k < w.primitive.times().size(); ++k) {
    const double t = w.primitive.times()[k];
    const Vec& y = w.primitive.states()[k];
    prim = std::max({prim, std::abs(y(0) - 0.15 * (1.0 - std::exp(-2 * t))), std::abs(y(1) + std::exp(-t))});
  }
  const double diff = std::max(pc.differential_residual, wc.differential_residual);
  const bool ok = diff <= kChristoffel && metric <= kChristoffel && v1 && v2 && prim <= kChristoffel;
  return {ok, fmt("differential", diff) + fmt("metric", metric) + fmt("primitive", prim) +
                  "verdicts=" + (v1 && v2 ? "christoffel" : "other")};
}

std::vector<CombescureData> darboux_constructions(double* drift) {
  const Vec init = (Vec(3) << std::sqrt(2.0), 0.0, std::sqrt(2.0)).finished();
  const DarbouxCurveResult curve = darboux_curve_factor(circle(1.0), 0.2, 1.2, unit_line(), init);
  if (drift) *drift = curve.first_integral_drift;
  return {darboux_sphere_factor(unit_line(), unit_circle(), Vec::Zero(2), 1.0), darboux_warped(profile(), unit_circle()),
          curve.data};
}

Outcome ribaucour_relations() {
  double rel = 0.0, refl = 0.0, comm = 0.0;
  for (const CombescureData& d : darboux_constructions(nullptr)) {
    const RibaucourResult r = ribaucour_transform(d);
    const RibaucourResiduals res = verify_ribaucour_relations(d.host, r.chart, r.data);
    rel = std::max({rel, res.metric, res.connection, res.second_form});
    refl = std::max(refl, res.reflection);
    comm = std::max(comm, res.commuting);
  }
  return {rel <= kRibaucour && refl <= kReflection && comm <= kCommuting,
          fmt("relations", rel) + fmt("reflection", refl) + fmt("commuting", comm)};
}

Outcome darboux_condition() {
  double drift = 0.0;
  const auto data = darboux_constructions(&drift);
  double exact = 0.0, curve = 0.0;
  bool all = true;
  for (std::size_t k = 0; k < data.size(); ++k) {
    const DarbouxCheck c = check_darboux(codazzi_tensor(data[k]), ribaucour_transform(data[k]).data);
    all = all && c.darboux;
    (k < 2 ? exact : curve) = std::max(k < 2 ? exact : curve, c.residual);
  }
  return {all && exact <= kDarbouxExact && curve <= kDarbouxCurve && drift <= kDrift,
          fmt("exact", exact) + fmt("curve", curve) + fmt("drift", drift)};
}

Outcome cyclide_dupin() {
  double dupin = 0.0, curv = 0.0;
  bool mult = true;
  auto scan = [&](int n, std::vector<int> expect) {
    Chart c = cyclide(n, 1, 1.0);
    if (n == 3) c.box = c.box.with_resolution(5);
    const auto fields = principal_curvature_fields(c);
    for (std::size_t s = 0; s < fields.size(); ++s) {
      std::vector<int> got;
      for (const auto& cl : fields[s].clusters) {
        got.push_back(cl.multiplicity);
        dupin = std::max(dupin, cl.dupin);
      }
      std::sort(got.begin(), got.end());
      mult = mult && got == expect;
      const auto [k1, k2] = cyclide_curvatures(n, 1, 1.0, c.box.point(s));
      // The closed form fixes values up to a common sign and, for n = 2, up to
      // which cluster is the profile one.
      const auto& cl = fields[s].clusters;
      double best = std::numeric_limits<double>::infinity();
      if (cl.size() == 2) {
        for (double sign : {1.0, -1.0})
          for (int swap : {0, 1}) {
            const auto& p = cl[std::size_t(swap)];
            const auto& q = cl[std::size_t(1 - swap)];
            if (p.multiplicity != n - 1 || q.multiplicity != 1) continue;
            best = std::min(best, std::max(std::abs(sign * p.value - k1), std::abs(sign * q.value - k2)));
          }
      }
      curv = std::max(curv, best);
    }
  };
  scan(2, {1, 1});
  scan(3, {1, 2});
  return {mult && dupin <= kDupin && curv <= kCurvature,
          fmt("dupin", dupin) + fmt("curvature", curv) + "multiplicities=" + (mult ? "ok" : "bad")};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ISOTHERMIC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "isothermic_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "config.json") << R"({"construction":{"family":"cyclide","n":2,"m":1,"c":1.0},
    "checks":["conformality","adaptedness","cp_net","alpha_split","dupin"],"seed":7,"resolution":17})";
  const std::string args = "--config " + (dir / "config.json").string() + " --out " + (dir / "out").string();
  if (run_cli("generate " + args) != 0) return {false, "generate failed"};
  const int first = run_cli("verify " + args);
  const std::string a = slurp(dir / "out" / "report.json");
  const int second = run_cli("verify " + args);
  const std::string b = slurp(dir / "out" / "report.json");
  const bool same = !a.empty() && a == b && first == second;
  return {same, std::string("bytes=") + std::to_string(a.size()) + " exit=" + std::to_string(first)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"light-cone identities", light_cone_identities},
      {"frame-change decomposition", frame_change_decomposition},
      {"alpha split of the lift", alpha_split},
      {"Moore and Theta families", moore_families},
      {"CP and twisted nets", cp_nets},
      {"Christoffel constructions", christoffel},
      {"Ribaucour relations", ribaucour_relations},
      {"Darboux condition", darboux_condition},
      {"cyclide Dupin property", cyclide_dupin},
      {"verify determinism", determinism},
  };
  int failures = 0, index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
