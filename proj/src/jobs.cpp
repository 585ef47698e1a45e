#include "isothermic/jobs.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>

#include "isothermic/error.hpp"

namespace isothermic {

namespace fs = std::filesystem;

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> table{
      {"conformality", 1e-7},
      {"adaptedness", 1e-7},
      {"cp_net", 1e-7},
      {"alpha_split", 1e-6},
      {"dupin", 1e-6},
      {"gnorm", 1e-6},
      {"closedness", 1e-6},
      {"combescure_differential", 1e-7},
      {"rsff", 1e-6},
      {"christoffel", 1e-7},
      {"ribaucour_metric", 1e-6},
      {"ribaucour_connection", 1e-6},
      {"ribaucour_second_form", 1e-6},
      {"ribaucour_differential", 1e-6},
      {"ribaucour_reflection", 1e-8},
      {"ribaucour_commuting", 1e-7},
      {"darboux", 1e-7},
      {"first_integral", 1e-9},
      {"curve_relation", 1e-6},
  };
  return table;
}

std::vector<std::string> check_names() {
  std::vector<std::string> r;
  for (const auto& [k, v] : default_tolerances()) r.push_back(k);
  return r;
}

namespace {

const std::vector<std::string> kChartChecks{"conformality", "adaptedness", "cp_net", "alpha_split", "dupin"};

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

template <class T>
T require(const Json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  return get_or<T>(j, key, T{});
}

Vec vec_or(const Json& j, const char* key, const Vec& fallback) {
  if (!j.contains(key)) return fallback;
  const auto v = get_or<std::vector<double>>(j, key, {});
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// "range": [lo, hi] for every axis or [[lo, hi], ...] per axis.
Box range_box(const Json& spec, int dim, double lo, double hi, int res) {
  Vec l = Vec::Constant(dim, lo), h = Vec::Constant(dim, hi);
  if (spec.contains("range")) {
    const Json& r = spec.at("range");
    if (r.size() == 2 && r[0].is_number()) {
      l.setConstant(r[0].get<double>());
      h.setConstant(r[1].get<double>());
    } else {
      if (static_cast<int>(r.size()) != dim) throw ConfigError("range needs one [lo, hi] per axis");
      for (int i = 0; i < dim; ++i) {
        l(i) = r[static_cast<std::size_t>(i)].at(0).get<double>();
        h(i) = r[static_cast<std::size_t>(i)].at(1).get<double>();
      }
    }
  }
  for (int i = 0; i < dim; ++i)
    if (!(h(i) > l(i))) throw ConfigError("empty parameter range");
  return Box::uniform(l, h, res);
}

// Factor charts with their sphere data (centre, radius) when they have one.
struct FactorSpec {
  Factor factor;
  std::optional<Vec> center;
  double radius = 0.0;
};

FactorSpec build_factor(const Json& spec, int res) {
  const std::string kind = require<std::string>(spec, "kind");
  const double two_pi = 2.0 * std::numbers::pi;
  FactorSpec f;
  if (kind == "circle") {
    const double r = get_or(spec, "radius", 1.0);
    const Vec c = vec_or(spec, "center", Vec::Zero(2));
    if (!(r > 0.0) || c.size() != 2) throw ConfigError("circle needs radius > 0 and a centre in R^2");
    f.factor.chart = make_chart("circle", circle(r, c), range_box(spec, 1, 0.0, two_pi, res));
    f.center = c;
    f.radius = r;
  } else if (kind == "sphere") {
    const int dim = get_or(spec, "dim", 2);
    const double r = get_or(spec, "radius", 1.0);
    if (dim < 1 || !(r > 0.0)) throw ConfigError("sphere needs dim >= 1 and radius > 0");
    f.factor.chart =
        make_chart("sphere", round_sphere(dim, r), range_box(spec, dim, 0.3, std::numbers::pi - 0.3, res));
    f.center = Vec::Zero(dim + 1);
    f.radius = r;
  } else if (kind == "line") {
    const Vec p = vec_or(spec, "point", Vec::Zero(1));
    const Vec d = vec_or(spec, "direction", Vec::Ones(p.size()));
    if (p.size() != d.size() || d.norm() == 0.0) throw ConfigError("line needs point and nonzero direction");
    f.factor.chart = make_chart("line", line(p, d), range_box(spec, 1, -1.0, 1.0, res));
  } else if (kind == "ellipse") {
    f.factor.chart = make_chart("ellipse", ellipse(get_or(spec, "a", 2.0), get_or(spec, "b", 1.0)),
                                range_box(spec, 1, 0.0, two_pi, res));
  } else if (kind == "helix") {
    f.factor.chart = make_chart("helix", helix(get_or(spec, "radius", 1.0), get_or(spec, "pitch", 1.0)),
                                range_box(spec, 1, 0.0, two_pi, res));
  } else if (kind == "exponential") {
    const double s = get_or(spec, "slope", 0.0);
    const Map m = Map::analytic(1, 2, [s](const TVec& x) { return TVec{s * x[0], exp(x[0])}; });
    f.factor.chart = make_chart("exponential", m, range_box(spec, 1, 0.0, 1.0, res));
  } else {
    throw ConfigError("unknown factor kind '" + kind + "'");
  }
  if (f.center && f.center->norm() == 0.0) f.factor.curvature = 1.0 / (f.radius * f.radius);
  return f;
}

std::vector<FactorSpec> build_parts(const Json& construction, int res) {
  const Json parts = get_or<Json>(construction, "parts", Json::array());
  if (!parts.is_array() || parts.empty()) throw ConfigError("construction needs a nonempty 'parts' list");
  std::vector<FactorSpec> out;
  for (const auto& p : parts) out.push_back(build_factor(p, res));
  return out;
}

std::vector<Factor> factors_of(const std::vector<FactorSpec>& specs) {
  std::vector<Factor> r;
  for (const auto& s : specs) r.push_back(s.factor);
  return r;
}

Map perturbed(const Map& m, double eps) {
  const int n = m.in_dim(), big_n = m.out_dim();
  return combine(n, big_n, {m, Map::identity(n)}, [eps, n, big_n](const std::vector<TVec>& p) {
    const Taylor bump = eps / std::sqrt(static_cast<double>(big_n)) * sin(p[1][0] + 0.7) *
                        sin(p[1][static_cast<std::size_t>(n - 1)] + 0.3);
    TVec r = p[0];
    for (auto& x : r) x += bump;
    return r;
  });
}

}  // namespace

double JobConfig::tolerance(const std::string& check) const {
  const auto it = tolerances.find(check);
  const double base = it != tolerances.end() ? it->second : default_tolerances().at(check);
  return base * tolerance_scale;
}

Json JobConfig::effective() const {
  Json j;
  j["construction"] = construction;
  if (transform) j["transform"] = *transform;
  j["checks"] = checks;
  j["resolution"] = resolution;
  j["seed"] = seed;
  j["tolerance_scale"] = tolerance_scale;
  j["tolerances"] = tolerances;
  j["export"] = {{"format", export_format}};
  j["jets"] = jets;
  j["finite_differences"] = finite_differences;
  return j;
}

std::uint64_t JobConfig::hash() const { return fnv1a(effective().dump()); }

JobConfig parse_config(const Json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  JobConfig c;
  c.construction = require<Json>(j, "construction");
  if (!c.construction.is_object()) throw ConfigError("'construction' must be an object");
  if (j.contains("transform")) c.transform = j.at("transform");
  c.checks = get_or<std::vector<std::string>>(j, "checks", {});
  c.resolution = get_or(j, "resolution", c.resolution);
  c.seed = get_or(j, "seed", c.seed);
  c.tolerance_scale = get_or(j, "tolerance_scale", c.tolerance_scale);
  c.tolerances = get_or<std::map<std::string, double>>(j, "tolerances", {});
  if (j.contains("export")) c.export_format = get_or<std::string>(j.at("export"), "format", c.export_format);
  c.jets = get_or(j, "jets", false);
  c.finite_differences = get_or(j, "finite_differences", false);

  if (c.resolution < 3) throw ConfigError("resolution must be >= 3");
  if (!(c.tolerance_scale > 0.0)) throw ConfigError("tolerance_scale must be positive");
  const auto& table = default_tolerances();
  for (const auto& [k, v] : c.tolerances) {
    if (!table.count(k)) throw ConfigError("tolerance for unknown check '" + k + "'");
    if (!(v > 0.0)) throw ConfigError("tolerance for '" + k + "' must be positive");
  }
  for (const auto& k : c.checks) {
    if (!table.count(k)) throw ConfigError("unknown check '" + k + "'");
    const bool chart_check = std::find(kChartChecks.begin(), kChartChecks.end(), k) != kChartChecks.end();
    if (!chart_check && !c.transform) throw ConfigError("check '" + k + "' needs a transform");
  }
  if (c.export_format != "obj" && c.export_format != "csv") throw ConfigError("export format is obj or csv");
  return c;
}

JobConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  try {
    return parse_config(Json::parse(in));
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

Chart build_chart(const Json& construction, int resolution) {
  const std::string family = require<std::string>(construction, "family");
  Chart chart;
  if (family == "product") {
    const auto parts = build_parts(construction, resolution);
    chart = extrinsic_product(factors_of(parts), vec_or(construction, "v", Vec())).chart;
  } else if (family == "moore") {
    const auto parts = build_parts(construction, resolution);
    const double c = get_or(construction, "c", 0.0);
    MooreOptions opts;
    opts.scale = get_or(construction, "scale", 1.0);
    opts.inversion_radius = get_or(construction, "inversion_radius", 1.0);
    int big_n = 0;
    for (const auto& p : parts) big_n += p.factor.chart.ambient_dim();
    const Vec v = vec_or(construction, "v", Vec());
    Vec center = Vec::Zero(big_n + v.size());
    if (center.size() > 0) center(0) = 3.0;
    opts.inversion_center = vec_or(construction, "inversion_center", center);
    chart = moore_family(factors_of(parts), c, opts, v);
  } else if (family == "theta") {
    const double c = get_or(construction, "c", 1.0);
    const Json h = require<Json>(construction, "hyperbolic");
    const std::string kind = get_or<std::string>(h, "kind", "geodesic");
    Chart hyper;
    if (kind == "geodesic") {
      const int m = get_or(h, "m", 1);
      hyper = make_chart("geodesic", hyperbolic_geodesic(m, c), range_box(h, 1, -1.0, 1.0, resolution),
                         Ambient::lorentz);
    } else if (kind == "plane") {
      Box box = range_box(h, 2, 0.0, 1.0, resolution);
      if (!h.contains("range")) {
        box.lo << 0.2, 0.0;
        box.hi << 1.2, 2.0 * std::numbers::pi;
      }
      hyper = make_chart("plane", hyperbolic_plane(c), box, Ambient::lorentz);
    } else {
      throw ConfigError("hyperbolic kind is geodesic or plane");
    }
    std::vector<Factor> parts;
    if (construction.contains("parts")) parts = factors_of(build_parts(construction, resolution));
    chart = theta_family(hyper, parts, vec_or(construction, "v", Vec()), c);
  } else if (family == "cyclide") {
    chart = cyclide(get_or(construction, "n", 2), get_or(construction, "m", 1), get_or(construction, "c", 1.0),
                    get_or(construction, "margin", 0.1));
    chart.box = chart.box.with_resolution(resolution);
  } else if (family == "warped") {
    chart = warped_product_chart(build_factor(require<Json>(construction, "profile"), resolution).factor.chart,
                                 build_factor(require<Json>(construction, "fiber"), resolution).factor.chart);
  } else {
    throw ConfigError("unknown family '" + family + "'");
  }
  const double eps = get_or(construction, "perturb", 0.0);
  if (eps != 0.0) {
    chart.map = perturbed(chart.map, eps);
    chart.label += ":perturbed";
  }
  return chart;
}

TransformBuild build_transform(const Json& construction, const Json& transform, int resolution) {
  const std::string kind = require<std::string>(transform, "kind");
  const std::string family = require<std::string>(construction, "family");
  if (construction.contains("perturb") && kind != "trivial")
    throw ConfigError("transform '" + kind + "' rebuilds its host and ignores 'perturb'");
  TransformBuild b;
  b.kind = kind;
  auto need = [&](const char* fam) {
    if (family != fam) throw ConfigError("transform '" + kind + "' needs family '" + fam + "'");
  };
  auto two_parts = [&]() {
    need("product");
    auto parts = build_parts(construction, resolution);
    if (parts.size() != 2) throw ConfigError("transform '" + kind + "' needs exactly two parts");
    return parts;
  };
  OdeOptions ode;
  if (transform.contains("ode")) {
    ode.tol = get_or(transform.at("ode"), "tol", ode.tol);
    ode.initial_steps = get_or(transform.at("ode"), "initial_steps", ode.initial_steps);
  }
  if (kind == "darboux_sphere_factor") {
    const auto parts = two_parts();
    if (!parts[1].center) throw ConfigError("second part must be a circle or sphere");
    b.data = darboux_sphere_factor(parts[0].factor.chart, parts[1].factor.chart, *parts[1].center, parts[1].radius);
    b.ribaucour = true;
  } else if (kind == "darboux_warped") {
    need("warped");
    b.data = darboux_warped(build_factor(require<Json>(construction, "profile"), resolution).factor.chart,
                            build_factor(require<Json>(construction, "fiber"), resolution).factor.chart);
    b.ribaucour = true;
  } else if (kind == "darboux_curve") {
    const auto parts = two_parts();
    const Chart& a = parts[0].factor.chart;
    if (a.dim() != 1) throw ConfigError("first part must be a curve");
    const Vec init = vec_or(transform, "initial", Vec());
    const DarbouxCurveResult r =
        darboux_curve_factor(a.map, a.box.lo(0), a.box.hi(0), parts[1].factor.chart, init, ode);
    b.data = r.data;
    b.ode_drift = r.first_integral_drift;
    b.curve_relation = std::max(r.gamma_residual, r.lambda_prime_residual);
    b.ribaucour = true;
  } else if (kind == "christoffel_product") {
    const auto parts = two_parts();
    const int big_n = parts[0].factor.chart.ambient_dim() + parts[1].factor.chart.ambient_dim();
    b.data = christoffel_product(parts[0].factor.chart, parts[1].factor.chart, get_or(transform, "a", 1.0),
                                 vec_or(transform, "v", Vec::Zero(big_n)))
                 .data;
  } else if (kind == "christoffel_warped") {
    need("warped");
    const FactorSpec profile = build_factor(require<Json>(construction, "profile"), resolution);
    const FactorSpec fiber = build_factor(require<Json>(construction, "fiber"), resolution);
    const Chart& g = profile.factor.chart;
    if (g.dim() != 1) throw ConfigError("christoffel_warped needs a profile curve");
    const int big_n = g.ambient_dim() - 1 + fiber.factor.chart.ambient_dim();
    const ChristoffelWarpedResult r =
        christoffel_warped(g.map, fiber.factor.chart, g.box.lo(0), g.box.hi(0), get_or(transform, "a", 1.0),
                           vec_or(transform, "v", Vec::Zero(big_n)), ode);
    b.data = r.data;
    b.ode_drift = r.monitor;
  } else if (kind == "trivial") {
    const Chart host = build_chart(construction, resolution);
    if (host.ambient != Ambient::euclidean) throw ConfigError("trivial data needs a Euclidean chart");
    b.data = trivial_data(host, get_or(transform, "a", 1.0), vec_or(transform, "v", Vec::Zero(host.ambient_dim())),
                          get_or(transform, "c0", 0.0));
  } else {
    throw ConfigError("unknown transform kind '" + kind + "'");
  }
  return b;
}

bool VerificationReport::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

Json VerificationReport::to_json() const {
  Json list = Json::array();
  for (const auto& c : checks) {
    Json e{{"check", c.check}, {"residual", c.residual}, {"tolerance", c.tolerance}, {"pass", c.pass}};
    if (!c.verdict.empty()) e["verdict"] = c.verdict;
    list.push_back(e);
  }
  return Json{{"version", kArtifactVersion}, {"config_hash", hex64(config_hash)}, {"seed", seed},
              {"resolution", resolution},   {"checks", list},                     {"pass", pass()}};
}

VerificationReport run_checks(const JobConfig& cfg, const Json& construction, int resolution, Execution exec) {
  VerificationReport rep;
  rep.config_hash = cfg.hash();
  rep.seed = cfg.seed;
  rep.resolution = resolution;
  const CheckOptions opts{cfg.seed, 6, exec};

  std::optional<Chart> chart;
  auto host = [&]() -> const Chart& {
    if (!chart) {
      chart = build_chart(construction, resolution);
      if (cfg.finite_differences) chart = chart->finite_differenced();
    }
    return *chart;
  };
  auto net = [&]() -> const ProductNet& {
    if (!host().net) throw ConfigError("chart '" + host().label + "' carries no product net");
    return *host().net;
  };
  std::optional<TransformBuild> tb;
  std::optional<CodazziTensorField> codazzi;
  std::optional<CombescureResult> comb;
  std::optional<RibaucourResult> rib;
  std::optional<RibaucourResiduals> rres;
  auto transform = [&]() -> const TransformBuild& {
    if (!tb) tb = build_transform(construction, *cfg.transform, resolution);
    return *tb;
  };
  auto field = [&]() -> const CodazziTensorField& {
    if (!codazzi) codazzi = codazzi_tensor(transform().data, opts, std::numeric_limits<double>::infinity());
    return *codazzi;
  };
  auto combescure = [&]() -> const CombescureResult& {
    if (!comb) comb = combescure_transform(transform().data, opts);
    return *comb;
  };
  auto ribaucour = [&]() -> const RibaucourResult& {
    if (!rib) rib = ribaucour_transform(transform().data, opts);
    return *rib;
  };
  auto relations = [&]() -> const RibaucourResiduals& {
    if (!rres) rres = verify_ribaucour_relations(transform().data.host, ribaucour().chart, ribaucour().data, opts);
    return *rres;
  };

  for (const auto& name : cfg.checks) {
    CheckEntry e;
    e.check = name;
    e.tolerance = cfg.tolerance(name);
    if (name == "conformality") {
      e.residual = conformality_check(host(), opts).residual;
    } else if (name == "adaptedness") {
      e.residual = adaptedness_check(host(), net(), opts);
    } else if (name == "cp_net") {
      // The induced metric, not the declared product base, is what must be CP.
      const Chart& c = host();
      const MetricJet induced = [&c](const Vec& u, int order) { return induced_metric(c.map, c.ambient, u, order); };
      e.residual = net_geometry_report(induced, c.box, net(), nullptr, opts).cp_residual;
    } else if (name == "alpha_split") {
      const Chart& c = host();
      const Map phi = c.factor ? *c.factor : Map::constant(c.dim(), Vec::Ones(1));
      e.residual = verify_alpha_F_split(MoebiusFrame::canonical(c.ambient_dim()), c, phi, opts).residual;
    } else if (name == "dupin") {
      for (const auto& pc : principal_curvature_fields(host(), opts))
        for (const auto& cl : pc.clusters) e.residual = std::max(e.residual, cl.dupin);
    } else if (name == "gnorm") {
      e.residual = field().compatibility;
    } else if (name == "closedness") {
      e.residual = field().closedness;
    } else if (name == "combescure_differential") {
      e.residual = combescure().differential_residual;
    } else if (name == "rsff") {
      e.residual = combescure().second_form_residual;
    } else if (name == "christoffel") {
      const ChristoffelCheck cc = check_christoffel(field(), e.tolerance);
      e.residual = cc.residual;
      e.verdict = to_string(cc.verdict);
    } else if (name == "darboux") {
      e.residual = check_darboux(field(), ribaucour().data, e.tolerance).residual;
    } else if (name == "ribaucour_metric") {
      e.residual = relations().metric;
    } else if (name == "ribaucour_connection") {
      e.residual = relations().connection;
    } else if (name == "ribaucour_second_form") {
      e.residual = relations().second_form;
    } else if (name == "ribaucour_differential") {
      e.residual = relations().differential;
    } else if (name == "ribaucour_reflection") {
      e.residual = relations().reflection;
    } else if (name == "ribaucour_commuting") {
      e.residual = relations().commuting;
    } else if (name == "first_integral") {
      if (!transform().ode_drift) throw ConfigError("transform '" + transform().kind + "' has no ODE monitor");
      e.residual = *transform().ode_drift;
    } else if (name == "curve_relation") {
      if (!transform().curve_relation) throw ConfigError("curve_relation needs transform 'darboux_curve'");
      e.residual = *transform().curve_relation;
    }
    e.pass = e.residual <= e.tolerance;
    rep.checks.push_back(e);
  }
  return rep;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const NullCongruence*>(&e) || dynamic_cast<const DegenerateTransform*>(&e) ||
      dynamic_cast<const IntegratorAccuracy*>(&e) || dynamic_cast<const FrenetDegeneracy*>(&e))
    return kExitDegenerate;
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ArtifactError*>(&e) ||
      dynamic_cast<const DimensionMismatch*>(&e) || dynamic_cast<const DomainError*>(&e) ||
      dynamic_cast<const RankDeficiency*>(&e) || dynamic_cast<const Json::exception*>(&e) ||
      dynamic_cast<const fs::filesystem_error*>(&e))
    return kExitConfig;
  return kExitFail;
}

namespace {

constexpr const char* kChartFile = "chart.json";
constexpr const char* kTransformFile = "transform.json";
constexpr const char* kReportFile = "report.json";

struct Stopwatch {
  const char* what;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  ~Stopwatch() {
    const std::chrono::duration<double> d = std::chrono::steady_clock::now() - start;
    std::cerr << what << ": " << d.count() << " s\n";
  }
};

// Construction and resolution recorded in a chart artifact.
std::pair<Json, int> read_chart_artifact(const fs::path& out) {
  const Json a = read_json(out / kChartFile);
  if (a.value("format", "") != "isothermic-chart") throw ArtifactError("chart.json is not a chart artifact");
  if (a.value("version", 0) > kArtifactVersion) throw ArtifactError("chart artifact version is newer than this tool");
  return {a.at("construction"), a.at("box").at("counts").at(0).get<int>()};
}

std::vector<double> to_std(const Vec& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

int cmd_generate(const JobConfig& cfg, const fs::path& out) {
  Stopwatch sw{"generate"};
  const Chart chart = build_chart(cfg.construction, cfg.resolution);
  write_atomic(out / kChartFile, chart_artifact(chart, cfg.construction, cfg.jets).dump() + "\n");
  return kExitPass;
}

int cmd_transform(const JobConfig& cfg, const fs::path& out) {
  Stopwatch sw{"transform"};
  if (!cfg.transform) throw ConfigError("config has no 'transform'");
  const auto [construction, resolution] = read_chart_artifact(out);
  const TransformBuild b = build_transform(construction, *cfg.transform, resolution);
  const CheckOptions opts{cfg.seed, 6, Execution::parallel};
  const CodazziTensorField field = codazzi_tensor(b.data, opts);
  const ChristoffelCheck cc = check_christoffel(field, cfg.tolerance("christoffel"));

  Json j;
  j["format"] = "isothermic-transform";
  j["version"] = kArtifactVersion;
  j["kind"] = b.kind;
  j["construction"] = construction;
  j["transform"] = *cfg.transform;
  j["christoffel_verdict"] = to_string(cc.verdict);
  const Chart& host = b.data.host;
  Json phi = Json::array(), fld = Json::array();
  for (std::size_t k = 0; k < host.box.size(); ++k) {
    const Vec u = host.box.point(k);
    phi.push_back(b.data.phi(u)(0));
    fld.push_back(to_std(b.data.field(u)));
  }
  j["data"] = {{"phi", phi}, {"field", fld}};
  Chart result;
  if (b.ribaucour) {
    const RibaucourResult r = ribaucour_transform(b.data, opts);
    Json nu = Json::array(), delta = Json::array(), contact = Json::array();
    for (const auto& s : r.data.samples) {
      nu.push_back(s.nu);
      delta.push_back(to_std(s.delta));
      contact.push_back(s.contact);
    }
    j["data"]["nu"] = nu;
    j["data"]["delta"] = delta;
    j["data"]["contact"] = contact;
    j["data"]["excluded"] = r.data.excluded;
    result = r.chart;
  } else {
    result = combescure_transform(b.data, opts).chart;
  }
  j["output"] = b.ribaucour ? "ribaucour" : "combescure";
  j["samples"] = chart_samples(result, cfg.jets);
  write_atomic(out / kTransformFile, j.dump() + "\n");
  std::cout << b.kind << ": christoffel verdict " << to_string(cc.verdict) << "\n";
  return kExitPass;
}

int cmd_verify(const JobConfig& cfg, const fs::path& out) {
  Stopwatch sw{"verify"};
  const auto [construction, resolution] = read_chart_artifact(out);
  if (cfg.transform) read_json(out / kTransformFile);
  const VerificationReport rep = run_checks(cfg, construction, resolution);
  write_atomic(out / kReportFile, rep.to_json().dump(2) + "\n");
  for (const auto& c : rep.checks)
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.check << " residual=" << c.residual << " tol=" << c.tolerance
              << "\n";
  return rep.pass() ? kExitPass : kExitFail;
}

int cmd_export(const JobConfig& cfg, const fs::path& out) {
  Stopwatch sw{"export"};
  const auto [construction, resolution] = read_chart_artifact(out);
  std::vector<std::pair<std::string, Chart>> charts{{"chart", build_chart(construction, resolution)}};
  if (fs::exists(out / kTransformFile)) {
    const Json t = read_json(out / kTransformFile);
    const TransformBuild b = build_transform(construction, t.at("transform"), resolution);
    charts.emplace_back("transform", b.ribaucour ? ribaucour_transform(b.data).chart
                                                 : combescure_transform(b.data).chart);
  }
  for (const auto& [name, chart] : charts) {
    if (cfg.export_format == "obj")
      write_atomic(out / (name + ".obj"), obj_mesh(chart));
    else
      write_atomic(out / (name + ".csv"), csv_points(chart));
  }
  return kExitPass;
}

}  // namespace isothermic
