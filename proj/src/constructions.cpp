#include "isothermic/constructions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "isothermic/error.hpp"

namespace isothermic {

namespace {

std::size_t sz(int i) { return static_cast<std::size_t>(i); }

std::vector<int> range(int start, int count) {
  std::vector<int> r;
  for (int i = 0; i < count; ++i) r.push_back(start + i);
  return r;
}

Box product_box(const std::vector<Box>& boxes) {
  int n = 0;
  for (const auto& b : boxes) n += b.dim();
  Box r{Vec(n), Vec(n), {}};
  int offset = 0;
  for (const auto& b : boxes) {
    r.lo.segment(offset, b.dim()) = b.lo;
    r.hi.segment(offset, b.dim()) = b.hi;
    r.counts.insert(r.counts.end(), b.counts.begin(), b.counts.end());
    offset += b.dim();
  }
  return r;
}

Taylor dot(const TVec& a, const TVec& b) {
  Taylor s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Map scaled(const Map& m, double s) {
  return combine(m.in_dim(), m.out_dim(), {m}, [s](const std::vector<TVec>& p) {
    TVec r;
    for (const auto& x : p[0]) r.push_back(s * x);
    return r;
  });
}

// Max relative deviation of |chart - center| from radius over the chart samples.
double sphere_deviation(const Chart& c, const Vec& center, double radius) {
  double worst = 0.0;
  for (std::size_t k = 0; k < c.box.size(); ++k)
    worst = std::max(worst, std::abs((c.map(c.box.point(k)) - center).norm() - radius) / radius);
  return worst;
}

void check_factor(const Factor& f) {
  if (!f.curvature) return;
  if (!(*f.curvature > 0.0)) throw DomainError("spherical factor needs positive curvature");
  if (sphere_deviation(f.chart, Vec::Zero(f.chart.ambient_dim()), 1.0 / std::sqrt(*f.curvature)) > 1e-8)
    throw DomainError("factor '" + f.chart.label + "' does not lie on its declared sphere");
}

// Univariate jet of a curve derivative at t: scalar t gives values, the
// variable t0 + s gives the expansion in s.
TVec curve_velocity(const Map& curve, const Taylor& t) {
  if (t.is_scalar()) {
    const Vec v = values(diff(curve.jet(Vec::Constant(1, t.value()), 1), 0));
    TVec r;
    for (Eigen::Index i = 0; i < v.size(); ++i) r.emplace_back(v(i));
    return r;
  }
  return diff(curve.jet(Vec::Constant(1, t.value()), t.order() + 1), 0);
}

Map trajectory_map(const Trajectory& tr, std::vector<int> components) {
  const int out = static_cast<int>(components.size());
  return Map::from_jets(1, out, [tr, components](const Vec& u, int order) {
    const TVec s = tr.jet_at(u(0), order);
    TVec r;
    for (int c : components) r.push_back(s[sz(c)]);
    return r;
  });
}

// Induced metric of `m` on the coordinates [offset, offset + m.in_dim()) of x,
// divided by `scale` when given.
void put_block(TMat& g, const Map& m, const TVec& x, int offset, const Taylor* scale) {
  const int k = m.in_dim();
  const TVec xs(x.begin() + offset, x.begin() + offset + k);
  const TVec mj = m.apply(xs);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      const Taylor e = dot(diff(mj, offset + i), diff(mj, offset + j));
      g(offset + i, offset + j) = scale ? e * *scale : e;
    }
}

TMat zero_metric(int n, int order) {
  TMat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = Taylor::constant(n, order, 0.0);
  return g;
}

}  // namespace

Map circle(double radius, const Vec& center) {
  return Map::analytic(1, 2, [radius, center](const TVec& x) {
    return TVec{center(0) + radius * cos(x[0]), center(1) + radius * sin(x[0])};
  });
}

Map line(const Vec& point, const Vec& direction) {
  return Map::analytic(1, static_cast<int>(point.size()), [point, direction](const TVec& x) {
    TVec r;
    for (Eigen::Index i = 0; i < point.size(); ++i) r.push_back(point(i) + direction(i) * x[0]);
    return r;
  });
}

Map ellipse(double a, double b) {
  return Map::analytic(1, 2, [a, b](const TVec& x) { return TVec{a * cos(x[0]), b * sin(x[0])}; });
}

Map helix(double radius, double pitch) {
  return Map::analytic(1, 3, [radius, pitch](const TVec& x) {
    return TVec{radius * cos(x[0]), radius * sin(x[0]), pitch * x[0]};
  });
}

Map round_sphere(int dim, double radius) {
  if (dim < 1) throw DomainError("sphere dimension must be positive");
  return Map::analytic(dim, dim + 1, [dim, radius](const TVec& a) {
    TVec r(sz(dim + 1));
    Taylor prod = radius;
    for (int j = 0; j < dim; ++j) {
      r[sz(dim - j)] = prod * cos(a[sz(j)]);
      prod = prod * sin(a[sz(j)]);
    }
    r[0] = prod;
    return r;
  });
}

Map hyperbolic_geodesic(int m, double c) {
  if (!(c > 0.0)) throw DomainError("hyperbolic space needs c > 0");
  const double s = 1.0 / std::sqrt(c);
  return Map::analytic(1, m + 1, [m, s](const TVec& x) {
    TVec r(sz(m + 1), Taylor(0.0));
    r[0] = s * sinh(x[0]);
    r[sz(m)] = s * cosh(x[0]);
    return r;
  });
}

Map hyperbolic_plane(double c) {
  if (!(c > 0.0)) throw DomainError("hyperbolic space needs c > 0");
  const double s = 1.0 / std::sqrt(c);
  return Map::analytic(2, 3, [s](const TVec& x) {
    const Taylor sh = s * sinh(x[0]);
    return TVec{sh * cos(x[1]), sh * sin(x[1]), s * cosh(x[0])};
  });
}

Chart make_chart(std::string label, Map map, Box box, Ambient ambient) {
  if (box.dim() != map.in_dim()) throw DimensionMismatch("box and map dimensions differ");
  Chart c;
  c.label = std::move(label);
  c.map = std::move(map);
  c.box = std::move(box);
  c.ambient = ambient;
  return c;
}

ProductChart extrinsic_product(const std::vector<Factor>& parts, const Vec& v_extra) {
  if (parts.empty()) throw DimensionMismatch("extrinsic product of no factors");
  int n = 0;
  for (const auto& p : parts) {
    if (p.chart.ambient != Ambient::euclidean) throw DimensionMismatch("extrinsic factors must be Euclidean");
    check_factor(p);
    n += p.chart.dim();
  }
  std::vector<Map> pieces, maps;
  std::vector<Box> boxes;
  std::vector<Ambient> ambients;
  std::vector<int> sizes;
  std::string label;
  int offset = 0;
  bool spherical = true;
  double inv_c = 0.0;
  for (const auto& p : parts) {
    pieces.push_back(compose(p.chart.map, select(n, range(offset, p.chart.dim()))));
    maps.push_back(p.chart.map);
    boxes.push_back(p.chart.box);
    ambients.push_back(Ambient::euclidean);
    sizes.push_back(p.chart.dim());
    label += (label.empty() ? "" : "x") + p.chart.label;
    offset += p.chart.dim();
    spherical = spherical && p.curvature.has_value();
    if (p.curvature) inv_c += 1.0 / *p.curvature;
  }
  if (v_extra.size() > 0) pieces.push_back(Map::constant(n, v_extra));
  ProductChart r;
  r.chart.label = label;
  r.chart.map = stack(pieces);
  r.chart.box = product_box(boxes);
  r.chart.ambient = Ambient::euclidean;
  if (parts.size() >= 2) r.chart.net = ProductNet::from_sizes(sizes);
  r.chart.base = BaseMetric::product(maps, ambients);
  if (spherical) r.curvature = 1.0 / (inv_c + v_extra.squaredNorm());
  return r;
}

Chart moore_family(const std::vector<Factor>& parts, double c, const MooreOptions& opts, const Vec& v_extra) {
  if (c < 0.0) throw DomainError("moore_family needs c >= 0");
  const ProductChart prod = extrinsic_product(parts, v_extra);
  const int n = prod.chart.dim();
  Chart out = prod.chart;
  if (c == 0.0) {
    const int big_n = prod.chart.ambient_dim();
    if (opts.inversion_center.size() != big_n) throw DimensionMismatch("inversion centre must lie in R^N");
    const MoebiusFrame frame = MoebiusFrame::canonical(big_n);
    const Map inv =
        moebius_map(frame, ConformalMapSpec::inversion_about(opts.inversion_center, opts.inversion_radius));
    out.map = compose(inv, scaled(prod.chart.map, opts.scale));
    out.label = "moore0(" + prod.chart.label + ")";
    return out;
  }
  const int big_n = prod.chart.ambient_dim() - 1;
  for (const auto& p : parts) {
    if (!p.curvature) throw DomainError("moore_family with c > 0 needs spherical factors");
    if (p.chart.ambient_dim() < p.chart.dim() + 1)
      throw DomainError("spherical factor '" + p.chart.label + "' needs codimension >= 1");
  }
  const int k = static_cast<int>(parts.size());
  if (k > big_n - n + 1)
    throw DomainError("moore_family with c > 0 allows at most N - n + 1 = " + std::to_string(big_n - n + 1) +
                      " factors, got " + std::to_string(k));
  if (std::abs(*prod.curvature - c) > 1e-9 * c)
    throw DomainError("product lies on the sphere of curvature " + std::to_string(*prod.curvature) +
                      ", not " + std::to_string(c));
  const MoebiusFrame frame = MoebiusFrame::canonical(big_n);
  const Map stereo = stereographic_map(frame, canonical_stereographic(frame, 1.0));
  out.map = compose(stereo, scaled(prod.chart.map, std::sqrt(c)));
  out.label = "moore+(" + prod.chart.label + ")";
  return out;
}

Chart theta_family(const Chart& hyperbolic, const std::vector<Factor>& spherical, const Vec& v_extra, double c) {
  if (!(c > 0.0)) throw DomainError("theta_family needs c > 0");
  if (hyperbolic.ambient != Ambient::lorentz) throw DimensionMismatch("the hyperbolic factor lives in L^{m+1}");
  const int m = hyperbolic.ambient_dim() - 1;
  if (m < 1) throw DimensionMismatch("hyperbolic factor needs m >= 1");
  for (std::size_t s = 0; s < hyperbolic.box.size(); ++s) {
    const Vec x = hyperbolic.map(hyperbolic.box.point(s));
    if (std::abs(lorentz_inner(x, x) + 1.0 / c) > 1e-8 / c || x(m) <= 0.0)
      throw DomainError("hyperbolic factor leaves the upper sheet of H^m(-c)");
  }
  const int nh = hyperbolic.dim();
  Map y;
  Box box = hyperbolic.box;
  std::vector<Map> maps{hyperbolic.map};
  std::vector<Ambient> ambients{Ambient::lorentz};
  std::vector<int> sizes{nh};
  int n = nh;
  double yc = 0.0;
  if (spherical.empty()) {
    if (std::abs(v_extra.squaredNorm() - 1.0 / c) > 1e-9 / c) throw DomainError("point factor must have |v|^2 = 1/c");
    y = Map::constant(nh, v_extra);
    yc = c;
  } else {
    const ProductChart prod = extrinsic_product(spherical, v_extra);
    if (!prod.curvature) throw DomainError("theta_family needs spherical factors");
    yc = *prod.curvature;
    for (const auto& p : spherical) {
      maps.push_back(p.chart.map);
      ambients.push_back(Ambient::euclidean);
      sizes.push_back(p.chart.dim());
    }
    n += prod.chart.dim();
    box = product_box({hyperbolic.box, prod.chart.box});
    y = compose(prod.chart.map, select(n, range(nh, prod.chart.dim())));
  }
  if (std::abs(yc - c) > 1e-9 * c)
    throw DomainError("spherical factors lie on curvature " + std::to_string(yc) + ", not " + std::to_string(c));
  const int big_n = m + y.out_dim() - 1;
  const MoebiusFrame frame = MoebiusFrame::canonical(big_n);
  const Map theta = theta_map(frame, canonical_theta(frame, m, c));
  const Map x = spherical.empty() ? hyperbolic.map : compose(hyperbolic.map, select(n, range(0, nh)));
  Chart out;
  out.label = "theta(" + hyperbolic.label + ")";
  out.map = compose(theta, stack({x, y}));
  out.box = box;
  out.ambient = Ambient::euclidean;
  if (sizes.size() >= 2) out.net = ProductNet::from_sizes(sizes);
  out.base = BaseMetric::product(maps, ambients);
  return out;
}

namespace {

// Umbilical profile in the half-space R^{k+1}_+ together with its parameter box.
std::pair<Map, Box> cyclide_profile(int k, double c) {
  if (c > 0.0) {
    const double h = std::sqrt(1.0 + c);
    const Map omega = round_sphere(k, 1.0);
    Map p = combine(k, k + 1, {omega}, [h, k](const std::vector<TVec>& v) {
      TVec r = v[0];
      r[sz(k)] += h;
      return r;
    });
    return {p, Box::uniform(Vec::Zero(k), Vec::Constant(k, std::numbers::pi), 9)};
  }
  if (c == 0.0) {
    Map p = Map::analytic(k, k + 1, [](const TVec& x) {
      TVec r = x;
      r.emplace_back(1.0);
      return r;
    });
    return {p, Box::uniform(Vec::Constant(k, -1.0), Vec::Constant(k, 1.0), 9)};
  }
  const double t = std::tan(std::asin(std::sqrt(-c)));
  Map p = Map::analytic(k, k + 1, [t](const TVec& x) {
    TVec r = x;
    r.push_back(t * x[0]);
    return r;
  });
  Vec lo = Vec::Constant(k, -1.0), hi = Vec::Constant(k, 1.0);
  lo(0) = 0.5;
  hi(0) = 1.5;
  return {p, Box::uniform(lo, hi, 9)};
}

}  // namespace

Chart cyclide(int n, int m, double c, double margin) {
  if (m < 1 || m > n - 1) throw DomainError("cyclide needs 1 <= m <= n-1, got m = " + std::to_string(m));
  if (!(c > -1.0)) throw DomainError("cyclide needs c > -1");
  const int k = n - m;
  auto [profile, pbox] = cyclide_profile(k, c);
  const Map sphere = round_sphere(m, 1.0);
  const Box sbox = Box::uniform(Vec::Zero(m), Vec::Constant(m, std::numbers::pi), 9);
  const Map p = compose(profile, select(n, range(0, k)));
  const Map y = compose(sphere, select(n, range(k, m)));
  Chart out;
  out.label = "cyclide(" + std::to_string(n) + "," + std::to_string(m) + ")";
  out.map = compose(theta_halfspace(k + 1, n + 1, 1.0), stack({p, y}));
  out.box = product_box({pbox, sbox}).shrunk(margin);
  out.ambient = Ambient::euclidean;
  out.net = ProductNet::from_sizes({k, m});
  // Hyperbolic metric |dx|^2 / x_{k+1}^2 on the profile times the round metric.
  out.base = BaseMetric::general(n, [profile, sphere, k, n](const Vec& u, int order) {
    TMat g = zero_metric(n, order);
    const TVec x = variables(u, order + 1);
    const TVec height = profile.apply(TVec(x.begin(), x.begin() + k));
    const Taylor inv_h2 = reciprocal(height[sz(k)] * height[sz(k)]);
    put_block(g, profile, x, 0, &inv_h2);
    put_block(g, sphere, x, k, nullptr);
    return g;
  });
  out.factor = compose(Map::analytic(k + 1, 1, [k](const TVec& x) { return TVec{x[sz(k)]}; }), p);
  return out;
}

std::pair<double, double> cyclide_curvatures(int n, int m, double c, const Vec& u) {
  const int k = n - m;
  if (c > 0.0) {
    const double h = std::sqrt(1.0 + c);
    const double w = std::cos(u(0));  // omega_{k+1}
    return {1.0, w / (h + w)};
  }
  if (c == 0.0) return {0.0, 1.0};
  const double a = std::asin(std::sqrt(-c));
  (void)k;
  return {0.0, std::cos(a) / (u(0) * std::tan(a))};
}

ChristoffelResult christoffel_product(const Chart& f1, const Chart& f2, double a, const Vec& v) {
  if (a == 0.0) throw DomainError("christoffel_product needs a != 0");
  const ProductChart prod = extrinsic_product({{f1, std::nullopt}, {f2, std::nullopt}});
  const int n = prod.chart.dim(), big_n = prod.chart.ambient_dim(), n1 = f1.ambient_dim();
  if (v.size() != big_n) throw DimensionMismatch("translation must lie in R^N");
  const Map field = combine(n, big_n, {prod.chart.map}, [a, v, n1, big_n](const std::vector<TVec>& p) {
    TVec r;
    for (int i = 0; i < big_n; ++i) r.push_back((i < n1 ? -a : a) * p[0][sz(i)] + v(i));
    return r;
  });
  const Map phi = combine(n, 1, {prod.chart.map}, [a, v, n1, big_n](const std::vector<TVec>& p) {
    Taylor s = 0.0;
    for (int i = 0; i < big_n; ++i) s += (i < n1 ? -0.5 * a : 0.5 * a) * p[0][sz(i)] * p[0][sz(i)] + v(i) * p[0][sz(i)];
    return TVec{s};
  });
  ChristoffelResult r{prod.chart, CombescureData::from_field(prod.chart, phi, field)};
  r.transform.label = "christoffel(" + prod.chart.label + ")";
  r.transform.map = field;
  r.transform.base = BaseMetric::pullback();
  return r;
}

Map warped_product(const Map& gamma, const Map& g) {
  const int m = gamma.out_dim(), d = g.out_dim();
  const Map phi_map = Map::analytic(m + d, m - 1 + d, [m, d](const TVec& xy) {
    TVec r(xy.begin(), xy.begin() + (m - 1));
    for (int j = 0; j < d; ++j) r.push_back(xy[sz(m - 1)] * xy[sz(m + j)]);
    return r;
  });
  return compose(phi_map, cartesian({gamma, g}));
}

Chart warped_product_chart(const Chart& g1, const Chart& g2) {
  const int m = g1.ambient_dim(), n1 = g1.dim(), n = g1.dim() + g2.dim();
  for (std::size_t s = 0; s < g1.box.size(); ++s)
    if (!(g1.map(g1.box.point(s))(m - 1) > 0.0)) throw DomainError("h_m must stay positive");
  Chart c;
  c.label = "warped(" + g1.label + "," + g2.label + ")";
  c.map = warped_product(g1.map, g2.map);
  c.box = product_box({g1.box, g2.box});
  c.ambient = Ambient::euclidean;
  c.net = ProductNet::from_sizes({n1, g2.dim()});
  const Map p = g1.map, q = g2.map;
  c.base = BaseMetric::general(n, [p, q, m, n1, n](const Vec& u, int order) {
    TMat g = zero_metric(n, order);
    const TVec x = variables(u, order + 1);
    const TVec h = p.apply(TVec(x.begin(), x.begin() + n1));
    const Taylor inv_h2 = reciprocal(h[sz(m - 1)] * h[sz(m - 1)]);
    put_block(g, p, x, 0, &inv_h2);
    put_block(g, q, x, n1, nullptr);
    return g;
  });
  c.factor = compose(select(m, {m - 1}), compose(g1.map, select(n, range(0, n1))));
  return c;
}

ChristoffelWarpedResult christoffel_warped(const Map& gamma, const Chart& g, double t0, double t1, double a,
                                           const Vec& v, const OdeOptions& ode) {
  if (gamma.in_dim() != 1) throw DimensionMismatch("gamma must be a curve");
  const int m = gamma.out_dim();
  for (int s = 0; s <= 32; ++s) {
    const double t = t0 + (t1 - t0) * s / 32.0;
    if (!(gamma(Vec::Constant(1, t))(m - 1) > 0.0)) throw DomainError("gamma_m must stay positive");
  }
  if (sphere_deviation(g, Vec::Zero(g.ambient_dim()), 1.0) > 1e-8) throw DomainError("g must lie on the unit sphere");
  LinearSystem sys;
  sys.dim = m + 1;
  sys.matrix = [gamma, m, a](const Taylor& t) {
    const TVec gp = curve_velocity(gamma, t);
    TMat mat(m + 1, m + 1);
    for (int j = 0; j < m; ++j) mat(m, j) = a * gp[sz(j)];
    return mat;
  };
  sys.forcing = [gamma, m](const Taylor& t) {
    const TVec gp = curve_velocity(gamma, t);
    const TVec gv = t.is_scalar() ? TVec{} : gamma.jet(Vec::Constant(1, t.value()), t.order());
    const Taylor gm = t.is_scalar() ? Taylor(gamma(Vec::Constant(1, t.value()))(m - 1)) : gv[sz(m - 1)];
    const Taylor inv = reciprocal(gm * gm);
    TVec r;
    for (int j = 0; j < m; ++j) r.push_back(gp[sz(j)] * inv);
    r.emplace_back(0.0);
    return r;
  };
  Vec y0 = Vec::Zero(m + 1);
  y0(m - 1) = -1.0 / gamma(Vec::Constant(1, t0))(m - 1);
  const Monitor monitor = [gamma, m](double t, const Vec& y) {
    return y(m - 1) + 1.0 / gamma(Vec::Constant(1, t))(m - 1);
  };
  ChristoffelWarpedResult r;
  r.primitive = integrate_linear_ode(sys, y0, t0, t1, monitor, ode);
  r.monitor = r.primitive.monitor_drift();

  const Map gt = trajectory_map(r.primitive, range(0, m));
  const Map psi = trajectory_map(r.primitive, {m});
  const Map f = warped_product(gamma, g.map);
  const int n = f.in_dim(), big_n = f.out_dim();
  if (v.size() != big_n) throw DimensionMismatch("translation must lie in R^N");
  const Map field = combine(n, big_n, {warped_product(scaled(gt, a), g.map)}, [v](const std::vector<TVec>& p) {
    TVec out = p[0];
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += v(static_cast<Eigen::Index>(i));
    return out;
  });
  const Map phi = combine(n, 1, {compose(psi, select(n, {0})), f}, [v](const std::vector<TVec>& p) {
    Taylor s = p[0][0];
    for (std::size_t i = 0; i < p[1].size(); ++i) s += v(static_cast<Eigen::Index>(i)) * p[1][i];
    return TVec{s};
  });
  const Chart host = warped_product_chart(
      make_chart("gamma", gamma, Box::uniform(Vec::Constant(1, t0), Vec::Constant(1, t1), g.box.counts.front())), g);
  r.data = CombescureData::from_field(host, phi, field);
  r.transform = host;
  r.transform.label = "christoffel(" + host.label + ")";
  r.transform.map = field;
  r.transform.base = BaseMetric::pullback();
  r.transform.factor.reset();
  return r;
}

CombescureData darboux_sphere_factor(const Chart& g1, const Chart& g2, const Vec& p2, double r2) {
  if (!(r2 > 0.0)) throw DomainError("sphere radius must be positive");
  if (p2.size() != g2.ambient_dim()) throw DimensionMismatch("sphere centre must lie in the second factor");
  if (sphere_deviation(g2, p2, r2) > 1e-8) throw DomainError("second factor violates |g2 - P2| = r2");
  const ProductChart prod = extrinsic_product({{g1, std::nullopt}, {g2, std::nullopt}});
  const int n = prod.chart.dim(), big_n = prod.chart.ambient_dim(), n1 = g1.ambient_dim();
  const Map field = combine(n, big_n, {prod.chart.map}, [p2, n1, big_n](const std::vector<TVec>& p) {
    TVec r;
    for (int i = 0; i < big_n; ++i) r.push_back(i < n1 ? Taylor(0.0) : p[0][sz(i)] - p2(i - n1));
    return r;
  });
  return CombescureData::from_field(prod.chart, Map::constant(n, Vec::Constant(1, r2 * r2)), field);
}

CombescureData darboux_warped(const Chart& g1, const Chart& g2) {
  const int m = g1.ambient_dim();
  if (sphere_deviation(g2, Vec::Zero(g2.ambient_dim()), 1.0) > 1e-8) throw DomainError("g2 must be unit");
  const Chart host = warped_product_chart(g1, g2);
  const int n = host.dim(), n1 = g1.dim(), d = g2.ambient_dim();
  const Map g2p = compose(g2.map, select(n, range(n1, g2.dim())));
  const Map field = combine(n, m - 1 + d, {g2p}, [m](const std::vector<TVec>& p) {
    TVec r(sz(m - 1), Taylor(0.0));
    r.insert(r.end(), p[0].begin(), p[0].end());
    return r;
  });
  const Map phi = compose(select(m, {m - 1}), compose(g1.map, select(n, range(0, n1))));
  return CombescureData::from_field(host, phi, field);
}

DarbouxCurveResult darboux_curve_factor(const Map& alpha, double t0, double t1, const Chart& g2, const Vec& initial,
                                        const OdeOptions& ode) {
  const int n1 = alpha.out_dim();
  if (initial.size() != n1 + 1) throw DimensionMismatch("initial state is (lambda, beta, V_2..V_N1)");
  DarbouxCurveResult r;
  r.initial = initial;
  const double k0 = darboux_first_integral(initial);
  if (std::abs(k0) > 1e-10) {
    const double target = initial(0) * initial(0) - initial(1) * initial(1);
    if (target < 0.0) throw DomainError("initial state cannot be projected onto K = 0");
    const double vn = initial.tail(n1 - 1).norm();
    if (vn > 0.0)
      r.initial.tail(n1 - 1) *= std::sqrt(target) / vn;
    else
      r.initial(2) = std::sqrt(target);
  }
  r.trajectory = integrate_linear_ode(darboux_curve_system(alpha), r.initial, t0, t1,
                                      [](double, const Vec& y) { return darboux_first_integral(y); }, ode);
  r.first_integral_drift = r.trajectory.monitor_drift();
  if (r.first_integral_drift > 1e-7)
    throw IntegratorAccuracy("first integral drift " + std::to_string(r.first_integral_drift));

  const Trajectory tr = r.trajectory;
  const Map gamma = Map::from_jets(1, n1, [tr, alpha, n1](const Vec& u, int order) {
    const TVec s = tr.jet_at(u(0), order);
    const FrenetJet fj = frenet_jet(alpha, u(0), order);
    TVec g(sz(n1), Taylor(0.0));
    for (int i = 0; i < n1; ++i) {
      g[sz(i)] = s[1] * fj.frame[0][sz(i)];
      for (int j = 1; j < n1; ++j) g[sz(i)] += s[sz(j + 1)] * fj.frame[sz(j)][sz(i)];
    }
    return g;
  });
  const Map lambda = trajectory_map(tr, {0});

  const int count = g2.box.counts.empty() ? 9 : g2.box.counts.front();
  const Chart ac = make_chart("alpha", alpha, Box::uniform(Vec::Constant(1, t0), Vec::Constant(1, t1), count));
  const ProductChart prod = extrinsic_product({{ac, std::nullopt}, {g2, std::nullopt}});
  const int n = prod.chart.dim(), big_n = prod.chart.ambient_dim();
  const Map field = combine(n, big_n, {compose(gamma, select(n, {0}))}, [big_n](const std::vector<TVec>& p) {
    TVec out = p[0];
    out.resize(sz(big_n), Taylor(0.0));
    return out;
  });
  r.data = CombescureData::from_field(prod.chart, compose(lambda, select(n, {0})), field);

  for (int s = 0; s <= 16; ++s) {
    const double t = t0 + (t1 - t0) * s / 16.0;
    const TVec gj = gamma.jet(Vec::Constant(1, t), 1);
    const TVec lj = lambda.jet(Vec::Constant(1, t), 1);
    const TVec aj = alpha.jet(Vec::Constant(1, t), 1);
    const Vec gp = values(diff(gj, 0)), ap = values(diff(aj, 0));
    const double lam = lj[0].value();
    r.gamma_residual = std::max(r.gamma_residual, (gp - lam * ap).norm() / std::max(1.0, gp.norm()));
    const double speed = ap.norm();
    const double lhs = values(gj).dot(ap / speed);
    const double rhs = lj[0].partial(0) / speed;
    r.lambda_prime_residual = std::max(r.lambda_prime_residual, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
  }
  return r;
}

CombescureData trivial_data(const Chart& host, double a, const Vec& v, double c0) {
  const int n = host.dim(), big_n = host.ambient_dim();
  if (v.size() != big_n) throw DimensionMismatch("translation must lie in R^N");
  const Map field = combine(n, big_n, {host.map}, [a, v](const std::vector<TVec>& p) {
    TVec r;
    for (std::size_t i = 0; i < p[0].size(); ++i) r.push_back(a * p[0][i] + v(static_cast<Eigen::Index>(i)));
    return r;
  });
  const Map phi = combine(n, 1, {host.map}, [a, v, c0](const std::vector<TVec>& p) {
    Taylor s = c0;
    for (std::size_t i = 0; i < p[0].size(); ++i)
      s += 0.5 * a * p[0][i] * p[0][i] + v(static_cast<Eigen::Index>(i)) * p[0][i];
    return TVec{s};
  });
  return CombescureData::from_field(host, phi, field);
}

}  // namespace isothermic
