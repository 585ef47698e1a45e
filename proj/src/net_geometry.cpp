#include <algorithm>
#include <cmath>

#include "isothermic/error.hpp"
#include "isothermic/geometry.hpp"

namespace isothermic {

namespace {

std::size_t sz(int i) { return static_cast<std::size_t>(i); }

// Vector fields on the chart domain in coordinate components.
struct Fields {
  int n;
  const TMat& g;
  const std::vector<Taylor>& gamma;

  Taylor inner(const TVec& x, const TVec& y) const {
    Taylor s = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) s += x[sz(a)] * g(a, b) * y[sz(b)];
    return s;
  }

  double norm(const TVec& x) const { return std::sqrt(std::max(inner(x, x).value(), 0.0)); }

  // (nabla_X Y)^l = X^k (d_k Y^l + Gamma^l_kj Y^j)
  TVec covariant(const TVec& x, const TVec& y) const {
    TVec r(sz(n), Taylor(0.0));
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k) {
        Taylor s = y[sz(l)].is_scalar() ? Taylor(0.0) : y[sz(l)].diff(k);
        for (int j = 0; j < n; ++j) s += gamma[sz((l * n + k) * n + j)] * y[sz(j)];
        r[sz(l)] += x[sz(k)] * s;
      }
    return r;
  }
};

// g-orthogonal projection onto the span of the coordinate axes in `block`.
struct BlockProjector {
  const Fields& f;
  std::vector<int> block;
  TMat gblock_inv;

  BlockProjector(const Fields& fields, std::vector<int> b) : f(fields), block(std::move(b)) {
    const int m = static_cast<int>(block.size());
    TMat gb(m, m);
    for (int a = 0; a < m; ++a)
      for (int c = 0; c < m; ++c) gb(a, c) = f.g(block[sz(a)], block[sz(c)]);
    gblock_inv = gb.inverse();
  }

  TVec onto(const TVec& v) const {
    const int m = static_cast<int>(block.size());
    TVec gv(sz(m), Taylor(0.0));
    for (int a = 0; a < m; ++a)
      for (int k = 0; k < f.n; ++k) gv[sz(a)] += f.g(block[sz(a)], k) * v[sz(k)];
    TVec r(sz(f.n), Taylor(0.0));
    for (int a = 0; a < m; ++a) {
      Taylor c = 0.0;
      for (int b = 0; b < m; ++b) c += gblock_inv(a, b) * gv[sz(b)];
      r[sz(block[sz(a)])] = c;
    }
    return r;
  }

  TVec off(const TVec& v) const {
    TVec p = onto(v);
    TVec r(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) r[k] = v[k] - p[k];
    return r;
  }
};

TVec axis(int n, int a) {
  TVec e(sz(n), Taylor(0.0));
  e[sz(a)] = 1.0;
  return e;
}

TVec combo(const TVec& x, const Taylor& a, const TVec& y) {
  TVec r(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) r[k] = x[k] + a * y[k];
  return r;
}

// Least-squares mean curvature normal of a frame {X_a} with second-form
// values T_ab and Gram G_ab: eta = sum G_ab T_ab / sum G_ab^2. Returns the fit
// and the worst normalized residual |T_ab - G_ab eta|.
std::pair<TVec, double> umbilic_fit(const Fields& f, const std::vector<TVec>& t, const TMat& gram) {
  const int m = gram.rows();
  TVec eta(sz(f.n), Taylor(0.0));
  Taylor den = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      den += gram(a, b) * gram(a, b);
      eta = combo(eta, gram(a, b), t[sz(a * m + b)]);
    }
  const Taylor inv = reciprocal(den);
  for (auto& x : eta) x *= inv;
  double worst = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const TVec r = combo(t[sz(a * m + b)], -gram(a, b), eta);
      const double scale = std::sqrt(gram(a, a).value() * gram(b, b).value());
      worst = std::max(worst, f.norm(truncate(r, 0)) / scale);
    }
  return {eta, worst};
}

struct BlockSample {
  double umbilicity = 0.0;
  double complement_umbilicity = 0.0;
  double sphericality = 0.0;
  double complement_integrability = 0.0;
  double complement_geodesic = 0.0;
  double cp_cross = 0.0;
  double twist = 0.0;
  Vec block_normal;
  Vec complement_normal;
};

BlockSample analyse_block(const Fields& f, const std::vector<int>& block, const std::vector<int>& rest,
                          const BaseMetric::ScalarFn* rho, const Vec& u) {
  const int n = f.n;
  const int p = static_cast<int>(block.size());
  const int q = static_cast<int>(rest.size());
  BlockSample out;
  const BlockProjector on_block(f, block);

  std::vector<TVec> z;
  for (int a : block) z.push_back(axis(n, a));
  std::vector<TVec> y;
  for (int b : rest) y.push_back(on_block.off(axis(n, b)));

  // E_i: T_ab = (nabla_{Z_a} Z_b) projected off E_i.
  std::vector<TVec> t;
  TMat gz(p, p);
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b) {
      t.push_back(on_block.off(f.covariant(z[sz(a)], z[sz(b)])));
      gz(a, b) = f.g(block[sz(a)], block[sz(b)]);
    }
  auto [h, umb] = umbilic_fit(f, t, gz);
  out.umbilicity = umb;
  out.block_normal = values(h);
  for (int a = 0; a < p; ++a) {
    const TVec d = on_block.off(f.covariant(z[sz(a)], h));
    out.sphericality = std::max(out.sphericality, f.norm(d) / std::sqrt(gz(a, a).value()));
  }

  // E_i^perp: S_ab = (nabla_{Y_a} Y_b) projected onto E_i.
  std::vector<TVec> sym;
  TMat gy(q, q);
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b) gy(a, b) = f.inner(y[sz(a)], y[sz(b)]);
  std::vector<TVec> s;
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b) s.push_back(on_block.onto(f.covariant(y[sz(a)], y[sz(b)])));
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b) {
      const TVec& sab = s[sz(a * q + b)];
      const TVec& sba = s[sz(b * q + a)];
      const double scale = std::sqrt(gy(a, a).value() * gy(b, b).value());
      TVec sy(sab.size()), skew(sab.size());
      for (std::size_t k = 0; k < sab.size(); ++k) {
        sy[k] = 0.5 * (sab[k] + sba[k]);
        skew[k] = sab[k] - sba[k];
      }
      sym.push_back(sy);
      out.complement_integrability =
          std::max(out.complement_integrability, f.norm(truncate(skew, 0)) / scale);
      out.complement_geodesic = std::max(out.complement_geodesic, f.norm(truncate(sab, 0)) / scale);
    }
  auto [eta, cumb] = umbilic_fit(f, sym, gy);
  out.complement_umbilicity = cumb;
  out.complement_normal = values(eta);

  for (int a = 0; a < p; ++a)
    for (int b = 0; b < q; ++b) {
      const double lhs = f.inner(f.covariant(y[sz(b)], eta), z[sz(a)]).value();
      const double rhs = f.inner(f.covariant(z[sz(a)], h), y[sz(b)]).value();
      const double scale = std::sqrt(gz(a, a).value() * gy(b, b).value());
      out.cp_cross = std::max(out.cp_cross, std::abs(lhs - rhs) / scale);
    }

  if (rho) {
    const Taylor lr = log((*rho)(variables(u, 1)));
    const Mat ginv = f.g.values().inverse();
    const Vec grad = ginv * lr.gradient();
    TVec ut;
    for (int k = 0; k < n; ++k) ut.emplace_back(-grad(k));
    const TVec expected = on_block.off(ut);
    TVec diff(sz(n));
    for (int k = 0; k < n; ++k) diff[sz(k)] = Taylor(h[sz(k)].value()) - Taylor(expected[sz(k)].value());
    out.twist = f.norm(diff);
  }
  return out;
}

}  // namespace

std::vector<Taylor> christoffel_symbols(const TMat& g) {
  const int n = g.rows();
  const TMat ginv = g.inverse();
  std::vector<TMat> dg;
  for (int k = 0; k < n; ++k) dg.push_back(g.diff(k));
  std::vector<Taylor> gamma(sz(n * n * n), Taylor(0.0));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Taylor s = 0.0;
        for (int l = 0; l < n; ++l)
          s += ginv(k, l) * (dg[sz(i)](j, l) + dg[sz(j)](i, l) - dg[sz(l)](i, j));
        s *= 0.5;
        gamma[sz((k * n + i) * n + j)] = s;
        gamma[sz((k * n + j) * n + i)] = s;
      }
  return gamma;
}

NetGeometryReport net_geometry_report(const MetricJet& metric, const Box& box, const ProductNet& net,
                                      const BaseMetric* twisted, const CheckOptions& opts) {
  const int n = box.dim();
  net.validate(n);
  const std::size_t k = net.size();
  const ProductNet* twist_net = nullptr;
  if (twisted && twisted->kind() == BaseMetric::Kind::twisted && twisted->twist_net()) {
    twist_net = &*twisted->twist_net();
    if (twist_net->blocks != net.blocks) twist_net = nullptr;
  }
  std::vector<std::vector<int>> rest(k);
  for (std::size_t i = 0; i < k; ++i)
    for (int a = 0; a < n; ++a)
      if (net.block_of(a) != static_cast<int>(i)) rest[i].push_back(a);

  const auto samples = map_indices<std::vector<BlockSample>>(box.size(), opts.exec, [&](std::size_t s) {
    const Vec u = box.point(s);
    const TMat g = metric(u, 2);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (g(a, b).order() < 2) throw DomainError("net geometry needs metric jets of order 2");
    const std::vector<Taylor> gamma = christoffel_symbols(g);
    const Fields fields{n, g, gamma};
    std::vector<BlockSample> out;
    for (std::size_t i = 0; i < k; ++i) {
      const BaseMetric::ScalarFn* rho = twist_net ? &twisted->twist()[i] : nullptr;
      out.push_back(analyse_block(fields, net.blocks[i], rest[i], rho, u));
    }
    return out;
  });

  NetGeometryReport r;
  r.umbilicity.assign(k, 0.0);
  r.complement_umbilicity.assign(k, 0.0);
  r.sphericality.assign(k, 0.0);
  r.complement_integrability.assign(k, 0.0);
  double twist = 0.0;
  for (const auto& per_block : samples) {
    std::vector<Vec> hs, etas;
    for (std::size_t i = 0; i < k; ++i) {
      const BlockSample& b = per_block[i];
      r.umbilicity[i] = std::max(r.umbilicity[i], b.umbilicity);
      r.complement_umbilicity[i] = std::max(r.complement_umbilicity[i], b.complement_umbilicity);
      r.sphericality[i] = std::max(r.sphericality[i], b.sphericality);
      r.complement_integrability[i] = std::max(r.complement_integrability[i], b.complement_integrability);
      r.cp_residual = std::max({r.cp_residual, b.umbilicity, b.complement_umbilicity, b.cp_cross});
      r.tp_residual = std::max({r.tp_residual, b.umbilicity, b.complement_integrability});
      if (i >= 1) r.wp_residual = std::max({r.wp_residual, b.umbilicity, b.sphericality, b.complement_geodesic});
      twist = std::max(twist, b.twist);
      hs.push_back(b.block_normal);
      etas.push_back(b.complement_normal);
    }
    r.block_normal.push_back(std::move(hs));
    r.complement_normal.push_back(std::move(etas));
  }
  if (twist_net) r.twist_residual = twist;
  return r;
}

NetGeometryReport net_geometry_report(const BaseMetric& metric, const Box& box, const ProductNet& net,
                                      const CheckOptions& opts) {
  if (!metric.declared()) throw DomainError("a pullback metric needs a chart");
  return net_geometry_report([&metric](const Vec& u, int order) { return metric.jet(u, order); }, box, net,
                             &metric, opts);
}

NetGeometryReport net_geometry_report(const Chart& chart, const ProductNet& net, const CheckOptions& opts) {
  return net_geometry_report([&chart](const Vec& u, int order) { return chart.base_metric(u, order); },
                             chart.box, net, &chart.base, opts);
}

}  // namespace isothermic
