#include "isothermic/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "isothermic/error.hpp"

namespace isothermic {

namespace {

std::size_t sz(int i) { return static_cast<std::size_t>(i); }

double rel(double diff, double a, double b) { return diff / std::max({1.0, a, b}); }

void require_euclidean(const Chart& c) {
  if (c.ambient != Ambient::euclidean) throw DimensionMismatch("transforms act on Euclidean immersions");
}

int field_order_limit(const Map& f, const Map& phi) { return std::min(f.max_order(), phi.max_order()) - 1; }

// df(grad phi) from jets of f and phi of order K + 1 (result has order K).
TVec tangent_gradient(const TVec& fj, const Taylor& phij, int n, TVec* grad_out = nullptr) {
  std::vector<TVec> df;
  for (int i = 0; i < n; ++i) df.push_back(diff(fj, i));
  TMat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = ambient_inner(df[sz(i)], df[sz(j)], Ambient::euclidean);
  const TMat ginv = g.inverse();
  TVec grad(sz(n), Taylor(0.0));
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) grad[sz(k)] += ginv(k, l) * phij.diff(l);
  TVec r(fj.size(), Taylor(0.0));
  for (int k = 0; k < n; ++k)
    for (std::size_t a = 0; a < fj.size(); ++a) r[a] += df[sz(k)][a] * grad[sz(k)];
  if (grad_out) *grad_out = grad;
  return r;
}

Mat tensor_values(const TMat& m) { return m.values(); }

// Generalized eigen decomposition of a g-self-adjoint tensor S (ascending).
Eigen::GeneralizedSelfAdjointEigenSolver<Mat> self_adjoint_eigen(const Mat& s, const Mat& g) {
  Mat gs = g * s;
  gs = 0.5 * (gs + gs.transpose()).eval();
  return Eigen::GeneralizedSelfAdjointEigenSolver<Mat>(gs, g);
}

}  // namespace

CombescureData CombescureData::from_beta(const Chart& host, const Map& phi, const Map& beta) {
  require_euclidean(host);
  const int n = host.dim(), big_n = host.ambient_dim();
  if (phi.in_dim() != n || phi.out_dim() != 1) throw DimensionMismatch("phi must be a scalar field on the chart");
  if (beta.in_dim() != n || beta.out_dim() != big_n) throw DimensionMismatch("beta must be an ambient field");
  const Map f = host.map;
  const int limit = std::min(field_order_limit(f, phi), beta.max_order());
  Map field = Map::from_jets(
      n, big_n,
      [f, phi, beta, n](const Vec& u, int order) {
        TVec r = tangent_gradient(f.jet(u, order + 1), phi.jet(u, order + 1)[0], n);
        const TVec b = beta.jet(u, order);
        for (std::size_t a = 0; a < r.size(); ++a) r[a] += b[a];
        return r;
      },
      limit);
  return {host, phi, field};
}

CombescureData CombescureData::from_field(const Chart& host, const Map& phi, const Map& field) {
  require_euclidean(host);
  if (phi.in_dim() != host.dim() || phi.out_dim() != 1)
    throw DimensionMismatch("phi must be a scalar field on the chart");
  if (field.in_dim() != host.dim() || field.out_dim() != host.ambient_dim())
    throw DimensionMismatch("the transform field must be an ambient field");
  return {host, phi, field};
}

Map beta_field(const CombescureData& data) {
  const Map f = data.host.map, phi = data.phi, field = data.field;
  const int n = data.host.dim();
  return Map::from_jets(
      n, data.host.ambient_dim(),
      [f, phi, field, n](const Vec& u, int order) {
        const TVec t = tangent_gradient(f.jet(u, order + 1), phi.jet(u, order + 1)[0], n);
        TVec r = field.jet(u, order);
        for (std::size_t a = 0; a < r.size(); ++a) r[a] -= t[a];
        return r;
      },
      std::min(field_order_limit(f, phi), field.max_order()));
}

LocalCombescure local_combescure(const CombescureData& data, const Vec& u, int s_order) {
  LocalCombescure lc;
  const int n = data.host.dim();
  lc.f = LocalGeometry::of(data.host.map.jet(u, s_order + 2), Ambient::euclidean);
  lc.phi = data.phi.jet(u, s_order + 2)[0];
  if (lc.phi.is_scalar() || lc.phi.order() < s_order + 2 || min_order(lc.f.f) < s_order + 2)
    throw DomainError("transform data cannot deliver jets of order " + std::to_string(s_order + 2));
  lc.field = data.field.jet(u, s_order + 1);
  lc.grad.assign(sz(n), Taylor(0.0));
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) lc.grad[sz(k)] += lc.f.ginv(k, l) * lc.phi.diff(l);
  lc.beta = lc.field;
  for (int k = 0; k < n; ++k)
    for (std::size_t a = 0; a < lc.beta.size(); ++a) lc.beta[a] -= lc.f.df[sz(k)][a] * lc.grad[sz(k)];
  lc.hess = TMat(n, n);
  TMat lowered(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Taylor h = lc.phi.diff(i).diff(j);
      for (int k = 0; k < n; ++k) h -= lc.f.christoffel(k, i, j) * lc.phi.diff(k);
      lc.hess(i, j) = h;
      lowered(i, j) = h - ambient_inner(lc.f.second_form(i, j), lc.beta, Ambient::euclidean);
    }
  lc.s = lc.f.ginv * lowered;
  return lc;
}

CodazziTensorField codazzi_tensor(const CombescureData& data, const CheckOptions& opts, double tol) {
  const int n = data.host.dim();
  struct Sample {
    Mat s;
    double compat = 0, sym = 0, comm = 0, cod = 0, closed = 0;
  };
  const auto samples = map_indices<Sample>(data.host.box.size(), opts.exec, [&](std::size_t idx) {
    const Vec u = data.host.box.point(idx);
    const LocalCombescure lc = local_combescure(data, u, 1);
    const LocalGeometry& lf = lc.f;
    Sample out;
    out.s = tensor_values(lc.s);
    const Mat g = lf.metric();
    const Mat t = lf.tangent();
    const Mat ginv = g.inverse();
    const Vec grad = values(lc.grad);
    const Vec beta = values(lc.beta);
    // Normal projection in R^N.
    const Mat proj = Mat::Identity(t.rows(), t.rows()) - t * ginv * t.transpose();
    for (int i = 0; i < n; ++i) {
      Vec a = Vec::Zero(t.rows());
      for (int k = 0; k < n; ++k) a += grad(k) * values(lf.second_form(k, i));
      const Vec db = proj * values(diff(lc.beta, i));
      const double gi = std::sqrt(g(i, i));
      out.compat = std::max(out.compat, rel((a + db).norm(), a.norm(), db.norm()) / gi);
      out.compat = std::max(out.compat, std::abs(beta.dot(t.col(i))) / (gi * std::max(1.0, beta.norm())));
    }
    const Mat gs = g * out.s;
    out.sym = (gs - gs.transpose()).norm() / std::max(1.0, gs.norm());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Vec lhs = Vec::Zero(t.rows()), rhs = Vec::Zero(t.rows());
        for (int k = 0; k < n; ++k) {
          lhs += out.s(k, j) * values(lf.second_form(i, k));
          rhs += out.s(k, i) * values(lf.second_form(k, j));
        }
        out.comm = std::max(out.comm, rel((lhs - rhs).norm(), lhs.norm(), rhs.norm()));
      }
    // (nabla_i S) e_j - (nabla_j S) e_i; the Gamma^k_ij S terms cancel.
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        Vec r = Vec::Zero(n);
        double scale = 0.0;
        for (int a = 0; a < n; ++a) {
          double x = lc.s(a, j).partial(i) - lc.s(a, i).partial(j);
          for (int k = 0; k < n; ++k)
            x += lf.christoffel(a, i, k).value() * out.s(k, j) - lf.christoffel(a, j, k).value() * out.s(k, i);
          r(a) = x;
          scale = std::max({scale, std::abs(lc.s(a, j).partial(i)), std::abs(lc.s(a, i).partial(j))});
        }
        out.cod = std::max(out.cod, std::sqrt(r.dot(g * r)) / std::max(1.0, scale));
        // d_i(df S e_j) - d_j(df S e_i)
        TVec ej(t.rows(), Taylor(0.0)), ei(t.rows(), Taylor(0.0));
        for (int k = 0; k < n; ++k)
          for (Eigen::Index c = 0; c < t.rows(); ++c) {
            ej[static_cast<std::size_t>(c)] += lf.df[sz(k)][static_cast<std::size_t>(c)] * lc.s(k, j);
            ei[static_cast<std::size_t>(c)] += lf.df[sz(k)][static_cast<std::size_t>(c)] * lc.s(k, i);
          }
        const Vec x = values(diff(ej, i)), y = values(diff(ei, j));
        out.closed = std::max(out.closed, rel((x - y).norm(), x.norm(), y.norm()));
      }
    return out;
  });
  CodazziTensorField f;
  for (const auto& s : samples) {
    f.s.push_back(s.s);
    f.compatibility = std::max(f.compatibility, s.compat);
    f.symmetry = std::max(f.symmetry, s.sym);
    f.commuting = std::max(f.commuting, s.comm);
    f.codazzi = std::max(f.codazzi, s.cod);
    f.closedness = std::max(f.closedness, s.closed);
  }
  if (f.compatibility > tol)
    throw CompatibilityFailure("compatibility residual " + std::to_string(f.compatibility) + " exceeds " +
                               std::to_string(tol));
  return f;
}

CombescureResult combescure_transform(const CombescureData& data, const CheckOptions& opts) {
  CombescureResult r;
  r.chart = data.host;
  r.chart.label = data.host.label + ":combescure";
  r.chart.map = data.field;
  r.chart.base = BaseMetric::pullback();
  r.chart.factor.reset();
  const int n = data.host.dim();
  struct Sample {
    bool immersive = true;
    double diff = 0, sff = 0;
  };
  const auto samples = map_indices<Sample>(data.host.box.size(), opts.exec, [&](std::size_t idx) {
    const Vec u = data.host.box.point(idx);
    const LocalCombescure lc = local_combescure(data, u, 0);
    const Mat s = tensor_values(lc.s);
    const Mat t = lc.f.tangent();
    const Mat g = lc.f.metric();
    Sample out;
    const double snorm = s.norm();
    out.immersive = snorm > 0.0 && std::abs(s.determinant()) > 1e-8 * std::pow(snorm, n);
    const TVec fj = data.field.jet(u, 1);
    const Mat ts = t * s;
    for (int j = 0; j < n; ++j) {
      const Vec d = values(diff(fj, j));
      out.diff = std::max(out.diff, (d - ts.col(j)).norm() / (std::sqrt(g(j, j)) * std::max(1.0, s.norm())));
    }
    if (out.immersive && data.field.max_order() >= 2) {
      const LocalGeometry lF = LocalGeometry::at(data.field, Ambient::euclidean, u);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Vec rhs = Vec::Zero(t.rows());
          for (int k = 0; k < n; ++k) rhs += s(k, i) * values(lc.f.second_form(k, j));
          const Vec lhs = values(lF.second_form(i, j));
          out.sff = std::max(out.sff, rel((lhs - rhs).norm(), lhs.norm(), rhs.norm()));
        }
    }
    return out;
  });
  for (const auto& s : samples) {
    r.immersive = r.immersive && s.immersive;
    r.differential_residual = std::max(r.differential_residual, s.diff);
    r.second_form_residual = std::max(r.second_form_residual, s.sff);
  }
  return r;
}

const char* to_string(ChristoffelVerdict v) {
  switch (v) {
    case ChristoffelVerdict::trivial:
      return "trivial";
    case ChristoffelVerdict::christoffel:
      return "christoffel";
    case ChristoffelVerdict::neither:
      return "neither";
  }
  return "neither";
}

ChristoffelCheck check_christoffel(const CodazziTensorField& field, double tol) {
  ChristoffelCheck c;
  bool all_scalar = true;
  for (const Mat& s : field.s) {
    const int n = static_cast<int>(s.rows());
    const double mean = s.trace() / n;
    const double snorm = std::max(s.norm(), 1e-300);
    const double dev = (s - mean * Mat::Identity(n, n)).norm() / snorm;
    c.scalar_deviation = std::max(c.scalar_deviation, dev);
    all_scalar = all_scalar && dev <= tol;
    const Mat s2 = s * s;
    const double l2 = s2.trace() / n;
    const double lambda = std::sqrt(std::max(l2, 0.0));
    c.lambda.push_back(lambda);
    c.residual = std::max(c.residual, (s2 - l2 * Mat::Identity(n, n)).norm() / std::max(l2, 1e-300));
    const Eigen::VectorXcd ev = s.eigenvalues();
    int plus = 0, minus = 0;
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
      if (std::abs(ev(k) - lambda) <= 1e-6 * std::max(1.0, lambda)) ++plus;
      if (std::abs(ev(k) + lambda) <= 1e-6 * std::max(1.0, lambda)) ++minus;
    }
    c.plus_dim.push_back(plus);
    c.minus_dim.push_back(minus);
  }
  if (all_scalar)
    c.verdict = ChristoffelVerdict::trivial;
  else if (c.residual <= tol)
    c.verdict = ChristoffelVerdict::christoffel;
  else
    c.verdict = ChristoffelVerdict::neither;
  return c;
}

RibaucourResult ribaucour_transform(const CombescureData& data, const CheckOptions& opts) {
  const int n = data.host.dim();
  const Box& box = data.host.box;
  RibaucourResult r;
  r.data.data = data;
  r.data.samples = map_indices<RibaucourSample>(box.size(), opts.exec, [&](std::size_t idx) {
    const Vec u = box.point(idx);
    const LocalCombescure lc = local_combescure(data, u, 0);
    RibaucourSample s;
    s.phi = lc.phi.value();
    s.field = values(lc.field);
    const double ff = s.field.squaredNorm();
    if (ff <= 1e-10 * std::max(1.0, std::abs(s.phi)))
      throw NullCongruence("<F,F> vanishes at sample " + std::to_string(idx));
    s.nu = 1.0 / ff;
    const Mat sm = tensor_values(lc.s);
    s.d = Mat::Identity(n, n) - 2.0 * s.nu * s.phi * sm;
    s.contact = std::abs(s.phi) <= 1e-8 * std::max(1.0, ff);
    s.delta = s.contact ? Vec::Zero(s.field.size()) : Vec(-s.field / s.phi);
    s.p = Mat::Identity(s.field.size(), s.field.size()) - 2.0 * s.nu * s.field * s.field.transpose();
    const double dn = std::max(s.d.norm(), 1e-300);
    s.valid = std::abs(s.d.determinant()) > 1e-8 * std::pow(dn, n);
    return s;
  });
  for (std::size_t k = 0; k < r.data.samples.size(); ++k)
    if (!r.data.samples[k].valid) r.data.excluded.push_back(k);
  if (r.data.excluded.size() == r.data.samples.size())
    throw DegenerateTransform("D is singular on every sample");

  r.chart = data.host;
  r.chart.label = data.host.label + ":ribaucour";
  r.chart.base = BaseMetric::pullback();
  r.chart.factor.reset();
  const int big_n = data.host.ambient_dim();
  r.chart.map = combine(n, big_n, {data.host.map, data.phi, data.field}, [big_n](const std::vector<TVec>& p) {
    const TVec& f = p[0];
    const Taylor& phi = p[1][0];
    const TVec& field = p[2];
    Taylor ff = 0.0;
    for (const auto& x : field) ff += x * x;
    const Taylor c = 2.0 * phi * reciprocal(ff);
    TVec out;
    for (int a = 0; a < big_n; ++a) out.push_back(f[sz(a)] - c * field[sz(a)]);
    return out;
  });
  return r;
}

RibaucourResiduals verify_ribaucour_relations(const Chart& f, const Chart& f_tilde, const RibaucourData& rdata,
                                              const CheckOptions& opts) {
  const int n = f.dim();
  const int big_n = f.ambient_dim();
  if (f_tilde.dim() != n || f_tilde.ambient_dim() != big_n) throw DimensionMismatch("charts differ in shape");
  const CombescureData& data = rdata.data;
  const auto samples = map_indices<RibaucourResiduals>(f.box.size(), opts.exec, [&](std::size_t idx) {
    RibaucourResiduals out;
    if (!rdata.samples[idx].valid) return out;
    const Vec u = f.box.point(idx);
    const LocalCombescure lc = local_combescure(data, u, 1);
    const LocalGeometry& lf = lc.f;
    const LocalGeometry lt = LocalGeometry::at(f_tilde.map, Ambient::euclidean, u);
    const Mat g = lf.metric(), gt = lt.metric();
    const Mat t = lf.tangent(), tt = lt.tangent();
    const Taylor ff = ambient_inner(lc.field, lc.field, Ambient::euclidean);
    const Taylor nu = reciprocal(ff);
    // D as a jet: I - 2 nu phi S.
    TMat dj = TMat::identity(n) - (2.0 * nu * lc.phi) * lc.s;
    const Mat d = dj.values();
    const Mat s = lc.s.values();
    const double nuv = nu.value();
    const Vec field = values(lc.field);
    const Vec beta = values(lc.beta);
    const Vec grad = values(lc.grad);
    const Mat p = Mat::Identity(big_n, big_n) - 2.0 * nuv * field * field.transpose();

    const Mat dgd = d.transpose() * g * d;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out.metric = std::max(out.metric, std::abs(gt(i, j) - dgd(i, j)) / std::sqrt(gt(i, i) * gt(j, j)));

    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Vec lhs = Vec::Zero(n), rhs = Vec::Zero(n);
        for (int a = 0; a < n; ++a) {
          double l = 0.0;
          for (int k = 0; k < n; ++k) l += d(a, k) * lt.christoffel(k, i, j).value();
          lhs(a) = l;
          double r = dj(a, j).partial(i);
          for (int k = 0; k < n; ++k) r += lf.christoffel(a, i, k).value() * d(k, j);
          rhs(a) = r;
        }
        const Vec sx = s.col(i), dy = d.col(j);
        rhs += 2.0 * nuv * sx.dot(g * dy) * grad - 2.0 * nuv * grad.dot(g * dy) * sx;
        const double ln = std::sqrt(lhs.dot(g * lhs)), rn = std::sqrt(rhs.dot(g * rhs));
        const Vec diffv = lhs - rhs;
        out.connection = std::max(out.connection, rel(std::sqrt(diffv.dot(g * diffv)), ln, rn));

        Vec a = Vec::Zero(big_n);
        for (int k = 0; k < n; ++k) a += d(k, i) * values(lf.second_form(k, j));
        const Vec expected = p * (a + 2.0 * nuv * sx.dot(g * d.col(j)) * beta);
        const Vec actual = values(lt.second_form(i, j));
        out.second_form = std::max(out.second_form, rel((actual - expected).norm(), actual.norm(), expected.norm()));
      }

    const Mat pdd = p * t * d;
    for (int j = 0; j < n; ++j)
      out.differential = std::max(out.differential, (tt.col(j) - pdd.col(j)).norm() / std::sqrt(gt(j, j)));
    out.isometry = (p.transpose() * p - Mat::Identity(big_n, big_n)).norm();

    const Vec fv = values(lf.f), ftv = values(lt.f);
    const Vec delta = -field / lc.phi.value();
    auto rng = sample_rng(opts.seed, idx);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int k = 0; k < opts.pairs && !rdata.samples[idx].contact; ++k) {
      Vec z(big_n);
      for (int c = 0; c < big_n; ++c) z(c) = normal(rng);
      const Vec lhs = p * z - z;
      const Vec rhs = delta.dot(z) * (fv - ftv);
      out.reflection = std::max(out.reflection, (lhs - rhs).norm() / z.norm());
    }

    std::vector<int> signs;
    for (const Vec& xi : normal_frame(t, Ambient::euclidean, &signs)) {
      Mat b(n, n), bt(n, n);
      const Vec pxi = p * xi;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          b(i, j) = values(lf.second_form(i, j)).dot(xi);
          bt(i, j) = values(lt.second_form(i, j)).dot(pxi);
        }
      const Mat a = g.ldlt().solve(b), at = gt.ldlt().solve(bt);
      const double scale = a.norm() * at.norm();
      if (scale > 1e-12) out.commuting = std::max(out.commuting, (a * at - at * a).norm() / scale);
    }

    const auto es = self_adjoint_eigen(s, g);
    const Vec ev = es.eigenvalues();
    const double spread = ev.maxCoeff() - ev.minCoeff();
    if (spread > 1e-3 * std::max(1.0, ev.cwiseAbs().maxCoeff())) {
      const Mat v = es.eigenvectors();
      const double mid = 0.5 * (ev.maxCoeff() + ev.minCoeff());
      double cross = 0.0, cross_t = 0.0, all = 1e-300, all_t = 1e-300;
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          Vec ax = Vec::Zero(big_n), at2 = Vec::Zero(big_n);
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
              ax += v(i, x) * v(j, y) * values(lf.second_form(i, j));
              at2 += v(i, x) * v(j, y) * values(lt.second_form(i, j));
            }
          // Normalize alpha~ by the f~-lengths of the eigenvectors.
          const double lx = std::sqrt(v.col(x).dot(gt * v.col(x))), ly = std::sqrt(v.col(y).dot(gt * v.col(y)));
          const double an = ax.norm(), atn = at2.norm() / (lx * ly);
          all = std::max(all, an);
          all_t = std::max(all_t, atn);
          if ((ev(x) > mid) != (ev(y) > mid)) {
            cross = std::max(cross, an);
            cross_t = std::max(cross_t, atn);
          }
        }
      out.adaptedness = std::max(cross / all, cross_t / all_t);
    }
    return out;
  });
  RibaucourResiduals r;
  for (const auto& s : samples) {
    r.metric = std::max(r.metric, s.metric);
    r.connection = std::max(r.connection, s.connection);
    r.second_form = std::max(r.second_form, s.second_form);
    r.differential = std::max(r.differential, s.differential);
    r.isometry = std::max(r.isometry, s.isometry);
    r.reflection = std::max(r.reflection, s.reflection);
    r.commuting = std::max(r.commuting, s.commuting);
    r.adaptedness = std::max(r.adaptedness, s.adaptedness);
  }
  return r;
}

DarbouxCheck check_darboux(const CodazziTensorField& field, const RibaucourData& rdata, double tol) {
  if (field.s.size() != rdata.samples.size()) throw DimensionMismatch("sample counts differ");
  DarbouxCheck c;
  c.separated = true;
  const Chart& host = rdata.data.host;
  for (std::size_t k = 0; k < field.s.size(); ++k) {
    const RibaucourSample& rs = rdata.samples[k];
    const Mat& s = field.s[k];
    const Mat g = first_fundamental_form(host, host.box.point(k));
    const Vec ev = self_adjoint_eigen(s, g).eigenvalues();
    const auto clusters = cluster_ranges(ev);
    if (clusters.size() != 2) {
      c.separated = false;
      c.lambda.push_back(ev.maxCoeff());
      c.mu.push_back(ev.minCoeff());
      continue;
    }
    const double lo = ev.segment(clusters[0].first, clusters[0].second).mean();
    const double hi = ev.segment(clusters[1].first, clusters[1].second).mean();
    c.lambda.push_back(hi);
    c.mu.push_back(lo);
    if (!rs.valid) continue;
    const double ff = 1.0 / rs.nu;
    c.residual = std::max(c.residual, std::abs((hi + lo) * rs.phi - ff) / std::max(1.0, ff));
  }
  c.darboux = c.separated && c.residual <= tol;
  return c;
}

}  // namespace isothermic
