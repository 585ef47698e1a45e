#include "isothermic/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "isothermic/error.hpp"
#include "isothermic/minkowski.hpp"

namespace isothermic {

namespace {

constexpr double kRankTol = 1e-8;

std::size_t sz(int i) { return static_cast<std::size_t>(i); }

TVec scale(const TVec& v, const Taylor& s) {
  TVec r;
  r.reserve(v.size());
  for (const auto& x : v) r.push_back(x * s);
  return r;
}

void axpy(TVec& y, const Taylor& a, const TVec& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

Vec value_vec(const TVec& v) { return values(v); }

void check_rank(const Mat& t) {
  Eigen::JacobiSVD<Mat> svd(t);
  const Vec s = svd.singularValues();
  if (s.size() == 0 || s(s.size() - 1) <= kRankTol * std::max(s(0), 1e-300))
    throw RankDeficiency("differential loses rank (singular values " + std::to_string(s(0)) + ", " +
                         std::to_string(s(s.size() - 1)) + ")");
}

}  // namespace

LocalGeometry LocalGeometry::of(const TVec& f_jet, Ambient ambient) {
  LocalGeometry lg;
  lg.ambient = ambient;
  lg.ambient_dim = static_cast<int>(f_jet.size());
  int vars = 0;
  for (const auto& x : f_jet)
    if (!x.is_scalar()) vars = x.vars();
  if (vars == 0) throw RankDeficiency("constant map has no tangent space");
  if (min_order(f_jet) < 2) throw DomainError("local geometry needs jets of order >= 2");
  const int n = vars;
  lg.n = n;
  lg.f = f_jet;
  for (int i = 0; i < n; ++i) lg.df.push_back(diff(f_jet, i));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) lg.d2f.push_back(diff(lg.df[sz(i)], j));
  check_rank(lg.tangent());
  lg.g = TMat(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      lg.g(i, j) = ambient_inner(lg.df[sz(i)], lg.df[sz(j)], ambient);
      lg.g(j, i) = lg.g(i, j);
    }
  if (ambient == Ambient::lorentz) {
    Eigen::SelfAdjointEigenSolver<Mat> es(lg.g.values());
    if (es.eigenvalues()(0) <= kRankTol * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff()))
      throw NonDegeneracyFailure("induced metric is not positive definite");
  }
  lg.ginv = lg.g.inverse();
  // Gamma^k_ij = g^{kl} <d_i d_j f, d_l f>
  std::vector<Taylor> lowered(sz(n * n * n));
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        lowered[sz((l * n + i) * n + j)] = ambient_inner(lg.d2f[sz(i * n + j)], lg.df[sz(l)], ambient);
        lowered[sz((l * n + j) * n + i)] = lowered[sz((l * n + i) * n + j)];
      }
  lg.gamma.assign(sz(n * n * n), Taylor(0.0));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Taylor s = 0.0;
        for (int l = 0; l < n; ++l) s += lg.ginv(k, l) * lowered[sz((l * n + i) * n + j)];
        lg.gamma[sz((k * n + i) * n + j)] = s;
      }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      TVec a = lg.d2f[sz(i * n + j)];
      for (int k = 0; k < n; ++k) axpy(a, -lg.christoffel(k, i, j), lg.df[sz(k)]);
      lg.alpha.push_back(a);
    }
  return lg;
}

LocalGeometry LocalGeometry::at(const Map& f, Ambient ambient, const Vec& u, int extra) {
  return of(f.jet(u, 2 + extra), ambient);
}

Mat LocalGeometry::tangent() const {
  Mat t(ambient_dim, n);
  for (int i = 0; i < n; ++i) t.col(i) = value_vec(df[sz(i)]);
  return t;
}

Vec LocalGeometry::push_forward(const Vec& v) const { return tangent() * v; }

Mat first_fundamental_form(const Chart& chart, const Vec& u) {
  const TVec j = chart.map.jet(u, 1);
  Mat t(chart.ambient_dim(), chart.dim());
  for (int i = 0; i < chart.dim(); ++i) t.col(i) = values(diff(j, i));
  check_rank(t);
  Mat g(chart.dim(), chart.dim());
  for (int a = 0; a < chart.dim(); ++a)
    for (int b = 0; b < chart.dim(); ++b) g(a, b) = ambient_inner(Vec(t.col(a)), Vec(t.col(b)), chart.ambient);
  return g;
}

std::vector<Vec> normal_frame(const Mat& tangent, Ambient ambient, std::vector<int>* signs) {
  const Eigen::Index big_n = tangent.rows(), n = tangent.cols();
  std::vector<Vec> normals;
  if (ambient == Ambient::lorentz) {
    std::vector<Vec> cols;
    for (Eigen::Index i = 0; i < n; ++i) cols.push_back(tangent.col(i));
    const OrthonormalFrame nf = orthogonal_complement(lorentz_gram_schmidt(cols), static_cast<int>(big_n));
    if (signs) *signs = nf.signs;
    return nf.vectors;
  }
  Eigen::HouseholderQR<Mat> qr(tangent);
  const Mat q = qr.householderQ();
  for (Eigen::Index k = n; k < big_n; ++k) normals.push_back(q.col(k));
  if (normals.size() == 1) {
    Mat m(big_n, big_n);
    m << tangent, normals[0];
    if (m.determinant() < 0) normals[0] = -normals[0];
  } else {
    for (auto& v : normals) {
      Eigen::Index k = 0;
      v.cwiseAbs().maxCoeff(&k);
      if (v(k) < 0) v = -v;
    }
  }
  if (signs) signs->assign(normals.size(), 1);
  return normals;
}

SecondFundamentalForm second_fundamental_form(const Chart& chart, const Vec& u) {
  const LocalGeometry lg = LocalGeometry::at(chart.map, chart.ambient, u);
  SecondFundamentalForm s;
  s.normals = normal_frame(lg.tangent(), chart.ambient, &s.signs);
  const int n = lg.n;
  for (const auto& a : lg.alpha) s.alpha.push_back(values(a));
  for (std::size_t k = 0; k < s.normals.size(); ++k) {
    Mat c(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        c(i, j) = s.signs[k] * ambient_inner(s.alpha[sz(i * n + j)], s.normals[k], chart.ambient);
    s.coeff.push_back(c);
  }
  return s;
}

ConformalityResult conformality_check(const Chart& chart, const CheckOptions& opts) {
  const int n = chart.dim();
  const std::size_t count = chart.box.size();
  struct Sample {
    double residual = 0.0;
    double phi = 0.0;
  };
  const auto samples = map_indices<Sample>(count, opts.exec, [&](std::size_t s) {
    const Vec u = chart.box.point(s);
    const Mat g = first_fundamental_form(chart, u);
    const Mat b = chart.base_metric(u, 0).values();
    Sample out;
    out.phi = std::pow(g.determinant() / b.determinant(), 1.0 / (2.0 * n));
    auto rng = sample_rng(opts.seed, s);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double phi2 = out.phi * out.phi;
    for (int p = 0; p < opts.pairs; ++p) {
      Vec x(n), y(n);
      for (int i = 0; i < n; ++i) x(i) = normal(rng);
      for (int i = 0; i < n; ++i) y(i) = normal(rng);
      const double lhs = x.dot(g * y);
      const double rhs = phi2 * x.dot(b * y);
      const double norm = phi2 * std::sqrt(x.dot(b * x) * y.dot(b * y));
      out.residual = std::max(out.residual, std::abs(lhs - rhs) / norm);
    }
    return out;
  });
  ConformalityResult r;
  for (const auto& s : samples) {
    r.residual = std::max(r.residual, s.residual);
    r.factor.push_back(s.phi);
  }
  return r;
}

double adaptedness_check(const Chart& chart, const ProductNet& net, const CheckOptions& opts) {
  const int n = chart.dim();
  net.validate(n);
  struct Sample {
    double cross = 0.0;
    double total = 0.0;
  };
  const auto samples = map_indices<Sample>(chart.box.size(), opts.exec, [&](std::size_t s) {
    const LocalGeometry lg = LocalGeometry::at(chart.map, chart.ambient, chart.box.point(s));
    const Mat g = lg.metric();
    Sample out;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const double v = values(lg.second_form(a, b)).norm() / std::sqrt(g(a, a) * g(b, b));
        out.total = std::max(out.total, v);
        if (net.block_of(a) != net.block_of(b)) out.cross = std::max(out.cross, v);
      }
    return out;
  });
  double cross = 0.0, total = 0.0;
  for (const auto& s : samples) {
    cross = std::max(cross, s.cross);
    total = std::max(total, s.total);
  }
  return total > 0.0 ? cross / total : 0.0;
}

AlphaSplitResult verify_alpha_F_split(const MoebiusFrame& frame, const Chart& f, const Map& phi,
                                      const CheckOptions& opts) {
  if (f.ambient != Ambient::euclidean || f.ambient_dim() != frame.dim())
    throw DimensionMismatch("alpha_F split needs a chart into the frame's R^N");
  const int n = f.dim();
  TVec w;
  for (int k = 0; k < frame.ambient_dim(); ++k) w.emplace_back(frame.w()(k));
  struct Sample {
    double residual = 0.0;
    double gram = 0.0;
    bool lorentzian = true;
  };
  const auto samples = map_indices<Sample>(f.box.size(), opts.exec, [&](std::size_t s) {
    const Vec u = f.box.point(s);
    const TVec fj = f.map.jet(u, 2);
    const Taylor ph = phi.jet(u, 2)[0];
    if (ph.value() == 0.0) throw DomainError("conformal factor vanishes");
    const Taylor psi_inv = reciprocal(ph);
    const TVec psi_f = frame.psi(fj);
    const TVec big_f = scale(psi_f, psi_inv);
    const LocalGeometry lf = LocalGeometry::of(fj, Ambient::euclidean);
    const LocalGeometry lF = LocalGeometry::of(big_f, Ambient::lorentz);

    const double phv = ph.value();
    const Mat gF = lF.metric();
    const Mat gFinv = gF.inverse();
    Vec dpsi(n);
    for (int i = 0; i < n; ++i) dpsi(i) = psi_inv.partial(i);
    const Vec grad = gFinv * dpsi;
    Mat dpsi_f(frame.ambient_dim(), n);
    for (int i = 0; i < n; ++i) dpsi_f.col(i) = values(diff(psi_f, i));
    const Vec eta = phv * frame.w() - dpsi_f * grad;
    const Vec fv = values(fj);
    const Vec bigf = values(big_f);

    Sample out;
    out.gram = std::abs(lorentz_inner(bigf, bigf)) + std::abs(lorentz_inner(bigf, eta) - 1.0);
    Mat gram(2, 2);
    gram << lorentz_inner(bigf, bigf), lorentz_inner(bigf, eta), lorentz_inner(bigf, eta),
        lorentz_inner(eta, eta);
    out.lorentzian = gram.determinant() < 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double hess = psi_inv.partial(i, j);
        for (int k = 0; k < n; ++k) hess -= lF.christoffel(k, i, j).value() * dpsi(k);
        const Vec af = values(lf.second_form(i, j));
        const Vec dpsi_af = frame.a() * af - fv.dot(af) * frame.w();
        const Vec rhs = phv * hess * bigf + dpsi_af / phv - gF(i, j) * eta;
        const Vec lhs = values(lF.second_form(i, j));
        out.residual = std::max(out.residual, (lhs - rhs).norm() / std::sqrt(gF(i, i) * gF(j, j)));
      }
    return out;
  });
  AlphaSplitResult r;
  for (const auto& s : samples) {
    r.residual = std::max(r.residual, s.residual);
    r.gram_residual = std::max(r.gram_residual, s.gram);
    r.lorentzian = r.lorentzian && s.lorentzian;
  }
  return r;
}

std::vector<std::pair<int, int>> cluster_ranges(const Vec& sorted, double gap) {
  std::vector<std::pair<int, int>> out;
  const int n = static_cast<int>(sorted.size());
  if (n == 0) return out;
  const double scale = std::max(sorted.cwiseAbs().maxCoeff(), 1e-300);
  int start = 0;
  for (int i = 0; i + 1 < n; ++i) {
    const double d = sorted(i + 1) - sorted(i);
    if (d > gap * scale) {
      out.emplace_back(start, i + 1 - start);
      start = i + 1;
    } else if (d > 1e-2 * gap * scale) {
      throw ClusteringAmbiguity("principal curvatures " + std::to_string(sorted(i)) + " and " +
                                std::to_string(sorted(i + 1)) + " are neither equal nor separated");
    }
  }
  out.emplace_back(start, n - start);
  return out;
}

PrincipalCurvatures principal_curvatures(const Chart& chart, const Vec& u, bool with_dupin) {
  if (chart.ambient != Ambient::euclidean || chart.ambient_dim() != chart.dim() + 1)
    throw DimensionMismatch("principal curvatures need a hypersurface in Euclidean space");
  const int n = chart.dim();
  const LocalGeometry lg = LocalGeometry::at(chart.map, chart.ambient, u, with_dupin ? 1 : 0);
  // Generalized cross product: nu_k = det[d_1 f, ..., d_n f, e_k].
  TVec nu;
  for (int k = 0; k <= n; ++k) {
    TMat m(n + 1, n + 1);
    for (int r = 0; r <= n; ++r) {
      for (int c = 0; c < n; ++c) m(r, c) = lg.df[sz(c)][sz(r)];
      m(r, n) = r == k ? 1.0 : 0.0;
    }
    nu.push_back(m.determinant());
  }
  Taylor norm2 = 0.0;
  for (const auto& x : nu) norm2 += x * x;
  nu = scale(nu, pow(norm2, -0.5));
  TMat b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = ambient_inner(lg.second_form(i, j), nu, Ambient::euclidean);

  const Mat bv = b.values();
  const Mat gv = lg.metric();
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(bv, gv);
  PrincipalCurvatures pc;
  pc.values = es.eigenvalues();
  pc.vectors = es.eigenvectors();
  for (const auto& [start, count] : cluster_ranges(pc.values)) {
    CurvatureCluster c;
    c.multiplicity = count;
    c.value = pc.values.segment(start, count).mean();
    c.directions = pc.vectors.middleCols(start, count);
    if (with_dupin) {
      for (int y = 0; y < count; ++y) {
        const Vec dir = c.directions.col(y);
        Mat dm = Mat::Zero(n, n);
        for (int k = 0; k < n; ++k) {
          const Mat db = b.diff(k).values();
          const Mat dg = lg.g.diff(k).values();
          dm += dir(k) * (db - c.value * dg);
        }
        const double dlambda = (c.directions.transpose() * dm * c.directions).trace() / count;
        c.dupin = std::max(c.dupin, std::abs(dlambda));
      }
    }
    pc.clusters.push_back(c);
  }
  return pc;
}

std::vector<PrincipalCurvatures> principal_curvature_fields(const Chart& chart, const CheckOptions& opts,
                                                            bool with_dupin) {
  return map_indices<PrincipalCurvatures>(chart.box.size(), opts.exec, [&](std::size_t s) {
    return principal_curvatures(chart, chart.box.point(s), with_dupin);
  });
}

}  // namespace isothermic
