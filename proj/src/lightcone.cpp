#include "isothermic/lightcone.hpp"

#include <cmath>
#include <string>

#include "isothermic/error.hpp"

namespace isothermic {

namespace {

constexpr double kFrameTol = 1e-9;
constexpr double kSingular = 1e-9;

TVec constant_vec(const Vec& v) {
  TVec r;
  for (Eigen::Index i = 0; i < v.size(); ++i) r.emplace_back(v(i));
  return r;
}

TVec mat_times(const Mat& m, const TVec& x) {
  TVec r(static_cast<std::size_t>(m.rows()), Taylor(0.0));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0.0) r[static_cast<std::size_t>(i)] += m(i, j) * x[static_cast<std::size_t>(j)];
  return r;
}

void require_singular_free(double d, double norm) {
  if (std::abs(d) < kSingular * norm)
    throw ProjectionSingular("<x,w> = " + std::to_string(d) + " for |x| = " + std::to_string(norm));
}

}  // namespace

MoebiusFrame::MoebiusFrame(Vec p0, Vec w, Mat a) : p0_(std::move(p0)), w_(std::move(w)), a_(std::move(a)) {
  const Eigen::Index dim = p0_.size();
  if (w_.size() != dim || a_.rows() != dim || a_.cols() != dim - 2)
    throw DimensionMismatch("frame needs p0, w in L^{N+2} and N columns of A");
  if (dim < 4) throw DimensionMismatch("frames need N >= 2");
  const double scale = std::max({1.0, p0_.squaredNorm(), w_.squaredNorm()});
  if (std::abs(lorentz_inner(p0_, p0_)) > kFrameTol * scale || std::abs(lorentz_inner(w_, w_)) > kFrameTol * scale ||
      std::abs(lorentz_inner(p0_, w_) - 1.0) > kFrameTol * scale)
    throw DomainError("frame needs null p0, w with <p0,w> = 1");
  for (Eigen::Index i = 0; i < a_.cols(); ++i) {
    const Vec ai = a_.col(i);
    const double s = std::max(scale, ai.squaredNorm());
    if (std::abs(lorentz_inner(ai, p0_)) > kFrameTol * s || std::abs(lorentz_inner(ai, w_)) > kFrameTol * s)
      throw DomainError("columns of A must be orthogonal to p0 and w");
    for (Eigen::Index j = 0; j < a_.cols(); ++j)
      if (std::abs(lorentz_inner(ai, a_.col(j)) - (i == j ? 1.0 : 0.0)) > kFrameTol * s)
        throw DomainError("columns of A must be orthonormal");
  }
}

MoebiusFrame MoebiusFrame::canonical(int n) {
  const int dim = n + 2;
  Vec p0 = Vec::Zero(dim), w = Vec::Zero(dim);
  p0(n) = 1.0;
  p0(n + 1) = 1.0;
  w(n) = 0.5;
  w(n + 1) = -0.5;
  Mat a = Mat::Zero(dim, n);
  a.topRows(n).setIdentity();
  return MoebiusFrame(p0, w, a);
}

MoebiusFrame MoebiusFrame::transformed(const Mat& t) const {
  if (lorentz_defect(t) > 1e-9 * std::max(1.0, t.squaredNorm()))
    throw DomainError("transformation does not preserve the Lorentz form");
  return MoebiusFrame(t * p0_, t * w_, t * a_);
}

Mat MoebiusFrame::basis() const {
  Mat m(ambient_dim(), ambient_dim());
  m << a_, p0_, w_;
  return m;
}

Vec MoebiusFrame::psi(const Vec& x) const {
  if (x.size() != dim()) throw DimensionMismatch("point dimension differs from frame");
  return p0_ + a_ * x - 0.5 * x.squaredNorm() * w_;
}

TVec MoebiusFrame::psi(const TVec& x) const {
  if (static_cast<int>(x.size()) != dim()) throw DimensionMismatch("point dimension differs from frame");
  Taylor sq = 0.0;
  for (const auto& xi : x) sq += xi * xi;
  TVec r = mat_times(a_, x);
  for (int k = 0; k < ambient_dim(); ++k) r[static_cast<std::size_t>(k)] += p0_(k) - 0.5 * w_(k) * sq;
  return r;
}

Vec MoebiusFrame::psi_inverse(const Vec& p) const {
  Vec x(dim());
  for (int i = 0; i < dim(); ++i) x(i) = lorentz_inner(p, a_.col(i));
  return x;
}

TVec MoebiusFrame::psi_inverse(const TVec& p) const {
  TVec x;
  for (int i = 0; i < dim(); ++i) x.push_back(lorentz_inner(p, constant_vec(a_.col(i))));
  return x;
}

Vec psi_embed(const MoebiusFrame& frame, const Vec& x) { return frame.psi(x); }

Vec psi_invert(const MoebiusFrame& frame, const Vec& p) {
  if (p.size() != frame.ambient_dim()) throw DimensionMismatch("point is not in L^{N+2}");
  const double scale = std::max(1.0, p.squaredNorm());
  if (std::abs(lorentz_inner(p, frame.w()) - 1.0) > 1e-8 * scale || std::abs(lorentz_inner(p, p)) > 1e-8 * scale)
    throw DomainError("point is not on the Euclidean slice <p,w> = 1 of the light cone");
  return frame.psi_inverse(p);
}

Vec project_to_model(const MoebiusFrame& frame, const Vec& x) {
  const double d = lorentz_inner(x, frame.w());
  require_singular_free(d, x.norm());
  return x / d;
}

TVec project_to_model(const MoebiusFrame& frame, const TVec& x) {
  const Taylor d = lorentz_inner(x, constant_vec(frame.w()));
  require_singular_free(d.value(), values(x).norm());
  const Taylor inv = reciprocal(d);
  TVec r;
  for (const auto& xi : x) r.push_back(xi * inv);
  return r;
}

Vec drop_point(const MoebiusFrame& frame, const Vec& x) {
  return frame.psi_inverse(project_to_model(frame, x));
}

TVec drop_point(const MoebiusFrame& frame, const TVec& x) {
  return frame.psi_inverse(project_to_model(frame, x));
}

SphereVector sphere_from_center_radius(const MoebiusFrame& frame, const Vec& q0, double r, int orient) {
  if (!(r > 0.0)) throw DomainError("sphere radius must be positive");
  if (orient != 1 && orient != -1) throw DomainError("orientation must be +1 or -1");
  const double h = orient / r;
  SphereVector s;
  s.v = h * frame.psi(q0) + frame.w() / (2.0 * h);
  s.h = lorentz_inner(s.v, frame.w());
  return s;
}

SphereVector hyperplane_from_normal_offset(const MoebiusFrame& frame, const Vec& n, double d) {
  if (n.size() != frame.dim()) throw DimensionMismatch("normal dimension differs from frame");
  if (std::abs(n.norm() - 1.0) > 1e-10) throw DomainError("hyperplane normal must be a unit vector");
  SphereVector s;
  s.v = frame.a() * n - d * frame.w();
  s.h = lorentz_inner(s.v, frame.w());
  return s;
}

double intersection_angle(const SphereVector& s1, const SphereVector& s2) {
  const double c = lorentz_inner(s1.v, s2.v);
  if (std::abs(c) > 1.0 + 1e-10)
    throw NoIntersection("spheres do not meet: <v1,v2> = " + std::to_string(c));
  return c;
}

Map lift_conformal(const MoebiusFrame& frame, const Map& f, const Map& phi) {
  if (f.out_dim() != frame.dim()) throw DimensionMismatch("lift: map target differs from frame dimension");
  if (phi.out_dim() != 1 || phi.in_dim() != f.in_dim()) throw DimensionMismatch("lift: factor must be scalar");
  return combine(f.in_dim(), frame.ambient_dim(), {f, phi}, [frame](const std::vector<TVec>& p) {
    if (p[1][0].value() == 0.0) throw DomainError("conformal factor vanishes");
    const Taylor inv = reciprocal(p[1][0]);
    TVec r = frame.psi(p[0]);
    for (auto& x : r) x *= inv;
    return r;
  });
}

Chart lift_conformal(const MoebiusFrame& frame, const Chart& f, const Map& phi) {
  for (std::size_t s = 0; s < f.box.size(); ++s)
    if (phi(f.box.point(s))(0) == 0.0) throw DomainError("conformal factor vanishes on the sample grid");
  Chart c = f;
  c.label = f.label + ".lift";
  c.map = lift_conformal(frame, f.map, phi);
  c.ambient = Ambient::lorentz;
  c.factor.reset();
  return c;
}

Dropped drop_to_euclidean(const MoebiusFrame& frame, const Map& big_f) {
  if (big_f.out_dim() != frame.ambient_dim()) throw DimensionMismatch("drop: map is not into L^{N+2}");
  Dropped d;
  d.map = combine(big_f.in_dim(), frame.dim(), {big_f},
                  [frame](const std::vector<TVec>& p) { return drop_point(frame, p[0]); });
  const Vec w = frame.w();
  d.factor = combine(big_f.in_dim(), 1, {big_f}, [w](const std::vector<TVec>& p) {
    return TVec{reciprocal(lorentz_inner(p[0], constant_vec(w)))};
  });
  return d;
}

Chart drop_to_euclidean(const MoebiusFrame& frame, const Chart& big_f) {
  for (std::size_t s = 0; s < big_f.box.size(); ++s) {
    const Vec x = big_f.map(big_f.box.point(s));
    const double d = lorentz_inner(x, frame.w());
    if (!(d > kSingular * x.norm()))
      throw ProjectionSingular("<F,w> = " + std::to_string(d) + " at sample " + std::to_string(s));
  }
  const Dropped d = drop_to_euclidean(frame, big_f.map);
  Chart c = big_f;
  c.label = big_f.label + ".drop";
  c.map = d.map;
  c.ambient = Ambient::euclidean;
  c.factor = d.factor;
  return c;
}

ConformalMapSpec ConformalMapSpec::inversion_about(const Vec& center, double radius) {
  ConformalMapSpec s;
  s.kind = Kind::inversion;
  s.center = center;
  s.radius = radius;
  return s;
}

ConformalMapSpec ConformalMapSpec::similarity_of(double ratio, const Mat& rotation, const Vec& translation) {
  ConformalMapSpec s;
  s.kind = Kind::similarity;
  s.ratio = ratio;
  s.rotation = rotation;
  s.translation = translation;
  return s;
}

ConformalMapSpec ConformalMapSpec::lorentz_of(const Mat& t) {
  ConformalMapSpec s;
  s.kind = Kind::lorentz;
  s.t = t;
  return s;
}

Mat lorentz_matrix(const MoebiusFrame& frame, const ConformalMapSpec& spec) {
  const int n = frame.dim();
  switch (spec.kind) {
    case ConformalMapSpec::Kind::lorentz:
      if (spec.t.rows() != n + 2 || spec.t.cols() != n + 2) throw DimensionMismatch("Lorentz matrix size");
      if (lorentz_defect(spec.t) > 1e-10 * std::max(1.0, spec.t.squaredNorm()))
        throw DomainError("T does not preserve the Lorentz form");
      return spec.t;
    case ConformalMapSpec::Kind::inversion:
      return reflection_matrix(sphere_from_center_radius(frame, spec.center, spec.radius).v);
    case ConformalMapSpec::Kind::similarity: {
      if (!(spec.ratio > 0.0)) throw DomainError("similarity ratio must be positive");
      if (spec.rotation.rows() != n || spec.rotation.cols() != n || spec.translation.size() != n)
        throw DimensionMismatch("similarity parameters");
      if ((spec.rotation.transpose() * spec.rotation - Mat::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-10)
        throw DomainError("similarity rotation is not orthogonal");
      // Images of the basis [A | p0 | w]: Psi o H = ratio * T o Psi.
      Mat images(n + 2, n + 2);
      for (int i = 0; i < n; ++i) {
        const Vec qe = spec.rotation.col(i);
        images.col(i) = frame.a() * qe - qe.dot(spec.translation) * frame.w();
      }
      images.col(n) = frame.psi(spec.translation) / spec.ratio;
      images.col(n + 1) = spec.ratio * frame.w();
      return images * frame.basis().inverse();
    }
  }
  return {};
}

Map moebius_map(const MoebiusFrame& frame, const ConformalMapSpec& spec) {
  const Mat t = lorentz_matrix(frame, spec);
  return Map::analytic(frame.dim(), frame.dim(),
                       [frame, t](const TVec& x) { return drop_point(frame, mat_times(t, frame.psi(x))); });
}

Vec apply_moebius(const MoebiusFrame& frame, const ConformalMapSpec& spec, const Vec& x) {
  if (spec.kind == ConformalMapSpec::Kind::inversion && (x - spec.center).norm() == 0.0)
    throw DomainError("inversion centre is not in the domain");
  return drop_point(frame, lorentz_matrix(frame, spec) * frame.psi(x));
}

FrameChange frame_change(const MoebiusFrame& frame, const MoebiusFrame& other) {
  if (frame.dim() != other.dim()) throw DimensionMismatch("frames of different dimension");
  const double ww = lorentz_inner(other.w(), frame.w());
  if (std::abs(ww) < 1e-12) throw DomainError("frames share the point at infinity; the change is a similarity");
  const Vec qhat = other.w() / ww;
  const Vec v = qhat + 0.5 * frame.w();
  FrameChange c;
  c.ratio = -0.5 * ww;
  c.inversion_center = frame.psi_inverse(qhat);
  c.t = reflection_matrix(v) * other.basis() * frame.basis().inverse();
  return c;
}

Vec apply_frame_change(const MoebiusFrame& frame, const FrameChange& change, const Vec& x) {
  const Vec hx = drop_point(frame, change.t * frame.psi(x));
  const Vec d = hx - change.inversion_center;
  return change.inversion_center + d / d.squaredNorm();
}

StereographicSpec canonical_stereographic(const MoebiusFrame& frame, double c) {
  if (!(c > 0.0)) throw DomainError("stereographic map needs c > 0");
  const int n = frame.dim();
  StereographicSpec s;
  s.c = c;
  s.b = Mat(n + 2, n + 1);
  s.b.leftCols(n) = frame.a();
  s.b.col(n) = frame.p0() + 0.5 * frame.w();
  s.v = (-frame.p0() + 0.5 * frame.w()) / std::sqrt(c);
  return s;
}

Map stereographic_map(const MoebiusFrame& frame, const StereographicSpec& spec) {
  const int n = frame.dim();
  if (spec.b.rows() != n + 2 || spec.b.cols() != n + 1 || spec.v.size() != n + 2)
    throw DimensionMismatch("stereographic data sizes");
  if (std::abs(lorentz_inner(spec.v, spec.v) + 1.0 / spec.c) > 1e-10 * std::max(1.0, 1.0 / spec.c))
    throw DomainError("stereographic map needs <v,v> = -1/c");
  Mat expected = Mat::Identity(n + 1, n + 1);
  if ((lorentz_gram(spec.b) - expected).cwiseAbs().maxCoeff() > 1e-10)
    throw DomainError("B is not an isometry");
  Mat jv = spec.v;
  jv(n + 1) = -jv(n + 1);
  if ((spec.b.transpose() * jv).cwiseAbs().maxCoeff() > 1e-10) throw DomainError("B does not map into {v}^perp");
  const Mat b = spec.b;
  const Vec v = spec.v;
  return Map::analytic(n + 1, n, [frame, b, v](const TVec& x) {
    TVec p = mat_times(b, x);
    for (int k = 0; k < b.rows(); ++k) p[static_cast<std::size_t>(k)] += v(k);
    return drop_point(frame, p);
  });
}

namespace {

void validate_theta(const MoebiusFrame& frame, const ThetaSpec& s) {
  const int n = frame.dim();
  if (s.m < 1 || s.m > n - 1) throw DomainError("theta needs 1 <= m <= N-1");
  if (!(s.c > 0.0)) throw DomainError("theta needs c > 0");
  if (s.cmat.rows() != n + 2 || s.cmat.cols() != s.m + 1 || s.dmat.rows() != n + 2 ||
      s.dmat.cols() != n - s.m + 1)
    throw DimensionMismatch("theta isometry sizes");
  Mat jv = Mat::Identity(s.m + 1, s.m + 1);
  jv(s.m, s.m) = -1.0;
  Mat j = Mat::Identity(n + 2, n + 2);
  j(n + 1, n + 1) = -1.0;
  if ((s.cmat.transpose() * j * s.cmat - jv).cwiseAbs().maxCoeff() > 1e-10)
    throw DomainError("C is not an isometry onto a timelike subspace");
  if ((s.dmat.transpose() * j * s.dmat - Mat::Identity(n - s.m + 1, n - s.m + 1)).cwiseAbs().maxCoeff() > 1e-10)
    throw DomainError("D is not an isometry onto a spacelike subspace");
  if ((s.cmat.transpose() * j * s.dmat).cwiseAbs().maxCoeff() > 1e-10)
    throw DomainError("V and W are not orthogonal");
}

}  // namespace

ThetaSpec canonical_theta(const MoebiusFrame& frame, int m, double c) {
  const int n = frame.dim();
  ThetaSpec s;
  s.m = m;
  s.c = c;
  if (m < 1 || m > n - 1) throw DomainError("theta needs 1 <= m <= N-1");
  s.cmat = Mat::Zero(n + 2, m + 1);
  for (int i = 0; i <= m; ++i) s.cmat(n + 1 - m + i, i) = 1.0;
  s.dmat = Mat::Zero(n + 2, n - m + 1);
  for (int i = 0; i <= n - m; ++i) s.dmat(i, i) = 1.0;
  return s;
}

Map theta_lift(const MoebiusFrame& frame, const ThetaSpec& spec) {
  validate_theta(frame, spec);
  const int n = frame.dim();
  Mat cd(n + 2, n + 2);
  cd << spec.cmat, spec.dmat;
  return Map::analytic(n + 2, n + 2, [cd](const TVec& xy) { return mat_times(cd, xy); });
}

Map theta_map(const MoebiusFrame& frame, const ThetaSpec& spec) {
  const Map lift = theta_lift(frame, spec);
  return Map::analytic(frame.dim() + 2, frame.dim(),
                       [frame, lift](const TVec& xy) { return drop_point(frame, lift.apply(xy)); });
}

Map theta_halfspace(int m, int n, double c) {
  if (m < 1 || m > n - 1) throw DomainError("theta_halfspace needs 1 <= m <= N-1");
  if (!(c > 0.0)) throw DomainError("theta_halfspace needs c > 0");
  const double sc = std::sqrt(c);
  return Map::analytic(n + 1, n, [m, n, sc](const TVec& xy) {
    const Taylor& xm = xy[static_cast<std::size_t>(m - 1)];
    if (!(xm.value() > 0.0)) throw DomainError("half-space point needs x_m > 0");
    TVec r(xy.begin(), xy.begin() + (m - 1));
    const Taylor sigma = sc * xm;
    for (int k = m; k < n + 1; ++k) r.push_back(sigma * xy[static_cast<std::size_t>(k)]);
    return r;
  });
}

Map theta_halfspace_factor(int m, int n, double c) {
  const double sc = std::sqrt(c);
  return Map::analytic(n + 1, 1, [m, sc](const TVec& xy) {
    return TVec{sc * xy[static_cast<std::size_t>(m - 1)]};
  });
}

}  // namespace isothermic
