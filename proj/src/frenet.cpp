#include "isothermic/frenet.hpp"

#include <cmath>
#include <string>

#include "isothermic/error.hpp"

namespace isothermic {

namespace {

std::size_t sz(int i) { return static_cast<std::size_t>(i); }

Taylor dot(const TVec& a, const TVec& b) {
  Taylor s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

TVec scaled(const TVec& v, const Taylor& s) {
  TVec r;
  for (const auto& x : v) r.push_back(x * s);
  return r;
}

Mat frame_matrix(const FrenetJet& j) {
  const int n = static_cast<int>(j.frame.size());
  Mat m(n, n);
  for (int c = 0; c < n; ++c) m.col(c) = values(j.frame[sz(c)]);
  return m;
}

}  // namespace

FrenetJet frenet_jet(const Map& curve, double t0, int order) {
  if (curve.in_dim() != 1) throw DimensionMismatch("a curve has one parameter");
  const int n = curve.out_dim();
  if (n < 2) throw DimensionMismatch("Frenet frames need N >= 2");
  TVec c = curve.jet(Vec::Constant(1, t0), order + n + 1);
  if (min_order(c) < order + n) throw DomainError("curve cannot deliver the jets a Frenet frame needs");
  std::vector<TVec> d;
  for (int k = 0; k < n; ++k) {
    c = diff(c, 0);
    d.push_back(c);
  }
  FrenetJet fj;
  for (int k = 0; k < n; ++k) {
    TVec u = d[sz(k)];
    for (const auto& e : fj.frame) {
      const Taylor p = dot(u, e);
      for (int i = 0; i < n; ++i) u[sz(i)] -= p * e[sz(i)];
    }
    const Taylor len2 = dot(u, u);
    const double ref = std::sqrt(dot(d[sz(k)], d[sz(k)]).value());
    if (len2.value() <= 0.0 || std::sqrt(len2.value()) <= 1e-8 * std::max(ref, 1e-300))
      throw FrenetDegeneracy("derivative " + std::to_string(k + 1) + " is dependent at t = " + std::to_string(t0));
    fj.frame.push_back(scaled(u, pow(len2, -0.5)));
  }
  fj.speed = sqrt(dot(d[0], d[0]));
  const Taylor inv_speed = reciprocal(fj.speed);
  for (int j = 0; j + 1 < n; ++j)
    fj.curvatures.push_back(dot(diff(fj.frame[sz(j)], 0), fj.frame[sz(j + 1)]) * inv_speed);
  return fj;
}

FrenetData frenet_frame(const Map& curve, const std::vector<double>& t) {
  FrenetData fd;
  fd.curve = curve;
  fd.t = t;
  for (double s : t) {
    const FrenetJet j = frenet_jet(curve, s, 0);
    fd.points.push_back(curve(Vec::Constant(1, s)));
    fd.frames.push_back(frame_matrix(j));
    fd.curvatures.push_back(values(j.curvatures));
    fd.speed.push_back(j.speed.value());
  }
  return fd;
}

double frenet_relation_residual(const Map& curve, double t, double h) {
  const FrenetJet j0 = frenet_jet(curve, t, 0);
  const int n = curve.out_dim();
  auto frame = [&](double s) { return frame_matrix(frenet_jet(curve, s, 0)); };
  const Mat de = (frame(t - 2 * h) - 8.0 * frame(t - h) + 8.0 * frame(t + h) - frame(t + 2 * h)) / (12.0 * h);
  const Mat e = frame_matrix(j0);
  const Vec k = values(j0.curvatures);
  const double v = j0.speed.value();
  double worst = 0.0;
  for (int c = 0; c < n; ++c) {
    Vec expected = Vec::Zero(n);
    if (c > 0) expected -= k(c - 1) * e.col(c - 1);
    if (c + 1 < n) expected += k(c) * e.col(c + 1);
    worst = std::max(worst, (de.col(c) - v * expected).norm() / std::max(1.0, v * k.cwiseAbs().maxCoeff()));
  }
  return worst;
}

LinearSystem darboux_curve_system(const Map& curve) {
  const int n = curve.out_dim();
  LinearSystem s;
  s.dim = n + 1;
  s.matrix = [curve, n](const Taylor& t) {
    const int order = t.is_scalar() ? 0 : t.order();
    const FrenetJet fj = frenet_jet(curve, t.value(), order);
    auto cut = [&](const Taylor& x) { return t.is_scalar() ? Taylor(x.value()) : x; };
    const Taylor v = cut(fj.speed);
    std::vector<Taylor> k;
    for (const auto& x : fj.curvatures) k.push_back(cut(x) * v);
    TMat m(n + 1, n + 1);
    // rows: 0 lambda, 1 beta, 1 + j for V_{j+1}
    m(0, 1) = v;
    m(1, 0) = v;
    m(1, 2) = k[0];
    for (int j = 2; j <= n; ++j) {
      const int row = j;  // V_j
      const int prev = j == 2 ? 1 : j - 1;
      m(row, prev) = -k[sz(j - 2)];
      if (j < n) m(row, j + 1) = k[sz(j - 1)];
    }
    return m;
  };
  return s;
}

double darboux_first_integral(const Vec& state) {
  return state(0) * state(0) - state.tail(state.size() - 1).squaredNorm();
}

}  // namespace isothermic
