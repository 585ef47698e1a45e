#pragma once

// Euclidean space R^N inside the light cone of L^{N+2}.

#include <string>

#include "isothermic/chart.hpp"
#include "isothermic/map.hpp"
#include "isothermic/minkowski.hpp"

namespace isothermic {

class MoebiusFrame {
 public:
  // Validates <p0,p0> = <w,w> = 0, <p0,w> = 1 and that A is an isometry onto {p0,w}^perp.
  MoebiusFrame(Vec p0, Vec w, Mat a);

  // p0 = e_N + e_{N+1}, w = (e_N - e_{N+1}) / 2, A = inclusion of the first N axes
  // (0-based indices).
  static MoebiusFrame canonical(int n);
  // Image of a frame under a Lorentz transformation.
  MoebiusFrame transformed(const Mat& t) const;

  int dim() const { return static_cast<int>(a_.cols()); }
  int ambient_dim() const { return dim() + 2; }
  const Vec& p0() const { return p0_; }
  const Vec& w() const { return w_; }
  const Mat& a() const { return a_; }
  // Columns [A | p0 | w], a basis of L^{N+2}.
  Mat basis() const;

  Vec psi(const Vec& x) const;
  TVec psi(const TVec& x) const;
  Vec psi_inverse(const Vec& p) const;
  TVec psi_inverse(const TVec& p) const;

 private:
  Vec p0_;
  Vec w_;
  Mat a_;
};

Vec psi_embed(const MoebiusFrame& frame, const Vec& x);
// Requires <p,w> = 1 and <p,p> = 0 within 1e-8 (relative).
Vec psi_invert(const MoebiusFrame& frame, const Vec& p);

// x / <x,w>; throws ProjectionSingular when |<x,w>| < 1e-9 |x|.
Vec project_to_model(const MoebiusFrame& frame, const Vec& x);
TVec project_to_model(const MoebiusFrame& frame, const TVec& x);
// Psi^{-1}(x / <x,w>).
Vec drop_point(const MoebiusFrame& frame, const Vec& x);
TVec drop_point(const MoebiusFrame& frame, const TVec& x);

struct SphereVector {
  Vec v;
  double h = 0.0;  // mean curvature <v,w>; zero for hyperplanes
};

// Orientation +1 gives mean curvature h = +1/r.
SphereVector sphere_from_center_radius(const MoebiusFrame& frame, const Vec& q0, double r, int orient = 1);
SphereVector hyperplane_from_normal_offset(const MoebiusFrame& frame, const Vec& n, double d);
// <v1,v2>; throws NoIntersection when |<v1,v2>| > 1.
double intersection_angle(const SphereVector& s1, const SphereVector& s2);

// F = phi^{-1} (Psi o f), a map into the light cone.
Map lift_conformal(const MoebiusFrame& frame, const Map& f, const Map& phi);
Chart lift_conformal(const MoebiusFrame& frame, const Chart& f, const Map& phi);

struct Dropped {
  Map map;     // C(F) = Psi^{-1}(F / <F,w>)
  Map factor;  // <F,w>^{-1}
};
Dropped drop_to_euclidean(const MoebiusFrame& frame, const Map& big_f);
// Checks <F,w> > 0 on the sample grid before dropping.
Chart drop_to_euclidean(const MoebiusFrame& frame, const Chart& big_f);

struct ConformalMapSpec {
  enum class Kind { inversion, similarity, lorentz };
  Kind kind = Kind::lorentz;
  // inversion
  Vec center;
  double radius = 1.0;
  // similarity x -> ratio * rotation * x + translation
  double ratio = 1.0;
  Mat rotation;
  Vec translation;
  // lorentz
  Mat t;

  static ConformalMapSpec inversion_about(const Vec& center, double radius);
  static ConformalMapSpec similarity_of(double ratio, const Mat& rotation, const Vec& translation);
  static ConformalMapSpec lorentz_of(const Mat& t);
};

// Lorentz transformation realizing a ConformalMapSpec (reflection for inversions).
Mat lorentz_matrix(const MoebiusFrame& frame, const ConformalMapSpec& spec);
// C(T o Psi) as an evaluable map R^N -> R^N.
Map moebius_map(const MoebiusFrame& frame, const ConformalMapSpec& spec);
Vec apply_moebius(const MoebiusFrame& frame, const ConformalMapSpec& spec, const Vec& x);

// The similarity H of ratio -<wbar,w>/2 and inversion centre q such that
// C_frame(Psi_other(x)) = I_q(H(x)) with I_q the unit inversion about q.
struct FrameChange {
  double ratio;
  Vec inversion_center;
  Mat t;  // Lorentz map realizing H: Psi o H = ratio * T o Psi
};
FrameChange frame_change(const MoebiusFrame& frame, const MoebiusFrame& other);
Vec apply_frame_change(const MoebiusFrame& frame, const FrameChange& change, const Vec& x);

// Stereographic map S^N(c) -> R^N, X -> C(B X + v), B an isometry R^{N+1} -> {v}^perp.
struct StereographicSpec {
  Mat b;  // (N+2) x (N+1)
  Vec v;
  double c = 1.0;
};
// B restricted to R^N is A and B e_{N+1} is spacelike with w = v + B e_{N+1} (up to scale).
StereographicSpec canonical_stereographic(const MoebiusFrame& frame, double c);
Map stereographic_map(const MoebiusFrame& frame, const StereographicSpec& spec);

// L_{C,D}(X,Y) = C X + D Y on H^m(-c) x S^{N-m}(c), C: L^{m+1} -> V, D: R^{N-m+1} -> W.
struct ThetaSpec {
  int m = 1;
  double c = 1.0;
  Mat cmat;  // (N+2) x (m+1)
  Mat dmat;  // (N+2) x (N-m+1)
};
// V = last m+1 coordinates (timelike included), W = the first N-m+1.
ThetaSpec canonical_theta(const MoebiusFrame& frame, int m, double c);
// Theta = C(L_{C,D}) as a map R^{m+1} x R^{N-m+1} -> R^N.
Map theta_map(const MoebiusFrame& frame, const ThetaSpec& spec);
// L_{C,D} itself (into the light cone).
Map theta_lift(const MoebiusFrame& frame, const ThetaSpec& spec);

// (X, Y) -> (x_1, ..., x_{m-1}, sigma(X) Y) with sigma = sqrt(c) x_m, on the
// half-space model of H^m(-c) times S^{N-m}(c) in R^{N-m+1}.
Map theta_halfspace(int m, int n, double c);
// sigma o pi_0 as a map on the same domain.
Map theta_halfspace_factor(int m, int n, double c);

}  // namespace isothermic
