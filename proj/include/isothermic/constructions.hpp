#pragma once

// Example families: extrinsic products and their conformal images, the Theta
// family, cyclides of Dupin, and explicit Christoffel and Darboux data.

#include <optional>
#include <vector>

#include "isothermic/frenet.hpp"
#include "isothermic/lightcone.hpp"
#include "isothermic/ode.hpp"
#include "isothermic/transforms.hpp"

namespace isothermic {

// ---- primitives -----------------------------------------------------------

Map circle(double radius, const Vec& center = Vec::Zero(2));
Map line(const Vec& point, const Vec& direction);
Map ellipse(double a, double b);
Map helix(double radius, double pitch);
// Round sphere of the given radius in R^{dim+1} in hyperspherical angles
// (a_1, ..., a_dim): x_{dim+1} = cos a_1, ..., x_1 = sin a_1 ... sin a_dim.
Map round_sphere(int dim, double radius);
// Unit-speed geodesic t -> (sinh t, 0, ..., cosh t) / sqrt(c) of H^m(-c) in L^{m+1}.
Map hyperbolic_geodesic(int m, double c);
// (a, b) -> (sinh a cos b, sinh a sin b, cosh a) / sqrt(c) in L^3.
Map hyperbolic_plane(double c);

Chart make_chart(std::string label, Map map, Box box, Ambient ambient = Ambient::euclidean);

// A factor chart, optionally lying on the sphere of curvature `curvature`
// centred at the origin of its ambient space.
struct Factor {
  Chart chart;
  std::optional<double> curvature;
};

// ---- families -------------------------------------------------------------

struct ProductChart {
  Chart chart;
  std::optional<double> curvature;  // 1/c = sum 1/c_i + <v,v> when every part is spherical
};
// Block-diagonal juxtaposition (f_1, ..., f_k, v_extra); net and product base metric attached.
ProductChart extrinsic_product(const std::vector<Factor>& parts, const Vec& v_extra = Vec());

struct MooreOptions {
  double scale = 1.0;          // homothety for c = 0
  Vec inversion_center;        // required for c = 0
  double inversion_radius = 1.0;
};
// c = 0: inversion after homothety of the product in R^N.
// c > 0: the product lies in S^N(c) in R^{N+1}; homothety by sqrt(c) onto the
// unit sphere, then stereographic projection onto R^N.
// Rejects k > N - n + 1 spherical factors for c > 0.
Chart moore_family(const std::vector<Factor>& parts, double c, const MooreOptions& opts = {},
                   const Vec& v_extra = Vec());

// Theta o (f_j x Psi(spherical parts, v_extra)) with f_j a chart into H^m(-c) in L^{m+1}.
Chart theta_family(const Chart& hyperbolic, const std::vector<Factor>& spherical, const Vec& v_extra, double c);

// Dupin cyclide of characteristic (m, n - m) in R^{n+1} as Theta_Phi o (f_1 x id):
// f_1 is an umbilical inclusion of Q^{n-m}_c in the half-space model of H^{n-m+1}
// (a Euclidean unit sphere centred at height sqrt(1 + c) for c > 0, the
// horosphere x = 1 for c = 0, a hyperplane through the boundary at angle a
// with c = -sin^2 a for -1 < c < 0).
Chart cyclide(int n, int m, double c, double margin = 0.1);
// Closed-form principal curvatures (distinct values) of cyclide(n, m, c) at u,
// up to a common sign: {profile value (multiplicity n-m), rotation value (multiplicity m)}.
std::pair<double, double> cyclide_curvatures(int n, int m, double c, const Vec& u);

// ---- Christoffel ----------------------------------------------------------

struct ChristoffelResult {
  Chart transform;  // the map F
  CombescureData data;
};
// F = a (-f_1, f_2) + v on the product f_1 x f_2; S = a (Pi_2 - Pi_1).
ChristoffelResult christoffel_product(const Chart& f1, const Chart& f2, double a, const Vec& v);

struct ChristoffelWarpedResult {
  Chart transform;
  CombescureData data;
  Trajectory primitive;  // state (gamma~, psi)
  double monitor = 0.0;  // max |gamma~_m + 1/gamma_m|
};
// f = Phi(gamma x g) with Phi(x, y) = (x_1..x_{m-1}, x_m y), gamma a curve in R^m_+
// and g a chart into the unit sphere. F = Phi(a gamma~ x g) + v with
// gamma~' = gamma' / gamma_m^2, gamma~_m = -1/gamma_m; phi = psi + <v, f>,
// psi' = a <gamma~, gamma'>. Then S = a gamma_m^{-2} (Pi_1 - Pi_2).
ChristoffelWarpedResult christoffel_warped(const Map& gamma, const Chart& g, double t0, double t1, double a,
                                           const Vec& v, const OdeOptions& ode = {});

// Warped product map Phi o (gamma x g).
Map warped_product(const Map& gamma, const Map& g);
// Phi o (g1 x g2) as a chart with net {n1, n2}, conformal factor h_m and base
// metric g1* / h_m^2 + g2*, a Riemannian product.
Chart warped_product_chart(const Chart& g1, const Chart& g2);

// ---- Darboux / Ribaucour data ---------------------------------------------

// f = g_1 x g_2 with g_2 on the sphere of radius r2 about P2: F = (0, g_2 - P2), phi = r2^2.
CombescureData darboux_sphere_factor(const Chart& g1, const Chart& g2, const Vec& p2, double r2);

// f = Phi(g_1 x g_2), g_2 unit: F = (0, g_2), phi = h_m.
CombescureData darboux_warped(const Chart& g1, const Chart& g2);

struct DarbouxCurveResult {
  CombescureData data;
  Trajectory trajectory;   // (lambda, beta, V_2, ..., V_N1)
  double first_integral_drift = 0.0;
  double gamma_residual = 0.0;         // |gamma' - lambda alpha'| (arclength)
  double lambda_prime_residual = 0.0;  // |<gamma, e_1> - lambda'|
  Vec initial;                         // state after projection onto K = 0
};
// f = alpha x g_2 with alpha a curve with nonvanishing Frenet curvatures, on
// [t0, t1] x (g_2 box). gamma = beta e_1 + sum V_j e_j; F = (gamma, 0), phi = lambda.
DarbouxCurveResult darboux_curve_factor(const Map& alpha, double t0, double t1, const Chart& g2, const Vec& initial,
                                        const OdeOptions& ode = {});

// F = a f + v, phi = a/2 |f|^2 + <v, f> + c0 (S = a I).
CombescureData trivial_data(const Chart& host, double a, const Vec& v, double c0 = 0.0);

}  // namespace isothermic
