#pragma once

#include <vector>

#include "isothermic/map.hpp"
#include "isothermic/ode.hpp"

namespace isothermic {

// Frenet data of a curve R -> R^N (N >= 2) as univariate jets around t0: the
// frame e_1..e_N comes from Gram-Schmidt of the first N derivatives, and
// k_j = <e_j', e_{j+1}> / |alpha'| are curvatures with respect to arclength.
struct FrenetJet {
  std::vector<TVec> frame;
  TVec curvatures;  // N - 1 entries
  Taylor speed;
};

// Throws FrenetDegeneracy when some derivative falls into the span of the
// previous ones (relative 1e-8).
FrenetJet frenet_jet(const Map& curve, double t0, int order);

struct FrenetData {
  Map curve;
  std::vector<double> t;
  std::vector<Vec> points;
  std::vector<Mat> frames;  // columns e_1..e_N
  std::vector<Vec> curvatures;
  std::vector<double> speed;
};

FrenetData frenet_frame(const Map& curve, const std::vector<double>& t);

// Max deviation of e_j' = |alpha'| (-k_{j-1} e_{j-1} + k_j e_{j+1}) using
// 5-point differences of the sampled frame with step h.
double frenet_relation_residual(const Map& curve, double t, double h);

// The system lambda' = beta, beta' = lambda + k_1 V_2,
// V_2' = -k_1 beta + k_2 V_3, V_j' = -k_{j-1} V_{j-1} + k_j V_{j+1}, V_N' = -k_{N-1} V_{N-1}
// in the curve parameter (right-hand side scaled by the speed).
// State layout: (lambda, beta, V_2, ..., V_N).
LinearSystem darboux_curve_system(const Map& curve);

// lambda^2 - beta^2 - sum V_j^2.
double darboux_first_integral(const Vec& state);

}  // namespace isothermic
