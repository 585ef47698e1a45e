#pragma once

// Fixed-step RK4 for linear systems y' = M(t) y + b(t), refined by step
// doubling until both the step-doubling error and a first-integral monitor are
// within tolerance.

#include <functional>
#include <vector>

#include "isothermic/map.hpp"
#include "isothermic/taylor.hpp"

namespace isothermic {

// Coefficients are evaluated on a scalar t or on the univariate jet t0 + s,
// which lets trajectories produce Taylor expansions by Picard iteration.
struct LinearSystem {
  int dim = 0;
  std::function<TMat(const Taylor& t)> matrix;
  std::function<TVec(const Taylor& t)> forcing;  // optional
};

using Monitor = std::function<double(double t, const Vec& y)>;

struct OdeOptions {
  double tol = 1e-10;
  int initial_steps = 32;
  int max_refinements = 14;
};

class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(LinearSystem system, std::vector<double> times, std::vector<Vec> states, double drift,
             double error);

  const std::vector<double>& times() const { return times_; }
  const std::vector<Vec>& states() const { return states_; }
  double t0() const { return times_.front(); }
  double t1() const { return times_.back(); }
  // Max |monitor(t, y(t)) - monitor(t0, y0)| over the accepted grid.
  double monitor_drift() const { return drift_; }
  // Step-doubling estimate on the accepted grid.
  double error_estimate() const { return error_; }

  // One short RK4 step from the nearest grid node.
  Vec state_at(double t) const;
  // Univariate Taylor expansion of the state around t.
  TVec jet_at(double t, int order) const;

 private:
  LinearSystem system_;
  std::vector<double> times_;
  std::vector<Vec> states_;
  double drift_ = 0.0;
  double error_ = 0.0;
};

Vec evaluate_rhs(const LinearSystem& system, double t, const Vec& y);
Vec rk4_step(const LinearSystem& system, double t, const Vec& y, double h);

// Throws IntegratorAccuracy when the refinement budget runs out.
Trajectory integrate_linear_ode(const LinearSystem& system, const Vec& y0, double t0, double t1,
                                const Monitor& monitor = {}, const OdeOptions& opts = {});

// Primitive of a curve-valued integrand as a system with zero matrix.
LinearSystem quadrature(int dim, std::function<TVec(const Taylor& t)> integrand);

}  // namespace isothermic
