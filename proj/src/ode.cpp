#include "isothermic/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "isothermic/error.hpp"

namespace isothermic {

namespace {

std::size_t sz(int i) { return static_cast<std::size_t>(i); }

struct Run {
  std::vector<double> t;
  std::vector<Vec> y;
};

Run run(const LinearSystem& s, const Vec& y0, double t0, double t1, int steps) {
  Run r;
  const double h = (t1 - t0) / steps;
  r.t.push_back(t0);
  r.y.push_back(y0);
  for (int k = 0; k < steps; ++k) {
    r.y.push_back(rk4_step(s, r.t.back(), r.y.back(), h));
    r.t.push_back(k + 1 == steps ? t1 : t0 + (k + 1) * h);
  }
  return r;
}

// Antiderivative vanishing at s = 0 of a univariate jet.
Taylor integrate(const Taylor& x, int order) {
  Taylor r = Taylor::constant(1, order, 0.0);
  if (x.is_scalar()) {
    if (order >= 1) r.coeff(1) = x.value();
    return r;
  }
  for (int k = 0; k + 1 <= order && k <= x.order(); ++k) r.coeff(k + 1) = x.coeff(k) / (k + 1);
  return r;
}

}  // namespace

Vec evaluate_rhs(const LinearSystem& s, double t, const Vec& y) {
  const Taylor tt(t);
  Vec r = s.matrix(tt).values() * y;
  if (s.forcing) r += values(s.forcing(tt));
  return r;
}

Vec rk4_step(const LinearSystem& s, double t, const Vec& y, double h) {
  const Vec k1 = evaluate_rhs(s, t, y);
  const Vec k2 = evaluate_rhs(s, t + 0.5 * h, y + 0.5 * h * k1);
  const Vec k3 = evaluate_rhs(s, t + 0.5 * h, y + 0.5 * h * k2);
  const Vec k4 = evaluate_rhs(s, t + h, y + h * k3);
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Trajectory::Trajectory(LinearSystem system, std::vector<double> times, std::vector<Vec> states, double drift,
                       double error)
    : system_(std::move(system)), times_(std::move(times)), states_(std::move(states)), drift_(drift),
      error_(error) {}

Vec Trajectory::state_at(double t) const {
  const double lo = std::min(t0(), t1()), hi = std::max(t0(), t1());
  const double span = hi - lo;
  if (t < lo - 1e-12 * span || t > hi + 1e-12 * span)
    throw DomainError("time " + std::to_string(t) + " outside the integrated interval");
  std::size_t best = 0;
  for (std::size_t k = 1; k < times_.size(); ++k)
    if (std::abs(times_[k] - t) < std::abs(times_[best] - t)) best = k;
  const double h = t - times_[best];
  if (h == 0.0) return states_[best];
  return rk4_step(system_, times_[best], states_[best], h);
}

TVec Trajectory::jet_at(double t, int order) const {
  const Vec y0 = state_at(t);
  const Taylor s = Taylor::variable(1, order, 0, t);
  const TMat m = system_.matrix(s);
  TVec b;
  if (system_.forcing) b = system_.forcing(s);
  TVec y;
  for (int i = 0; i < system_.dim; ++i) y.push_back(Taylor::constant(1, order, y0(i)));
  for (int it = 0; it <= order; ++it) {
    TVec rhs = m * y;
    if (!b.empty())
      for (int i = 0; i < system_.dim; ++i) rhs[sz(i)] += b[sz(i)];
    for (int i = 0; i < system_.dim; ++i) y[sz(i)] = Taylor(y0(i)) + integrate(rhs[sz(i)], order);
  }
  return y;
}

Trajectory integrate_linear_ode(const LinearSystem& system, const Vec& y0, double t0, double t1,
                                const Monitor& monitor, const OdeOptions& opts) {
  if (y0.size() != system.dim) throw DimensionMismatch("initial state size");
  const double m0 = monitor ? monitor(t0, y0) : 0.0;
  int steps = std::max(1, opts.initial_steps);
  Run coarse = run(system, y0, t0, t1, steps);
  double error = 0.0, drift = 0.0;
  for (int level = 0; level <= opts.max_refinements; ++level) {
    Run fine = run(system, y0, t0, t1, 2 * steps);
    error = 0.0;
    for (int k = 0; k <= steps; ++k) {
      const Vec& a = coarse.y[sz(k)];
      const Vec& b = fine.y[sz(2 * k)];
      error = std::max(error, (a - b).norm() / std::max(1.0, b.norm()));
    }
    drift = 0.0;
    if (monitor)
      for (std::size_t k = 0; k < fine.t.size(); ++k)
        drift = std::max(drift, std::abs(monitor(fine.t[k], fine.y[k]) - m0));
    if (error <= opts.tol && drift <= opts.tol)
      return Trajectory(system, std::move(fine.t), std::move(fine.y), drift, error);
    coarse = std::move(fine);
    steps *= 2;
  }
  throw IntegratorAccuracy("step floor reached with error " + std::to_string(error) + " and monitor drift " +
                           std::to_string(drift));
}

LinearSystem quadrature(int dim, std::function<TVec(const Taylor& t)> integrand) {
  LinearSystem s;
  s.dim = dim;
  s.matrix = [dim](const Taylor&) { return TMat(dim, dim); };
  s.forcing = std::move(integrand);
  return s;
}

}  // namespace isothermic
