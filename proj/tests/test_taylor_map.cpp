#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "isothermic/error.hpp"
#include "isothermic/map.hpp"
#include "isothermic/taylor.hpp"

using namespace isothermic;

namespace {

// Central difference of a scalar function, an oracle independent of the jet code.
template <class F>
double fd1(F f, double x, double h = 1e-5) {
  return (f(x + h) - f(x - h)) / (2 * h);
}

}  // namespace

TEST(Taylor, UnivariateCoefficientsOfExp) {
  const Taylor t = Taylor::variable(1, 10, 0, 0.3);
  const Taylor e = exp(t);
  double fact = 1.0;
  for (int k = 0; k <= 10; ++k) {
    if (k > 0) fact *= k;
    EXPECT_NEAR(e.coeff(k), std::exp(0.3) / fact, 1e-15);
  }
}

TEST(Taylor, ElementaryFunctionsMatchClosedFormDerivatives) {
  const double x0 = 0.7;
  const Taylor x = Taylor::variable(1, 3, 0, x0);
  EXPECT_NEAR(sin(x).partial(0), std::cos(x0), 1e-15);
  EXPECT_NEAR(cos(x).partial(0), -std::sin(x0), 1e-15);
  EXPECT_NEAR(log(x).partial(0), 1 / x0, 1e-14);
  EXPECT_NEAR(sqrt(x).partial(0), 0.5 / std::sqrt(x0), 1e-14);
  EXPECT_NEAR(pow(x, 2.5).partial(0, 0), 2.5 * 1.5 * std::pow(x0, 0.5), 1e-13);
  EXPECT_NEAR(sinh(x).partial(0), std::cosh(x0), 1e-14);
  EXPECT_NEAR(cosh(x).partial(0), std::sinh(x0), 1e-14);
  EXPECT_NEAR(reciprocal(x).partial(0, 0), 2 / (x0 * x0 * x0), 1e-12);
}

TEST(Taylor, MixedPartialsMatchFiniteDifferences) {
  auto f = [](double a, double b) { return std::sin(a * b) * std::exp(a) / (1 + b * b); };
  const Vec u0 = (Vec(2) << 0.4, -0.8).finished();
  const TVec x = variables(u0, 3);
  const Taylor t = sin(x[0] * x[1]) * exp(x[0]) / (1.0 + x[1] * x[1]);
  EXPECT_NEAR(t.value(), f(0.4, -0.8), 1e-15);
  EXPECT_NEAR(t.partial(0), fd1([&](double a) { return f(a, -0.8); }, 0.4), 1e-9);
  EXPECT_NEAR(t.partial(1), fd1([&](double b) { return f(0.4, b); }, -0.8), 1e-9);
  const double h = 1e-4;
  const double mixed = (f(0.4 + h, -0.8 + h) - f(0.4 + h, -0.8 - h) - f(0.4 - h, -0.8 + h) + f(0.4 - h, -0.8 - h)) /
                       (4 * h * h);
  EXPECT_NEAR(t.partial(0, 1), mixed, 1e-6);
}

TEST(Taylor, MixedOrdersTruncateToTheLowerOrder) {
  const Taylor a = Taylor::variable(2, 4, 0, 1.0);
  const Taylor b = Taylor::variable(2, 2, 1, 2.0);
  EXPECT_EQ((a * b).order(), 2);
  EXPECT_EQ((a + 3.0).order(), 4);
  EXPECT_EQ(a.diff(0).order(), 3);
}

TEST(Taylor, ReciprocalIsMultiplicativeInverse) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(0.5, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec u = (Vec(3) << d(rng), d(rng), d(rng)).finished();
    const TVec x = variables(u, 4);
    const Taylor p = x[0] * x[1] + x[2] * x[2] + 1.0;
    const Taylor one = p * reciprocal(p);
    EXPECT_NEAR(one.value(), 1.0, 1e-14);
    for (int k = 1; k < one.size(); ++k) EXPECT_NEAR(one.coeff(k), 0.0, 1e-12);
  }
}

TEST(Taylor, SubstituteIsTheChainRule) {
  // f(y) = y0^2 y1 around (1, 2); y = (cos u, u^2) at u = 1 is not aligned, so
  // expand f around the input values instead.
  const double u0 = 0.5;
  const TVec ys{cos(Taylor::variable(1, 3, 0, u0)), square(Taylor::variable(1, 3, 0, u0))};
  const TVec poly_in = variables(values(ys), 3);
  const TVec poly{poly_in[0] * poly_in[0] * poly_in[1]};
  const Taylor composed = substitute(poly, ys)[0];
  const Taylor direct = ys[0] * ys[0] * ys[1];
  for (int k = 0; k <= 3; ++k) EXPECT_NEAR(composed.coeff(k), direct.coeff(k), 1e-14);
}

TEST(Map, ComposeStackCartesianSelect) {
  const Map f = Map::analytic(2, 1, [](const TVec& x) { return TVec{x[0] * exp(x[1])}; });
  const Map g = Map::analytic(1, 2, [](const TVec& x) { return TVec{sin(x[0]), x[0] * x[0]}; });
  const Map fg = compose(f, g);
  const Vec t = Vec::Constant(1, 0.3);
  EXPECT_NEAR(fg(t)(0), std::sin(0.3) * std::exp(0.09), 1e-15);
  const double d = std::cos(0.3) * std::exp(0.09) + std::sin(0.3) * std::exp(0.09) * 0.6;
  EXPECT_NEAR(fg.jet(t, 1)[0].partial(0), d, 1e-14);

  const Map s = stack({g, g});
  EXPECT_EQ(s.out_dim(), 4);
  const Map c = cartesian({g, g});
  EXPECT_EQ(c.in_dim(), 2);
  const Vec uv = (Vec(2) << 0.1, 0.2).finished();
  EXPECT_NEAR(c(uv)(3), 0.04, 1e-16);
  EXPECT_NEAR(select(2, {1})(uv)(0), 0.2, 0);
}

TEST(Map, ConstantMapDeliversJetsOfAnyOrder) {
  const Map c = Map::constant(2, Vec::Constant(1, 4.0));
  const TVec j = c.jet(Vec::Zero(2), 3);
  EXPECT_EQ(j[0].order(), 3);
  EXPECT_EQ(j[0].partial(0), 0.0);
}

TEST(Map, FiniteDifferenceJetsAgreeWithAnalyticJets) {
  const Map f = Map::analytic(2, 3, [](const TVec& x) {
    return TVec{cos(x[0]) * cos(x[1]), sin(x[0]) * cos(x[1]), sin(x[1])};
  });
  const Map fd = f.finite_differenced(Vec::Ones(2));
  const Vec u = (Vec(2) << 0.3, 0.4).finished();
  const TVec a = f.jet(u, 2), b = fd.jet(u, 2);
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(a[k].partial(0), b[k].partial(0), 1e-9);
    EXPECT_NEAR(a[k].partial(1), b[k].partial(1), 1e-9);
    EXPECT_NEAR(a[k].partial(0, 1), b[k].partial(0, 1), 1e-6);
  }
  EXPECT_LT(finite_difference_consistency(f, u, Vec::Ones(2)), 1e-8);
}

TEST(Map, InputDimensionIsChecked) {
  const Map f = Map::identity(2);
  EXPECT_THROW(f(Vec::Zero(3)), DimensionMismatch);
}
