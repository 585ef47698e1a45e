#include <gtest/gtest.h>

#include <cmath>

#include "isothermic/error.hpp"
#include "isothermic/geometry.hpp"

using namespace isothermic;

namespace {

const Box kBox = Box::uniform((Vec(2) << 0.5, 0.2).finished(), (Vec(2) << 1.5, 1.2).finished(), 5);
const Box kBox3 = Box::uniform((Vec(3) << 0.5, 0.2, 0.1).finished(), (Vec(3) << 1.5, 1.2, 0.9).finished(), 4);

TMat diag_metric(const TVec& d) {
  const int n = static_cast<int>(d.size());
  TMat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = i == j ? d[static_cast<std::size_t>(i)] : d[0] * 0.0;
  return g;
}

}  // namespace

TEST(NetGeometry, PolarChristoffelSymbols) {
  const TVec x = variables((Vec(2) << 1.3, 0.4).finished(), 2);
  const auto gamma = christoffel_symbols(diag_metric({x[0] * 0.0 + 1.0, x[0] * x[0]}));
  auto at = [&](int k, int i, int j) { return gamma[static_cast<std::size_t>((k * 2 + i) * 2 + j)].value(); };
  EXPECT_NEAR(at(0, 1, 1), -1.3, 1e-14);
  EXPECT_NEAR(at(1, 0, 1), 1 / 1.3, 1e-14);
  EXPECT_NEAR(at(1, 1, 0), 1 / 1.3, 1e-14);
  EXPECT_NEAR(at(0, 0, 0), 0.0, 1e-14);
}

TEST(NetGeometry, ConformallyScaledProductIsCP) {
  // exp(2 l(x, y, z)) (dx^2 + h(y, z)) with a round-sphere-like second block.
  const MetricJet m = [](const Vec& u, int order) {
    const TVec x = variables(u, order);
    const Taylor l = exp(2.0 * (0.3 * x[0] * x[1] + sin(x[2])));
    TMat g(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) g(i, j) = 0.0 * x[0];
    g(0, 0) = l;
    g(1, 1) = l;
    g(2, 2) = l * square(sin(x[1]));
    return g;
  };
  const auto r = net_geometry_report(m, kBox3, ProductNet::from_sizes({1, 2}));
  EXPECT_LT(r.cp_residual, 1e-12);
}

TEST(NetGeometry, GenericMetricIsNotCP) {
  const MetricJet m = [](const Vec& u, int order) {
    const TVec x = variables(u, order);
    TMat g(2, 2);
    g(0, 0) = 1.0 + x[1] * x[1];
    g(1, 1) = 1.0 + x[0] * x[0] * x[1];
    g(0, 1) = g(1, 0) = 0.3 * x[0];
    return g;
  };
  EXPECT_GT(net_geometry_report(m, kBox, ProductNet::from_sizes({1, 1})).cp_residual, 1e-2);
}

TEST(NetGeometry, WarpedProductTwistMatchesClosedForm) {
  // dx^2 + rho(x)^2 dy^2 with rho = x^2: the mean curvature normal of the y-block
  // is -grad log rho projected, i.e. (-2/x, 0) in coordinates (g^{xx} = 1).
  const ProductNet net = ProductNet::from_sizes({1, 1});
  const BaseMetric b = BaseMetric::twisted(
      net, {[](const TVec& x) { return 0.0 * x[0] + 1.0; }, [](const TVec& x) { return x[0] * x[0]; }});
  const auto r = net_geometry_report(b, kBox, net);
  ASSERT_TRUE(r.twist_residual.has_value());
  EXPECT_LT(*r.twist_residual, 1e-12);
  EXPECT_LT(r.wp_residual, 1e-12);
  for (std::size_t s = 0; s < kBox.size(); ++s) {
    const double x = kBox.point(s)(0);
    EXPECT_NEAR(r.block_normal[s][1](0), -2.0 / x, 1e-12);
    EXPECT_NEAR(r.block_normal[s][1](1), 0.0, 1e-12);
  }
}

TEST(NetGeometry, TwistedButNotWarped) {
  // rho_2 depending on both coordinates is twisted (TP) but not warped (WP).
  const ProductNet net = ProductNet::from_sizes({1, 1});
  const BaseMetric b = BaseMetric::twisted(
      net, {[](const TVec& x) { return 0.0 * x[0] + 1.0; }, [](const TVec& x) { return 1.0 + x[0] * x[1]; }});
  const auto r = net_geometry_report(b, kBox, net);
  EXPECT_LT(r.tp_residual, 1e-12);
  EXPECT_GT(r.wp_residual, 1e-3);
}

TEST(NetGeometry, NeedsSecondOrderJets) {
  const Chart c = [] {
    Chart c;
    c.map = Map::analytic(2, 3, [](const TVec& u) { return TVec{u[0], u[1], u[0] * u[1]}; });
    c.box = kBox;
    return c;
  }();
  EXPECT_NO_THROW(net_geometry_report(c, ProductNet::from_sizes({1, 1})));
  EXPECT_THROW(net_geometry_report(c, ProductNet{{{0}}}), Error);
}
