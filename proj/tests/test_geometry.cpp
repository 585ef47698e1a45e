#include <gtest/gtest.h>

#include <cmath>

#include "isothermic/error.hpp"
#include "isothermic/geometry.hpp"

using namespace isothermic;

namespace {

Chart sphere_chart(double r) {
  Chart c;
  c.label = "sphere";
  c.map = Map::analytic(2, 3, [r](const TVec& u) {
    return TVec{r * sin(u[0]) * cos(u[1]), r * sin(u[0]) * sin(u[1]), r * cos(u[0])};
  });
  c.box = Box::uniform((Vec(2) << 0.4, 0.1).finished(), (Vec(2) << 2.6, 3.0).finished(), 7);
  return c;
}

Chart torus_chart(double a, double b) {
  Chart c;
  c.label = "torus";
  c.map = Map::analytic(2, 3, [a, b](const TVec& u) {
    const Taylor rho = a + b * cos(u[1]);
    return TVec{rho * cos(u[0]), rho * sin(u[0]), b * sin(u[1])};
  });
  c.box = Box::uniform((Vec(2) << 0.0, 0.1).finished(), (Vec(2) << 6.0, 6.0).finished(), 9);
  c.net = ProductNet::from_sizes({1, 1});
  return c;
}

}  // namespace

TEST(Geometry, SphereFirstFundamentalFormIsClosedForm) {
  const Chart s = sphere_chart(2.0);
  const Vec u = (Vec(2) << 0.7, 1.1).finished();
  const Mat g = first_fundamental_form(s, u);
  EXPECT_NEAR(g(0, 0), 4.0, 1e-14);
  EXPECT_NEAR(g(1, 1), 4.0 * std::sin(0.7) * std::sin(0.7), 1e-14);
  EXPECT_NEAR(g(0, 1), 0.0, 1e-14);
}

TEST(Geometry, RankDeficiencyIsDetected) {
  Chart c;
  c.map = Map::analytic(2, 3, [](const TVec& u) { return TVec{u[0] + u[1], u[0] + u[1], Taylor(0.0) + 0.0 * u[0]}; });
  c.box = Box::uniform(Vec::Zero(2), Vec::Ones(2), 3);
  EXPECT_THROW(first_fundamental_form(c, Vec::Zero(2)), RankDeficiency);
}

TEST(Geometry, NormalFrameIsOrthonormalComplement) {
  const Chart s = sphere_chart(1.0);
  const LocalGeometry lg = LocalGeometry::at(s.map, Ambient::euclidean, (Vec(2) << 0.9, 0.4).finished());
  const auto normals = normal_frame(lg.tangent(), Ambient::euclidean);
  ASSERT_EQ(normals.size(), 1u);
  EXPECT_NEAR(normals[0].norm(), 1.0, 1e-14);
  EXPECT_LT((lg.tangent().transpose() * normals[0]).norm(), 1e-14);
}

TEST(Geometry, SecondFundamentalFormOfSphereIsUmbilic) {
  const Chart s = sphere_chart(2.0);
  const Vec u = (Vec(2) << 0.9, 0.4).finished();
  const auto sff = second_fundamental_form(s, u);
  const Mat g = first_fundamental_form(s, u);
  const Mat shape = g.ldlt().solve(sff.coeff[0]);
  EXPECT_NEAR(std::abs(shape(0, 0)), 0.5, 1e-13);
  EXPECT_NEAR(shape(0, 0), shape(1, 1), 1e-13);
  EXPECT_NEAR(shape(0, 1), 0.0, 1e-13);
}

TEST(Geometry, TorusPrincipalCurvaturesMatchClosedForm) {
  const double a = 2.0, b = 0.5;
  const Chart t = torus_chart(a, b);
  const auto fields = principal_curvature_fields(t);
  for (std::size_t s = 0; s < fields.size(); ++s) {
    const double v = t.box.point(s)(1);
    Vec expect(2);
    expect << 1.0 / b, std::cos(v) / (a + b * std::cos(v));
    std::sort(expect.data(), expect.data() + 2);
    Vec got = fields[s].values, flipped = -fields[s].values;
    std::sort(flipped.data(), flipped.data() + 2);
    EXPECT_LT(std::min((got - expect).norm(), (flipped - expect).norm()), 1e-12);
    ASSERT_EQ(fields[s].clusters.size(), 2u);
    for (const auto& c : fields[s].clusters) EXPECT_LT(c.dupin, 1e-10);
  }
}

TEST(Geometry, FiniteDifferencedCurvaturesAgreeWithJets) {
  const Chart t = torus_chart(2.0, 0.5);
  const Chart fd = t.finite_differenced();
  const Vec u = (Vec(2) << 1.0, 0.8).finished();
  const auto a = principal_curvatures(t, u, false), b = principal_curvatures(fd, u, false);
  EXPECT_LT((a.values - b.values).norm(), 1e-6);
}

TEST(Geometry, ClusterRangesSplitAndRejectAmbiguity) {
  const Vec v = (Vec(3) << 1.0, 1.0 + 1e-9, 2.0).finished();
  const auto r = cluster_ranges(v);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0], std::make_pair(0, 2));
  EXPECT_EQ(r[1], std::make_pair(2, 1));
  EXPECT_THROW(cluster_ranges((Vec(2) << 1.0, 1.0 + 1e-4).finished()), ClusteringAmbiguity);
}

TEST(Geometry, AdaptednessSeparatesTorusFromPerturbation) {
  const Chart t = torus_chart(2.0, 0.5);
  EXPECT_LT(adaptedness_check(t, *t.net), 1e-12);
  Chart bent = t;
  bent.map = combine(2, 3, {t.map, Map::identity(2)}, [](const std::vector<TVec>& p) {
    TVec r = p[0];
    r[2] += 0.05 * sin(p[1][0]) * sin(p[1][1]);
    return r;
  });
  EXPECT_GT(adaptedness_check(bent, *bent.net), 1e-3);
}

TEST(Geometry, ConformalityAgainstDeclaredBase) {
  // The plane inverted in a unit sphere is conformal to the flat metric.
  Chart c;
  c.map = Map::analytic(2, 3, [](const TVec& u) {
    const Taylor d = u[0] * u[0] + u[1] * u[1] + 1.0;
    return TVec{u[0] / d, u[1] / d, 1.0 / d};
  });
  c.box = Box::uniform(Vec::Constant(2, -1.0), Vec::Constant(2, 1.0), 7);
  c.base = BaseMetric::flat(2);
  const auto r = conformality_check(c);
  EXPECT_LT(r.residual, 1e-13);
  // Closed-form factor 1 / (|u|^2 + 1) at the centre sample.
  EXPECT_NEAR(r.factor[24], 1.0, 1e-14);

  Chart skew = c;
  skew.map = Map::analytic(2, 3, [](const TVec& u) { return TVec{u[0], 2.0 * u[1], Taylor(0.0) + 0.0 * u[0]}; });
  EXPECT_GT(conformality_check(skew).residual, 0.5);
}

TEST(Geometry, AlphaSplitHoldsForConstantAndVaryingFactors) {
  const MoebiusFrame f = MoebiusFrame::canonical(3);
  const Chart s = sphere_chart(1.5);
  EXPECT_LT(verify_alpha_F_split(f, s, Map::constant(2, Vec::Ones(1))).residual, 1e-12);
  const Map phi = Map::analytic(2, 1, [](const TVec& u) { return TVec{1.0 + 0.3 * sin(u[0]) * cos(u[1])}; });
  const auto r = verify_alpha_F_split(f, s, phi);
  EXPECT_LT(r.residual, 1e-11);
  EXPECT_LT(r.gram_residual, 1e-12);
  EXPECT_TRUE(r.lorentzian);
  EXPECT_LT(verify_alpha_F_split(f, s.finite_differenced(), phi).residual, 1e-6);
}
