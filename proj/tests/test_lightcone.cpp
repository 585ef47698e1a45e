#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "isothermic/error.hpp"
#include "isothermic/geometry.hpp"
#include "isothermic/lightcone.hpp"

using namespace isothermic;

namespace {

Vec random_vec(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = d(rng);
  return v;
}

// Product of reflections in random unit spacelike vectors.
Mat random_lorentz(std::mt19937_64& rng, int n, int count = 3) {
  Mat t = Mat::Identity(n, n);
  for (int k = 0; k < count; ++k) {
    Vec v;
    do v = random_vec(rng, n);
    while (lorentz_inner(v, v) < 0.2);
    t = reflection_matrix(v / std::sqrt(lorentz_inner(v, v))) * t;
  }
  return t;
}

}  // namespace

TEST(LightCone, CanonicalFrameNormalization) {
  const MoebiusFrame f = MoebiusFrame::canonical(3);
  EXPECT_EQ(lorentz_inner(f.p0(), f.p0()), 0.0);
  EXPECT_EQ(lorentz_inner(f.w(), f.w()), 0.0);
  EXPECT_EQ(lorentz_inner(f.p0(), f.w()), 1.0);
  EXPECT_THROW(MoebiusFrame(f.w(), f.w(), f.a()), DomainError);
}

TEST(LightCone, PsiIsAnIsometryIntoTheCone) {
  std::mt19937_64 rng(5);
  for (int n : {2, 3, 5}) {
    const MoebiusFrame f = MoebiusFrame::canonical(n).transformed(random_lorentz(rng, n + 2));
    for (int k = 0; k < 100; ++k) {
      const Vec x = random_vec(rng, n, 2.0), y = random_vec(rng, n, 2.0);
      const Vec px = f.psi(x), py = f.psi(y);
      EXPECT_NEAR(lorentz_inner(px, f.w()), 1.0, 1e-10);
      EXPECT_NEAR(lorentz_inner(px, py) + 0.5 * (x - y).squaredNorm(), 0.0, 1e-9 * (1 + (x - y).squaredNorm()));
      EXPECT_LT((psi_invert(f, px) - x).norm(), 1e-10 * (1 + x.norm()));
      EXPECT_LT((drop_point(f, 3.7 * px) - x).norm(), 1e-10 * (1 + x.norm()));
    }
  }
}

TEST(LightCone, ProjectionNearInfinityIsRejected) {
  const MoebiusFrame f = MoebiusFrame::canonical(2);
  EXPECT_THROW(project_to_model(f, f.w()), ProjectionSingular);
  EXPECT_THROW(psi_invert(f, f.p0() + f.w()), DomainError);
}

TEST(LightCone, SphereVectorsContainTheirSphere) {
  std::mt19937_64 rng(9);
  const MoebiusFrame f = MoebiusFrame::canonical(3);
  const Vec q = random_vec(rng, 3);
  const double r = 1.7;
  const SphereVector s = sphere_from_center_radius(f, q, r);
  EXPECT_NEAR(lorentz_inner(s.v, s.v), 1.0, 1e-12);
  EXPECT_NEAR(s.h, 1.0 / r, 1e-12);
  for (int k = 0; k < 20; ++k) {
    const Vec d = random_vec(rng, 3).normalized();
    EXPECT_NEAR(lorentz_inner(f.psi(Vec(q + r * d)), s.v), 0.0, 1e-11);
  }
  const SphereVector plane = hyperplane_from_normal_offset(f, Vec::Unit(3, 2), 0.5);
  EXPECT_EQ(plane.h, 0.0);
  EXPECT_NEAR(lorentz_inner(f.psi((Vec(3) << 4, -1, 0.5).finished()), plane.v), 0.0, 1e-12);
}

TEST(LightCone, IntersectionAngleMatchesLawOfCosines) {
  // Two circles of radii r1, r2 with centres d apart meet at angle theta with
  // cos(theta) = (r1^2 + r2^2 - d^2) / (2 r1 r2).
  const MoebiusFrame f = MoebiusFrame::canonical(2);
  const double r1 = 1.0, r2 = 1.5, d = 2.0;
  const auto s1 = sphere_from_center_radius(f, Vec::Zero(2), r1);
  const auto s2 = sphere_from_center_radius(f, (Vec(2) << d, 0).finished(), r2);
  EXPECT_NEAR(std::abs(intersection_angle(s1, s2)), std::abs((r1 * r1 + r2 * r2 - d * d) / (2 * r1 * r2)), 1e-12);
  const auto far = sphere_from_center_radius(f, (Vec(2) << 10, 0).finished(), 1.0);
  EXPECT_THROW(intersection_angle(s1, far), NoIntersection);
}

TEST(LightCone, InversionMatchesClosedForm) {
  std::mt19937_64 rng(21);
  const MoebiusFrame f = MoebiusFrame::canonical(3);
  const Vec q = random_vec(rng, 3);
  const double r = 0.8;
  const auto spec = ConformalMapSpec::inversion_about(q, r);
  for (int k = 0; k < 50; ++k) {
    const Vec x = random_vec(rng, 3, 2.0);
    const Vec expected = q + r * r * (x - q) / (x - q).squaredNorm();
    EXPECT_LT((apply_moebius(f, spec, x) - expected).norm(), 1e-10 * (1 + expected.norm()));
  }
  EXPECT_LT(lorentz_defect(lorentz_matrix(f, spec)), 1e-12);
}

TEST(LightCone, SimilarityMatchesClosedForm) {
  const MoebiusFrame f = MoebiusFrame::canonical(2);
  Mat rot(2, 2);
  rot << std::cos(0.4), -std::sin(0.4), std::sin(0.4), std::cos(0.4);
  const Vec b = (Vec(2) << 1, -2).finished();
  const auto spec = ConformalMapSpec::similarity_of(2.5, rot, b);
  const Vec x = (Vec(2) << 0.3, 0.9).finished();
  EXPECT_LT((apply_moebius(f, spec, x) - (2.5 * rot * x + b)).norm(), 1e-12);
}

TEST(LightCone, FrameChangeIsInversionAfterSimilarity) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const MoebiusFrame f1 = MoebiusFrame::canonical(3);
    const MoebiusFrame f2 = f1.transformed(random_lorentz(rng, 5));
    const FrameChange c = frame_change(f1, f2);
    EXPECT_NEAR(c.ratio, -0.5 * lorentz_inner(f2.w(), f1.w()), 1e-14);
    for (int k = 0; k < 20; ++k) {
      const Vec x = random_vec(rng, 3);
      const Vec direct = drop_point(f1, f2.psi(x));
      EXPECT_LT((apply_frame_change(f1, c, x) - direct).norm(), 1e-8 * (1 + direct.norm()));
    }
  }
}

TEST(LightCone, StereographicMapMatchesClosedForm) {
  // The unit sphere maps to R^N conformally; the image of the sphere point
  // (sin a, 0, cos a) lies on the x_1 axis and the map is injective on samples.
  const MoebiusFrame f = MoebiusFrame::canonical(2);
  const Map st = stereographic_map(f, canonical_stereographic(f, 1.0));
  const Map sphere = Map::analytic(2, 3, [](const TVec& a) {
    return TVec{sin(a[0]) * cos(a[1]), sin(a[0]) * sin(a[1]), cos(a[0])};
  });
  Chart c;
  c.map = compose(st, sphere);
  c.box = Box::uniform((Vec(2) << 0.4, 0.1).finished(), (Vec(2) << 2.6, 3.0).finished(), 9);
  c.base = BaseMetric::product({sphere}, {Ambient::euclidean});
  EXPECT_LT(conformality_check(c).residual, 1e-10);
  const Vec img = st((Vec(3) << std::sin(1.0), 0, std::cos(1.0)).finished());
  EXPECT_NEAR(img(1), 0.0, 1e-14);
  EXPECT_THROW(canonical_stereographic(f, -1.0), DomainError);
}

TEST(LightCone, LiftAndDropRoundTrip) {
  const MoebiusFrame f = MoebiusFrame::canonical(3);
  const Map surf = Map::analytic(2, 3, [](const TVec& u) { return TVec{u[0], u[1], u[0] * u[1]}; });
  const Map phi = Map::analytic(2, 1, [](const TVec& u) { return TVec{1.0 + u[0] * u[0]}; });
  const Map lifted = lift_conformal(f, surf, phi);
  const Dropped d = drop_to_euclidean(f, lifted);
  const Vec u = (Vec(2) << 0.3, -0.2).finished();
  EXPECT_LT((d.map(u) - surf(u)).norm(), 1e-14);
  EXPECT_NEAR(d.factor(u)(0), 1.0 + 0.09, 1e-14);
  const Vec big = lifted(u);
  EXPECT_NEAR(lorentz_inner(big, big), 0.0, 1e-13);
}

TEST(LightCone, ThetaMapIsConformal) {
  const MoebiusFrame f = MoebiusFrame::canonical(2);
  const Map th = theta_map(f, canonical_theta(f, 1, 1.0));
  const Map geo = Map::analytic(1, 2, [](const TVec& t) { return TVec{sinh(t[0]), cosh(t[0])}; });
  const Map circ = Map::analytic(1, 2, [](const TVec& t) { return TVec{cos(t[0]), sin(t[0])}; });
  Chart c;
  c.map = compose(th, cartesian({geo, circ}));
  c.base = BaseMetric::product({geo, circ}, {Ambient::lorentz, Ambient::euclidean});
  c.box = Box::uniform((Vec(2) << -1, 0.2).finished(), (Vec(2) << 1, 2.8).finished(), 7);
  EXPECT_LT(conformality_check(c).residual, 1e-10);
}
