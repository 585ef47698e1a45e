#include <gtest/gtest.h>

#include <random>

#include "isothermic/error.hpp"
#include "isothermic/minkowski.hpp"

using namespace isothermic;

namespace {

Vec random_vec(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = d(rng);
  return v;
}

Vec random_spacelike_unit(std::mt19937_64& rng, int n) {
  for (;;) {
    const Vec v = random_vec(rng, n);
    const double q = lorentz_inner(v, v);
    if (q > 0.1) return v / std::sqrt(q);
  }
}

}  // namespace

TEST(Minkowski, InnerProductSignature) {
  const Vec e0 = Vec::Unit(4, 0), e3 = Vec::Unit(4, 3);
  EXPECT_EQ(lorentz_inner(e0, e0), 1.0);
  EXPECT_EQ(lorentz_inner(e3, e3), -1.0);
  EXPECT_EQ(lorentz_inner(e0, e3), 0.0);
  EXPECT_EQ(LorentzForm(4).matrix()(3, 3), -1.0);
}

TEST(Minkowski, CausalClassificationIsScaleAware) {
  const Vec null = (Vec(3) << 1, 0, 1).finished();
  EXPECT_EQ(classify(null), CausalType::lightlike);
  EXPECT_EQ(classify(1e6 * null), CausalType::lightlike);
  EXPECT_EQ(classify((Vec(3) << 1, 0, 0.5).finished()), CausalType::spacelike);
  EXPECT_EQ(classify((Vec(3) << 0.5, 0, 1).finished()), CausalType::timelike);
  EXPECT_STREQ(to_string(CausalType::timelike), "timelike");
}

TEST(Minkowski, ReflectionsAreInvolutiveIsometries) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + trial % 4;
    const Vec v = random_spacelike_unit(rng, n);
    const Vec p = random_vec(rng, n), q = random_vec(rng, n);
    EXPECT_NEAR(lorentz_inner(reflect(v, p), reflect(v, q)), lorentz_inner(p, q),
                1e-12 * (1 + p.norm() * q.norm()));
    EXPECT_LT((reflect(v, reflect(v, p)) - p).norm(), 1e-12 * (1 + p.norm()));
    EXPECT_LT(lorentz_defect(reflection_matrix(v)), 1e-12);
  }
}

TEST(Minkowski, GramSchmidtProducesOrthonormalFrames) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Vec> vs{random_vec(rng, 5), random_vec(rng, 5), Vec::Unit(5, 4)};
    const OrthonormalFrame f = lorentz_gram_schmidt(vs);
    const Mat g = lorentz_gram(f.matrix());
    for (std::size_t i = 0; i < f.size(); ++i)
      for (std::size_t j = 0; j < f.size(); ++j)
        EXPECT_NEAR(g(i, j), i == j ? f.signs[i] : 0.0, 1e-10);
    EXPECT_EQ(f.signs.back(), -1);
    const OrthonormalFrame c = orthogonal_complement(f, 5);
    EXPECT_EQ(c.size(), 2u);
    for (const Vec& x : c.vectors)
      for (const Vec& y : f.vectors) EXPECT_NEAR(lorentz_inner(x, y), 0.0, 1e-10);
  }
}

TEST(Minkowski, DegenerateSpansAreRejected) {
  const Vec null = (Vec(3) << 1, 0, 1).finished();
  EXPECT_THROW(lorentz_gram_schmidt({null}), NonDegeneracyFailure);
  const Vec a = Vec::Unit(3, 0);
  EXPECT_THROW(lorentz_gram_schmidt({a, 2.0 * a}), RankDeficiency);
}
