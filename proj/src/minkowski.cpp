#include "isothermic/minkowski.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "isothermic/error.hpp"

namespace isothermic {

namespace {

void check_same(Eigen::Index a, Eigen::Index b) {
  if (a != b)
    throw DimensionMismatch("Lorentz vectors of length " + std::to_string(a) + " and " +
                            std::to_string(b));
}

// Flip sign so the largest-magnitude component is positive.
Vec canonical_sign(Vec v) {
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  return v(k) < 0 ? Vec(-v) : v;
}

}  // namespace

LorentzForm::LorentzForm(int ambient_dim) : dim_(ambient_dim) {
  if (ambient_dim < 4) throw DimensionMismatch("Lorentz space needs ambient_dim >= 4");
}

double LorentzForm::inner(const Vec& u, const Vec& v) const {
  check_same(u.size(), dim_);
  return lorentz_inner(u, v);
}

Mat LorentzForm::matrix() const {
  Mat j = Mat::Identity(dim_, dim_);
  j(dim_ - 1, dim_ - 1) = -1.0;
  return j;
}

double lorentz_inner(const Vec& u, const Vec& v) {
  check_same(u.size(), v.size());
  const Eigen::Index n = u.size();
  if (n == 0) return 0.0;
  return u.head(n - 1).dot(v.head(n - 1)) - u(n - 1) * v(n - 1);
}

Taylor lorentz_inner(const TVec& u, const TVec& v) {
  check_same(static_cast<Eigen::Index>(u.size()), static_cast<Eigen::Index>(v.size()));
  Taylor s = 0.0;
  if (u.empty()) return s;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) s += u[i] * v[i];
  s -= u.back() * v.back();
  return s;
}

Mat lorentz_gram(const Mat& m) {
  Mat j = Mat::Identity(m.rows(), m.rows());
  j(m.rows() - 1, m.rows() - 1) = -1.0;
  return m.transpose() * j * m;
}

CausalType classify(const Vec& v) {
  const double q = lorentz_inner(v, v);
  const double eps = 1e-10 * std::max(1.0, v.squaredNorm());
  if (std::abs(q) <= eps) return CausalType::lightlike;
  return q > 0 ? CausalType::spacelike : CausalType::timelike;
}

const char* to_string(CausalType t) {
  switch (t) {
    case CausalType::spacelike:
      return "spacelike";
    case CausalType::lightlike:
      return "lightlike";
    case CausalType::timelike:
      return "timelike";
  }
  return "?";
}

Vec reflect(const Vec& v, const Vec& p) {
  const double q = lorentz_inner(v, v);
  if (std::abs(q - 1.0) > 1e-10 * std::max(1.0, v.squaredNorm()))
    throw DomainError("reflection vector is not unit spacelike (<v,v> = " + std::to_string(q) + ")");
  return p - 2.0 * lorentz_inner(p, v) * v;
}

Mat reflection_matrix(const Vec& v) {
  const Eigen::Index n = v.size();
  Mat r(n, n);
  for (Eigen::Index i = 0; i < n; ++i) r.col(i) = reflect(v, Vec::Unit(n, i));
  return r;
}

Mat OrthonormalFrame::matrix() const {
  if (vectors.empty()) return Mat();
  Mat m(vectors.front().size(), static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = vectors[i];
  return m;
}

OrthonormalFrame lorentz_gram_schmidt(const std::vector<Vec>& vectors) {
  OrthonormalFrame out;
  if (vectors.empty()) return out;
  const Eigen::Index dim = vectors.front().size();
  Mat m(dim, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    check_same(vectors[i].size(), dim);
    m.col(static_cast<Eigen::Index>(i)) = vectors[i];
  }
  Eigen::ColPivHouseholderQR<Mat> qr(m);
  qr.setThreshold(1e-12);
  const Eigen::Index k = m.cols();
  if (qr.rank() < k) throw RankDeficiency("input vectors are linearly dependent");
  // Euclidean-orthonormal basis of the span, then diagonalize the Lorentz form on it.
  const Mat q = Mat(qr.householderQ()).leftCols(k);
  const Mat g = lorentz_gram(q);
  Eigen::SelfAdjointEigenSolver<Mat> es(g);
  const Vec d = es.eigenvalues();
  std::vector<Eigen::Index> spacelike, timelike;
  for (Eigen::Index i = 0; i < k; ++i) {
    if (std::abs(d(i)) <= 1e-10)
      throw NonDegeneracyFailure("span contains a null radical direction");
    (d(i) > 0 ? spacelike : timelike).push_back(i);
  }
  if (timelike.size() > 1) throw NonDegeneracyFailure("more than one timelike direction");
  // Descending eigenvalues for spacelike vectors keeps the ordering deterministic.
  std::sort(spacelike.begin(), spacelike.end(), [&](Eigen::Index a, Eigen::Index b) { return d(a) > d(b); });
  for (Eigen::Index i : spacelike) {
    out.vectors.push_back(canonical_sign(q * es.eigenvectors().col(i) / std::sqrt(d(i))));
    out.signs.push_back(1);
  }
  for (Eigen::Index i : timelike) {
    out.vectors.push_back(canonical_sign(q * es.eigenvectors().col(i) / std::sqrt(-d(i))));
    out.signs.push_back(-1);
  }
  return out;
}

OrthonormalFrame orthogonal_complement(const OrthonormalFrame& frame, int ambient_dim) {
  if (frame.vectors.empty()) {
    std::vector<Vec> basis;
    for (int i = 0; i < ambient_dim; ++i) basis.push_back(Vec::Unit(ambient_dim, i));
    return lorentz_gram_schmidt(basis);
  }
  const Mat e = frame.matrix();
  if (e.rows() != ambient_dim) throw DimensionMismatch("frame vectors do not live in the ambient space");
  const Mat g = lorentz_gram(e);
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      const double target = i == j ? frame.signs[static_cast<std::size_t>(i)] : 0.0;
      if (std::abs(g(i, j) - target) > 1e-8) throw DomainError("input frame is not orthonormal");
    }
  if (e.cols() >= ambient_dim) return {};
  Mat j = Mat::Identity(ambient_dim, ambient_dim);
  j(ambient_dim - 1, ambient_dim - 1) = -1.0;
  const Mat constraints = e.transpose() * j;
  Eigen::JacobiSVD<Mat> svd(constraints, Eigen::ComputeFullV);
  std::vector<Vec> kernel;
  for (Eigen::Index c = e.cols(); c < ambient_dim; ++c) kernel.push_back(svd.matrixV().col(c));
  return lorentz_gram_schmidt(kernel);
}

double lorentz_defect(const Mat& t) {
  Mat j = Mat::Identity(t.rows(), t.rows());
  j(t.rows() - 1, t.rows() - 1) = -1.0;
  return (t.transpose() * j * t - j).cwiseAbs().maxCoeff();
}

}  // namespace isothermic
