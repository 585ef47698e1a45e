#pragma once

// Lorentz space L^{N+2}: signature (+,...,+,-), the last coordinate timelike.

#include <vector>

#include "isothermic/map.hpp"
#include "isothermic/taylor.hpp"

namespace isothermic {

class LorentzForm {
 public:
  explicit LorentzForm(int ambient_dim);

  int ambient_dim() const { return dim_; }
  double inner(const Vec& u, const Vec& v) const;
  // diag(1, ..., 1, -1)
  Mat matrix() const;

 private:
  int dim_;
};

double lorentz_inner(const Vec& u, const Vec& v);
Taylor lorentz_inner(const TVec& u, const TVec& v);
// Gram matrix of the columns of m.
Mat lorentz_gram(const Mat& m);

enum class CausalType { spacelike, lightlike, timelike };

// Tolerance scales as 1e-10 * max(1, |v|^2_euclid).
CausalType classify(const Vec& v);
const char* to_string(CausalType t);

// p - 2<p,v> v for a unit spacelike v.
Vec reflect(const Vec& v, const Vec& p);
Mat reflection_matrix(const Vec& v);

struct OrthonormalFrame {
  std::vector<Vec> vectors;
  std::vector<int> signs;  // <e_i, e_i> = signs[i]

  Mat matrix() const;
  std::size_t size() const { return vectors.size(); }
};

// Lorentz-orthonormal basis of span(vectors): spacelike vectors first, then the
// timelike one. Throws NonDegeneracyFailure when the span contains a null radical
// and RankDeficiency when the inputs are dependent.
OrthonormalFrame lorentz_gram_schmidt(const std::vector<Vec>& vectors);

// Orthonormal basis of the Lorentz complement of span(frame) in L^{ambient_dim}.
OrthonormalFrame orthogonal_complement(const OrthonormalFrame& frame, int ambient_dim);

// max |T^t J T - J| entrywise.
double lorentz_defect(const Mat& t);

}  // namespace isothermic
