#pragma once

// Truncated multivariate Taylor polynomials (forward-mode jets).
//
// A Taylor value in `vars` variables of order K stores the coefficients c_a of
// sum_a c_a * delta^a over all multi-indices |a| <= K. Monomials are graded by
// degree, so truncating to a lower order is a prefix of the coefficient array
// and values of different orders combine at the smaller order.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace isothermic {

inline constexpr int kTaylorCapacity = 56;
inline constexpr int kScalarOrder = 127;

class TaylorBasis {
 public:
  struct Term {
    std::uint8_t lhs;
    std::uint8_t rhs;
    std::uint8_t out;
  };

  static const TaylorBasis& of(int vars);

  int vars() const { return vars_; }
  int max_order() const { return max_order_; }
  int prefix(int order) const { return prefix_[static_cast<std::size_t>(order)]; }
  int degree(int idx) const { return degree_[static_cast<std::size_t>(idx)]; }
  int exponent(int idx, int var) const {
    return exponents_[static_cast<std::size_t>(idx * vars_ + var)];
  }
  // Index of the monomial delta^(a + e_var), or -1 past the maximal order.
  int raise(int idx, int var) const { return raise_[static_cast<std::size_t>(idx * vars_ + var)]; }
  int index_of(std::span<const int> exps) const;
  // a! for the monomial; partial derivative d^a f = a! * c_a.
  double factorial(int idx) const { return factorial_[static_cast<std::size_t>(idx)]; }
  std::span<const Term> products(int order) const {
    return {terms_.data(), static_cast<std::size_t>(term_end_[static_cast<std::size_t>(order)])};
  }

 private:
  explicit TaylorBasis(int vars);

  int vars_;
  int max_order_;
  std::vector<int> prefix_;
  std::vector<int> degree_;
  std::vector<int> exponents_;
  std::vector<int> raise_;
  std::vector<double> factorial_;
  std::vector<Term> terms_;
  std::vector<int> term_end_;
};

class Taylor {
 public:
  Taylor() : Taylor(0.0) {}
  Taylor(double value);  // NOLINT: scalars promote implicitly

  static Taylor variable(int vars, int order, int which, double value);
  static Taylor constant(int vars, int order, double value);

  int vars() const { return vars_; }
  int order() const { return order_; }
  bool is_scalar() const { return vars_ == 0; }
  int size() const;

  double value() const { return c_[0]; }
  double coeff(int idx) const { return c_[static_cast<std::size_t>(idx)]; }
  double& coeff(int idx) { return c_[static_cast<std::size_t>(idx)]; }

  double partial(int var) const;
  double partial(int var_a, int var_b) const;
  double partial(std::span<const int> exps) const;
  Eigen::VectorXd gradient() const;

  // Exact derivative of the truncated polynomial: order drops by one.
  Taylor diff(int var) const;
  Taylor truncate(int order) const;
  Taylor nilpotent() const;

  Taylor& operator+=(const Taylor& o);
  Taylor& operator-=(const Taylor& o);
  Taylor& operator*=(const Taylor& o);
  Taylor& operator/=(const Taylor& o);

  friend Taylor operator-(const Taylor& a);
  friend Taylor operator+(const Taylor& a, const Taylor& b);
  friend Taylor operator-(const Taylor& a, const Taylor& b);
  friend Taylor operator*(const Taylor& a, const Taylor& b);
  friend Taylor operator/(const Taylor& a, const Taylor& b);

  // f(x0 + h) = sum_k coeffs[k] h^k for the nilpotent part h of this value.
  Taylor apply_series(std::span<const double> coeffs) const;

 private:
  static Taylor like(int vars, int order);

  std::int8_t vars_ = 0;
  std::int8_t order_ = kScalarOrder;
  std::array<double, kTaylorCapacity> c_{};
};

using TVec = std::vector<Taylor>;

Taylor reciprocal(const Taylor& x);
Taylor sqrt(const Taylor& x);
Taylor exp(const Taylor& x);
Taylor log(const Taylor& x);
Taylor sin(const Taylor& x);
Taylor cos(const Taylor& x);
Taylor sinh(const Taylor& x);
Taylor cosh(const Taylor& x);
Taylor pow(const Taylor& x, double p);
inline Taylor square(const Taylor& x) { return x * x; }
inline double square(double x) { return x * x; }

inline double value_of(double x) { return x; }
inline double value_of(const Taylor& x) { return x.value(); }

// Identity jets u0 + delta in Taylor(vars = u0.size(), order).
TVec variables(const Eigen::VectorXd& u0, int order);
Eigen::VectorXd values(const TVec& v);
int min_order(const TVec& v);
TVec truncate(const TVec& v, int order);
TVec diff(const TVec& v, int var);

// Substitutes `inputs` (arbitrary jets) into the polynomial map `poly` whose
// coefficients are expansions around the constant parts of `inputs`.
TVec substitute(const TVec& poly, const TVec& inputs);

// Dense row-major matrix of jets; sized for the small tensors of chart geometry.
class TMat {
 public:
  TMat() = default;
  TMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows * cols)) {}
  static TMat identity(int n);
  static TMat from(const Eigen::MatrixXd& m);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Taylor& operator()(int i, int j) { return a_[static_cast<std::size_t>(i * cols_ + j)]; }
  const Taylor& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * cols_ + j)]; }

  TMat transpose() const;
  // Gauss-Jordan with partial pivoting on the constant parts.
  TMat inverse() const;
  Taylor determinant() const;
  Eigen::MatrixXd values() const;
  TMat diff(int var) const;

  friend TMat operator*(const TMat& a, const TMat& b);
  friend TMat operator+(const TMat& a, const TMat& b);
  friend TMat operator-(const TMat& a, const TMat& b);
  friend TMat operator*(const Taylor& s, const TMat& a);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Taylor> a_;
};

TVec operator*(const TMat& m, const TVec& v);

}  // namespace isothermic
