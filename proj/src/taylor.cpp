#include "isothermic/taylor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <string>

#include "isothermic/error.hpp"

namespace isothermic {

namespace {

long binomial(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void enumerate_degree(int vars, int degree, int var, std::vector<int>& cur,
                      std::vector<std::vector<int>>& out) {
  if (var == vars - 1) {
    cur[static_cast<std::size_t>(var)] = degree;
    out.push_back(cur);
    return;
  }
  for (int e = degree; e >= 0; --e) {
    cur[static_cast<std::size_t>(var)] = e;
    enumerate_degree(vars, degree - e, var + 1, cur, out);
  }
}

}  // namespace

TaylorBasis::TaylorBasis(int vars) : vars_(vars), max_order_(0) {
  while (binomial(vars + max_order_ + 1, max_order_ + 1) <= kTaylorCapacity) ++max_order_;

  std::vector<std::vector<int>> monos;
  prefix_.push_back(0);
  for (int d = 0; d <= max_order_; ++d) {
    std::vector<int> cur(static_cast<std::size_t>(vars), 0);
    enumerate_degree(vars, d, 0, cur, monos);
    prefix_.push_back(static_cast<int>(monos.size()));
  }
  // prefix_[order] counts monomials of degree <= order.
  prefix_.erase(prefix_.begin());

  std::map<std::vector<int>, int> index;
  for (std::size_t i = 0; i < monos.size(); ++i) index[monos[i]] = static_cast<int>(i);

  for (const auto& m : monos) {
    int deg = 0;
    double fact = 1.0;
    for (int e : m) {
      deg += e;
      for (int k = 2; k <= e; ++k) fact *= k;
      exponents_.push_back(e);
    }
    degree_.push_back(deg);
    factorial_.push_back(fact);
  }
  for (const auto& m : monos) {
    for (int v = 0; v < vars; ++v) {
      auto up = m;
      ++up[static_cast<std::size_t>(v)];
      auto it = index.find(up);
      raise_.push_back(it == index.end() ? -1 : it->second);
    }
  }

  for (std::size_t a = 0; a < monos.size(); ++a) {
    for (std::size_t b = 0; b < monos.size(); ++b) {
      if (degree_[a] + degree_[b] > max_order_) continue;
      std::vector<int> sum(static_cast<std::size_t>(vars));
      for (int v = 0; v < vars; ++v)
        sum[static_cast<std::size_t>(v)] = monos[a][static_cast<std::size_t>(v)] + monos[b][static_cast<std::size_t>(v)];
      terms_.push_back({static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b),
                        static_cast<std::uint8_t>(index.at(sum))});
    }
  }
  std::stable_sort(terms_.begin(), terms_.end(),
                   [](const Term& x, const Term& y) { return x.out < y.out; });
  for (int order = 0; order <= max_order_; ++order) {
    const int limit = prefix(order);
    term_end_.push_back(static_cast<int>(
        std::partition_point(terms_.begin(), terms_.end(),
                             [limit](const Term& t) { return t.out < limit; }) -
        terms_.begin()));
  }
}

const TaylorBasis& TaylorBasis::of(int vars) {
  static const std::vector<std::unique_ptr<TaylorBasis>> table = [] {
    std::vector<std::unique_ptr<TaylorBasis>> t;
    t.emplace_back(nullptr);
    for (int v = 1; v < kTaylorCapacity; ++v) t.emplace_back(new TaylorBasis(v));
    return t;
  }();
  if (vars < 1 || vars >= kTaylorCapacity)
    throw DimensionMismatch("jets support 1.." + std::to_string(kTaylorCapacity - 1) +
                            " variables, got " + std::to_string(vars));
  return *table[static_cast<std::size_t>(vars)];
}

int TaylorBasis::index_of(std::span<const int> exps) const {
  if (static_cast<int>(exps.size()) != vars_) throw DimensionMismatch("multi-index length");
  int idx = 0;
  for (int v = 0; v < vars_; ++v) {
    for (int k = 0; k < exps[static_cast<std::size_t>(v)]; ++k) {
      idx = raise(idx, v);
      if (idx < 0) return -1;
    }
  }
  return idx;
}

Taylor::Taylor(double value) { c_[0] = value; }

Taylor Taylor::like(int vars, int order) {
  Taylor t;
  t.vars_ = static_cast<std::int8_t>(vars);
  t.order_ = static_cast<std::int8_t>(order);
  return t;
}

Taylor Taylor::constant(int vars, int order, double value) {
  if (vars == 0) return Taylor(value);
  if (order < 0 || order > TaylorBasis::of(vars).max_order())
    throw DomainError("jet order " + std::to_string(order) + " unsupported for " +
                      std::to_string(vars) + " variables");
  Taylor t = like(vars, order);
  t.c_[0] = value;
  return t;
}

Taylor Taylor::variable(int vars, int order, int which, double value) {
  Taylor t = constant(vars, order, value);
  if (which < 0 || which >= vars) throw DimensionMismatch("variable index out of range");
  if (order >= 1) t.c_[static_cast<std::size_t>(TaylorBasis::of(vars).raise(0, which))] = 1.0;
  return t;
}

int Taylor::size() const { return vars_ == 0 ? 1 : TaylorBasis::of(vars_).prefix(order_); }

double Taylor::partial(std::span<const int> exps) const {
  if (vars_ == 0) {
    for (int e : exps)
      if (e != 0) return 0.0;
    return c_[0];
  }
  const auto& basis = TaylorBasis::of(vars_);
  const int idx = basis.index_of(exps);
  if (idx < 0 || idx >= size()) throw DomainError("derivative exceeds jet order");
  return basis.factorial(idx) * c_[static_cast<std::size_t>(idx)];
}

double Taylor::partial(int var) const {
  if (vars_ == 0) return 0.0;
  std::vector<int> e(static_cast<std::size_t>(vars_), 0);
  ++e[static_cast<std::size_t>(var)];
  return partial(e);
}

double Taylor::partial(int var_a, int var_b) const {
  if (vars_ == 0) return 0.0;
  std::vector<int> e(static_cast<std::size_t>(vars_), 0);
  ++e[static_cast<std::size_t>(var_a)];
  ++e[static_cast<std::size_t>(var_b)];
  return partial(e);
}

Eigen::VectorXd Taylor::gradient() const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(vars_);
  for (int i = 0; i < vars_; ++i) g(i) = partial(i);
  return g;
}

Taylor Taylor::diff(int var) const {
  if (vars_ == 0) return Taylor(0.0);
  if (order_ < 1) throw DomainError("cannot differentiate an order-0 jet");
  const auto& basis = TaylorBasis::of(vars_);
  Taylor r = like(vars_, order_ - 1);
  const int n = r.size();
  for (int idx = 0; idx < n; ++idx) {
    const int up = basis.raise(idx, var);
    r.c_[static_cast<std::size_t>(idx)] =
        (basis.exponent(idx, var) + 1) * c_[static_cast<std::size_t>(up)];
  }
  return r;
}

Taylor Taylor::truncate(int order) const {
  if (vars_ == 0 || order >= order_) return *this;
  Taylor r = like(vars_, order);
  std::copy_n(c_.begin(), r.size(), r.c_.begin());
  return r;
}

Taylor Taylor::nilpotent() const {
  Taylor r = *this;
  r.c_[0] = 0.0;
  return r;
}

namespace {

void common_space(const Taylor& a, const Taylor& b, int& vars, int& order) {
  if (!a.is_scalar() && !b.is_scalar() && a.vars() != b.vars())
    throw DimensionMismatch("jets over " + std::to_string(a.vars()) + " and " +
                            std::to_string(b.vars()) + " variables");
  vars = a.is_scalar() ? b.vars() : a.vars();
  order = std::min(a.order(), b.order());
}

}  // namespace

Taylor& Taylor::operator+=(const Taylor& o) {
  int vars, order;
  common_space(*this, o, vars, order);
  Taylor r = like(vars, order);
  const int n = r.size();
  const int na = std::min(n, size());
  const int nb = std::min(n, o.size());
  for (int i = 0; i < na; ++i) r.c_[static_cast<std::size_t>(i)] = c_[static_cast<std::size_t>(i)];
  for (int i = 0; i < nb; ++i) r.c_[static_cast<std::size_t>(i)] += o.c_[static_cast<std::size_t>(i)];
  *this = r;
  return *this;
}

Taylor& Taylor::operator-=(const Taylor& o) { return *this += -o; }

Taylor& Taylor::operator*=(const Taylor& o) {
  if (o.is_scalar()) {
    const int n = size();
    for (int i = 0; i < n; ++i) c_[static_cast<std::size_t>(i)] *= o.c_[0];
    return *this;
  }
  if (is_scalar()) {
    const double s = c_[0];
    *this = o;
    return *this *= Taylor(s);
  }
  int vars, order;
  common_space(*this, o, vars, order);
  Taylor r = like(vars, order);
  for (const auto& t : TaylorBasis::of(vars).products(order))
    r.c_[t.out] += c_[t.lhs] * o.c_[t.rhs];
  *this = r;
  return *this;
}

Taylor& Taylor::operator/=(const Taylor& o) { return *this *= reciprocal(o); }

Taylor operator-(const Taylor& a) {
  Taylor r = a;
  const int n = r.size();
  for (int i = 0; i < n; ++i) r.c_[static_cast<std::size_t>(i)] = -r.c_[static_cast<std::size_t>(i)];
  return r;
}

Taylor operator+(const Taylor& a, const Taylor& b) { Taylor r = a; return r += b; }
Taylor operator-(const Taylor& a, const Taylor& b) { Taylor r = a; return r -= b; }
Taylor operator*(const Taylor& a, const Taylor& b) { Taylor r = a; return r *= b; }
Taylor operator/(const Taylor& a, const Taylor& b) { Taylor r = a; return r /= b; }

Taylor Taylor::apply_series(std::span<const double> coeffs) const {
  if (is_scalar() || coeffs.size() == 1) return Taylor::constant(vars_, is_scalar() ? 0 : order_, coeffs[0]);
  const Taylor h = nilpotent();
  Taylor r = Taylor::constant(vars_, order_, coeffs[0]);
  Taylor p = Taylor::constant(vars_, order_, 1.0);
  const int top = std::min<int>(order_, static_cast<int>(coeffs.size()) - 1);
  for (int k = 1; k <= top; ++k) {
    p *= h;
    r += coeffs[static_cast<std::size_t>(k)] * p;
  }
  return r;
}

namespace {

int series_length(const Taylor& x) { return x.is_scalar() ? 1 : x.order() + 1; }

}  // namespace

Taylor reciprocal(const Taylor& x) {
  const double x0 = x.value();
  if (x0 == 0.0 || !std::isfinite(x0)) throw DomainError("reciprocal of zero");
  std::vector<double> d(static_cast<std::size_t>(series_length(x)));
  double p = 1.0 / x0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    d[k] = p;
    p *= -1.0 / x0;
  }
  return x.apply_series(d);
}

Taylor pow(const Taylor& x, double e) {
  const double x0 = x.value();
  if (x0 <= 0.0) {
    if (x0 == 0.0 && x.is_scalar() && e > 0.0) return Taylor(0.0);
    throw DomainError("power of non-positive value " + std::to_string(x0));
  }
  std::vector<double> d(static_cast<std::size_t>(series_length(x)));
  d[0] = std::pow(x0, e);
  for (std::size_t k = 1; k < d.size(); ++k)
    d[k] = d[k - 1] * (e - static_cast<double>(k) + 1.0) / (static_cast<double>(k) * x0);
  return x.apply_series(d);
}

Taylor sqrt(const Taylor& x) { return pow(x, 0.5); }

Taylor exp(const Taylor& x) {
  std::vector<double> d(static_cast<std::size_t>(series_length(x)));
  d[0] = std::exp(x.value());
  for (std::size_t k = 1; k < d.size(); ++k) d[k] = d[k - 1] / static_cast<double>(k);
  return x.apply_series(d);
}

Taylor log(const Taylor& x) {
  const double x0 = x.value();
  if (x0 <= 0.0) throw DomainError("log of non-positive value " + std::to_string(x0));
  std::vector<double> d(static_cast<std::size_t>(series_length(x)));
  d[0] = std::log(x0);
  double p = 1.0;
  for (std::size_t k = 1; k < d.size(); ++k) {
    p /= x0;
    d[k] = ((k % 2 == 1) ? 1.0 : -1.0) * p / static_cast<double>(k);
  }
  return x.apply_series(d);
}

namespace {

// Series of a function whose derivatives cycle through `cycle` (period 2 or 4).
Taylor cyclic_series(const Taylor& x, std::span<const double> cycle) {
  std::vector<double> d(static_cast<std::size_t>(series_length(x)));
  double fact = 1.0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (k > 0) fact *= static_cast<double>(k);
    d[k] = cycle[k % cycle.size()] / fact;
  }
  return x.apply_series(d);
}

}  // namespace

Taylor sin(const Taylor& x) {
  const double s = std::sin(x.value()), c = std::cos(x.value());
  const double cycle[] = {s, c, -s, -c};
  return cyclic_series(x, cycle);
}

Taylor cos(const Taylor& x) {
  const double s = std::sin(x.value()), c = std::cos(x.value());
  const double cycle[] = {c, -s, -c, s};
  return cyclic_series(x, cycle);
}

Taylor sinh(const Taylor& x) {
  const double cycle[] = {std::sinh(x.value()), std::cosh(x.value())};
  return cyclic_series(x, cycle);
}

Taylor cosh(const Taylor& x) {
  const double cycle[] = {std::cosh(x.value()), std::sinh(x.value())};
  return cyclic_series(x, cycle);
}

TVec variables(const Eigen::VectorXd& u0, int order) {
  const int n = static_cast<int>(u0.size());
  TVec v;
  v.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v.push_back(Taylor::variable(n, order, i, u0(i)));
  return v;
}

Eigen::VectorXd values(const TVec& v) {
  Eigen::VectorXd r(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) r(static_cast<Eigen::Index>(i)) = v[i].value();
  return r;
}

int min_order(const TVec& v) {
  int o = kScalarOrder;
  for (const auto& t : v) o = std::min(o, t.order());
  return o;
}

TVec truncate(const TVec& v, int order) {
  TVec r;
  r.reserve(v.size());
  for (const auto& t : v) r.push_back(t.truncate(order));
  return r;
}

TVec diff(const TVec& v, int var) {
  TVec r;
  r.reserve(v.size());
  for (const auto& t : v) r.push_back(t.diff(var));
  return r;
}

TVec substitute(const TVec& poly, const TVec& inputs) {
  const int m = static_cast<int>(inputs.size());
  int vars = 0;
  for (const auto& t : inputs) {
    if (t.is_scalar()) continue;
    if (vars != 0 && t.vars() != vars) throw DimensionMismatch("inputs live in different jet spaces");
    vars = t.vars();
  }
  TVec out;
  out.reserve(poly.size());
  if (vars == 0) {
    for (const auto& p : poly) out.emplace_back(p.value());
    return out;
  }
  int poly_order = min_order(poly);
  int poly_vars = 0;
  for (const auto& p : poly) {
    if (p.is_scalar()) continue;
    if (p.vars() != m) throw DimensionMismatch("polynomial arity does not match input count");
    poly_vars = m;
  }
  if (poly_vars == 0) {
    for (const auto& p : poly) out.emplace_back(Taylor::constant(vars, min_order(inputs), p.value()));
    return out;
  }
  const int order = std::min(min_order(inputs), poly_order);
  const auto& basis = TaylorBasis::of(m);
  const int nmono = basis.prefix(order);

  TVec h;
  for (const auto& t : inputs) {
    Taylor d = t.is_scalar() ? Taylor::constant(vars, order, 0.0) : t.truncate(order).nilpotent();
    h.push_back(d);
  }
  std::vector<Taylor> mono(static_cast<std::size_t>(nmono));
  std::vector<bool> done(static_cast<std::size_t>(nmono), false);
  mono[0] = Taylor::constant(vars, order, 1.0);
  done[0] = true;
  for (int idx = 0; idx < nmono; ++idx) {
    for (int v = 0; v < m; ++v) {
      const int up = basis.raise(idx, v);
      if (up < 0 || up >= nmono || done[static_cast<std::size_t>(up)]) continue;
      mono[static_cast<std::size_t>(up)] = mono[static_cast<std::size_t>(idx)] * h[static_cast<std::size_t>(v)];
      done[static_cast<std::size_t>(up)] = true;
    }
  }
  for (const auto& p : poly) {
    Taylor r = Taylor::constant(vars, order, p.value());
    if (!p.is_scalar()) {
      for (int idx = 1; idx < nmono; ++idx) {
        const double c = p.coeff(idx);
        if (c != 0.0) r += c * mono[static_cast<std::size_t>(idx)];
      }
    }
    out.push_back(r);
  }
  return out;
}

TMat TMat::identity(int n) {
  TMat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

TMat TMat::from(const Eigen::MatrixXd& m) {
  TMat r(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
  for (int i = 0; i < r.rows(); ++i)
    for (int j = 0; j < r.cols(); ++j) r(i, j) = m(i, j);
  return r;
}

TMat TMat::transpose() const {
  TMat r(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

TMat TMat::inverse() const {
  if (rows_ != cols_) throw DimensionMismatch("inverse of a non-square matrix");
  const int n = rows_;
  TMat a = *this;
  TMat inv = identity(n);
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col).value()) > std::abs(a(pivot, col).value())) pivot = r;
    if (a(pivot, col).value() == 0.0) throw DomainError("singular matrix");
    if (pivot != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(a(pivot, j), a(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    }
    const Taylor p = reciprocal(a(col, col));
    for (int j = 0; j < n; ++j) {
      a(col, j) *= p;
      inv(col, j) *= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const Taylor factor = a(r, col);
      if (factor.is_scalar() && factor.value() == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        a(r, j) -= factor * a(col, j);
        inv(r, j) -= factor * inv(col, j);
      }
    }
  }
  return inv;
}

Taylor TMat::determinant() const {
  if (rows_ != cols_) throw DimensionMismatch("determinant of a non-square matrix");
  const int n = rows_;
  TMat a = *this;
  Taylor det = 1.0;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col).value()) > std::abs(a(pivot, col).value())) pivot = r;
    if (a(pivot, col).value() == 0.0) return det * 0.0;
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
      det = -det;
    }
    det *= a(col, col);
    const Taylor p = reciprocal(a(col, col));
    for (int r = col + 1; r < n; ++r) {
      const Taylor factor = a(r, col) * p;
      for (int j = col; j < n; ++j) a(r, j) -= factor * a(col, j);
    }
  }
  return det;
}

Eigen::MatrixXd TMat::values() const {
  Eigen::MatrixXd m(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).value();
  return m;
}

TMat TMat::diff(int var) const {
  TMat r(rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i].diff(var);
  return r;
}

TMat operator*(const TMat& a, const TMat& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matrix product shapes");
  TMat r(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) {
      Taylor s = 0.0;
      for (int k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      r(i, j) = s;
    }
  return r;
}

TMat operator+(const TMat& a, const TMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("matrix sum shapes");
  TMat r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}

TMat operator-(const TMat& a, const TMat& b) { return a + (-1.0) * b; }

TMat operator*(const Taylor& s, const TMat& a) {
  TMat r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = s * a(i, j);
  return r;
}

TVec operator*(const TMat& m, const TVec& v) {
  if (m.cols() != static_cast<int>(v.size())) throw DimensionMismatch("matrix-vector shapes");
  TVec r(static_cast<std::size_t>(m.rows()), Taylor(0.0));
  for (int i = 0; i < m.rows(); ++i)
    for (int k = 0; k < m.cols(); ++k) r[static_cast<std::size_t>(i)] += m(i, k) * v[static_cast<std::size_t>(k)];
  return r;
}

}  // namespace isothermic
