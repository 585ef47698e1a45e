#include "isothermic/map.hpp"

#include <algorithm>
#include <string>

#include "isothermic/error.hpp"

namespace isothermic {

struct Map::Impl {
  Kind kind;
  int in;
  int out;
  TaylorFn analytic;
  JetFn jets;
  ValueFn values;
  Vec extent;
  int order_limit = -1;
};

namespace {

constexpr double kFirstStep = 1e-4;
constexpr double kSecondStep = 1e-3;
// 5-point central first-derivative weights at offsets -2..2 (times 1/h).
constexpr double kD1[5] = {1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0};

void check_input(int expected, std::size_t got) {
  if (static_cast<int>(got) != expected)
    throw DimensionMismatch("map expects " + std::to_string(expected) + " inputs, got " +
                            std::to_string(got));
}

int jet_order_cap(int vars) { return TaylorBasis::of(vars).max_order(); }

TVec fd_jet(const Map::ValueFn& fn, int in, int out, const Vec& extent, const Vec& u, int order) {
  order = std::min(order, 2);
  const Vec f0 = fn(u);
  if (f0.size() != out) throw DimensionMismatch("finite-difference map output size");
  TVec r;
  for (int k = 0; k < out; ++k) r.push_back(Taylor::constant(in, order, f0(k)));
  if (order == 0) return r;
  const auto& basis = TaylorBasis::of(in);
  auto at = [&](int i, double di, int j, double dj) {
    Vec x = u;
    x(i) += di;
    if (j >= 0) x(j) += dj;
    return fn(x);
  };
  std::vector<int> e(static_cast<std::size_t>(in), 0);
  for (int i = 0; i < in; ++i) {
    const double h = kFirstStep * extent(i);
    Vec d = Vec::Zero(out);
    for (int s = -2; s <= 2; ++s)
      if (s != 0) d += kD1[s + 2] * at(i, s * h, -1, 0.0);
    d /= h;
    std::fill(e.begin(), e.end(), 0);
    e[static_cast<std::size_t>(i)] = 1;
    const int idx = basis.index_of(e);
    for (int k = 0; k < out; ++k) r[static_cast<std::size_t>(k)].coeff(idx) = d(k);
  }
  if (order < 2) return r;
  for (int i = 0; i < in; ++i) {
    const double h = kSecondStep * extent(i);
    const Vec d2 = (-at(i, 2 * h, -1, 0.0) + 16.0 * at(i, h, -1, 0.0) - 30.0 * f0 +
                    16.0 * at(i, -h, -1, 0.0) - at(i, -2 * h, -1, 0.0)) /
                   (12.0 * h * h);
    std::fill(e.begin(), e.end(), 0);
    e[static_cast<std::size_t>(i)] = 2;
    const int idx = basis.index_of(e);
    for (int k = 0; k < out; ++k) r[static_cast<std::size_t>(k)].coeff(idx) = 0.5 * d2(k);
    for (int j = i + 1; j < in; ++j) {
      const double hj = kSecondStep * extent(j);
      Vec dij = Vec::Zero(out);
      for (int a = -2; a <= 2; ++a) {
        if (a == 0) continue;
        for (int b = -2; b <= 2; ++b) {
          if (b == 0) continue;
          dij += kD1[a + 2] * kD1[b + 2] * at(i, a * h, j, b * hj);
        }
      }
      dij /= h * hj;
      std::fill(e.begin(), e.end(), 0);
      e[static_cast<std::size_t>(i)] = 1;
      e[static_cast<std::size_t>(j)] = 1;
      const int idx2 = basis.index_of(e);
      for (int k = 0; k < out; ++k) r[static_cast<std::size_t>(k)].coeff(idx2) = dij(k);
    }
  }
  return r;
}

bool all_scalar(const TVec& x) {
  return std::all_of(x.begin(), x.end(), [](const Taylor& t) { return t.is_scalar(); });
}

}  // namespace

Map Map::analytic(int in, int out, TaylorFn fn) {
  Map m;
  m.impl_ = std::make_shared<Impl>(Impl{Kind::analytic, in, out, std::move(fn), {}, {}, {}});
  return m;
}

Map Map::from_jets(int in, int out, JetFn fn, int max_order) {
  Map m;
  m.impl_ = std::make_shared<Impl>(Impl{Kind::jets, in, out, {}, std::move(fn), {}, {}, max_order});
  return m;
}

Map Map::finite_difference(int in, int out, ValueFn fn, Vec extent) {
  if (extent.size() != in) throw DimensionMismatch("finite-difference extent size");
  Map m;
  m.impl_ = std::make_shared<Impl>(Impl{Kind::finite_difference, in, out, {}, {}, std::move(fn),
                                        std::move(extent)});
  return m;
}

Map Map::constant(int in, const Vec& value) {
  return analytic(in, static_cast<int>(value.size()), [value](const TVec&) {
    TVec r;
    for (Eigen::Index i = 0; i < value.size(); ++i) r.emplace_back(value(i));
    return r;
  });
}

Map Map::identity(int n) {
  return analytic(n, n, [](const TVec& x) { return x; });
}

Map Map::finite_differenced(const Vec& extent) const {
  Map self = *this;
  return finite_difference(in_dim(), out_dim(), [self](const Vec& u) { return self(u); }, extent);
}

int Map::in_dim() const { return impl_->in; }
int Map::out_dim() const { return impl_->out; }
Map::Kind Map::kind() const { return impl_->kind; }

int Map::max_order() const {
  if (impl_->kind == Kind::finite_difference) return 2;
  const int cap = jet_order_cap(impl_->in);
  return impl_->order_limit >= 0 ? std::min(cap, impl_->order_limit) : cap;
}

Vec Map::operator()(const Vec& u) const {
  check_input(impl_->in, static_cast<std::size_t>(u.size()));
  switch (impl_->kind) {
    case Kind::analytic: {
      TVec x;
      for (Eigen::Index i = 0; i < u.size(); ++i) x.emplace_back(u(i));
      return values(impl_->analytic(x));
    }
    case Kind::jets:
      return values(impl_->jets(u, 0));
    case Kind::finite_difference:
      return impl_->values(u);
  }
  return {};
}

TVec Map::jet(const Vec& u, int order) const {
  check_input(impl_->in, static_cast<std::size_t>(u.size()));
  switch (impl_->kind) {
    case Kind::analytic: {
      const int k = std::min(order, jet_order_cap(impl_->in));
      TVec r = impl_->analytic(variables(u, k));
      // Outputs that ignore the input come back as plain scalars.
      for (auto& t : r)
        if (t.is_scalar()) t = Taylor::constant(impl_->in, k, t.value());
      return r;
    }
    case Kind::jets:
      return impl_->jets(u, std::min(order, max_order()));
    case Kind::finite_difference:
      return fd_jet(impl_->values, impl_->in, impl_->out, impl_->extent, u, order);
  }
  return {};
}

TVec Map::apply(const TVec& x) const {
  check_input(impl_->in, x.size());
  if (impl_->kind == Kind::analytic) return impl_->analytic(x);
  const Vec u0 = values(x);
  if (all_scalar(x)) {
    const Vec v = (*this)(u0);
    TVec r;
    for (Eigen::Index i = 0; i < v.size(); ++i) r.emplace_back(v(i));
    return r;
  }
  return substitute(jet(u0, min_order(x)), x);
}

Map compose(const Map& outer, const Map& inner) {
  if (outer.in_dim() != inner.out_dim())
    throw DimensionMismatch("compose: inner output " + std::to_string(inner.out_dim()) +
                            " vs outer input " + std::to_string(outer.in_dim()));
  if (outer.kind() == Map::Kind::analytic && inner.kind() == Map::Kind::analytic)
    return Map::analytic(inner.in_dim(), outer.out_dim(),
                         [outer, inner](const TVec& x) { return outer.apply(inner.apply(x)); });
  return Map::from_jets(
      inner.in_dim(), outer.out_dim(),
      [outer, inner](const Vec& u, int order) { return outer.apply(inner.jet(u, order)); },
      std::min(outer.max_order(), inner.max_order()));
}

Map combine(int in, int out, std::vector<Map> inputs,
            std::function<TVec(const std::vector<TVec>&)> fn) {
  bool analytic = true;
  int limit = jet_order_cap(in);
  for (const auto& m : inputs) {
    if (m.in_dim() != in) throw DimensionMismatch("combine: input dimensions differ");
    analytic = analytic && m.kind() == Map::Kind::analytic;
    limit = std::min(limit, m.max_order());
  }
  if (analytic)
    return Map::analytic(in, out, [inputs, fn](const TVec& x) {
      std::vector<TVec> parts;
      for (const auto& m : inputs) parts.push_back(m.apply(x));
      return fn(parts);
    });
  return Map::from_jets(
      in, out,
      [inputs, fn](const Vec& u, int order) {
        std::vector<TVec> parts;
        for (const auto& m : inputs) parts.push_back(m.jet(u, order));
        return fn(parts);
      },
      limit);
}

Map stack(const std::vector<Map>& maps) {
  if (maps.empty()) throw DimensionMismatch("stack of no maps");
  const int in = maps.front().in_dim();
  int out = 0;
  bool analytic = true;
  for (const auto& m : maps) {
    if (m.in_dim() != in) throw DimensionMismatch("stack: input dimensions differ");
    out += m.out_dim();
    analytic = analytic && m.kind() == Map::Kind::analytic;
  }
  if (analytic)
    return Map::analytic(in, out, [maps](const TVec& x) {
      TVec r;
      for (const auto& m : maps) {
        auto part = m.apply(x);
        r.insert(r.end(), part.begin(), part.end());
      }
      return r;
    });
  int limit = jet_order_cap(in);
  for (const auto& m : maps) limit = std::min(limit, m.max_order());
  return Map::from_jets(
      in, out,
      [maps](const Vec& u, int order) {
        TVec r;
        for (const auto& m : maps) {
          auto part = m.jet(u, order);
          r.insert(r.end(), part.begin(), part.end());
        }
        return r;
      },
      limit);
}

Map select(int in, std::vector<int> indices) {
  for (int i : indices)
    if (i < 0 || i >= in) throw DimensionMismatch("select index out of range");
  const int out = static_cast<int>(indices.size());
  return Map::analytic(in, out, [indices](const TVec& x) {
    TVec r;
    for (int i : indices) r.push_back(x[static_cast<std::size_t>(i)]);
    return r;
  });
}

Map cartesian(const std::vector<Map>& maps) {
  int in = 0;
  for (const auto& m : maps) in += m.in_dim();
  std::vector<Map> parts;
  int offset = 0;
  for (const auto& m : maps) {
    std::vector<int> idx(static_cast<std::size_t>(m.in_dim()));
    for (int i = 0; i < m.in_dim(); ++i) idx[static_cast<std::size_t>(i)] = offset + i;
    offset += m.in_dim();
    parts.push_back(compose(m, select(in, idx)));
  }
  return stack(parts);
}

double finite_difference_consistency(const Map& m, const Vec& u, const Vec& extent) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double h = kFirstStep * extent(i);
    auto at = [&](double d) {
      Vec x = u;
      x(i) += d;
      return m(x);
    };
    const Vec d3 = (at(h) - at(-h)) / (2 * h);
    const Vec d5 = (8.0 * (at(h) - at(-h)) - (at(2 * h) - at(-2 * h))) / (12 * h);
    const double scale = std::max(d5.norm(), 1e-300);
    worst = std::max(worst, (d3 - d5).norm() / scale);
  }
  return worst;
}

}  // namespace isothermic
