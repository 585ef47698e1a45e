#include "isothermic/chart.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "isothermic/error.hpp"
#include "isothermic/minkowski.hpp"

namespace isothermic {

Box Box::uniform(const Vec& lo, const Vec& hi, int count) {
  if (lo.size() != hi.size()) throw DimensionMismatch("box corners differ in dimension");
  return Box{lo, hi, std::vector<int>(static_cast<std::size_t>(lo.size()), count)};
}

std::size_t Box::size() const {
  std::size_t s = 1;
  for (int c : counts) s *= static_cast<std::size_t>(c);
  return s;
}

std::vector<int> Box::multi_index(std::size_t flat) const {
  std::vector<int> idx(counts.size());
  for (std::size_t a = counts.size(); a-- > 0;) {
    const auto c = static_cast<std::size_t>(counts[a]);
    idx[a] = static_cast<int>(flat % c);
    flat /= c;
  }
  return idx;
}

Vec Box::point(std::size_t flat) const {
  const auto idx = multi_index(flat);
  Vec u(lo.size());
  for (Eigen::Index a = 0; a < lo.size(); ++a) {
    const int c = counts[static_cast<std::size_t>(a)];
    const double t = c > 1 ? static_cast<double>(idx[static_cast<std::size_t>(a)]) / (c - 1) : 0.5;
    u(a) = lo(a) + t * (hi(a) - lo(a));
  }
  return u;
}

Box Box::with_resolution(int count) const {
  Box b = *this;
  std::fill(b.counts.begin(), b.counts.end(), count);
  return b;
}

Box Box::shrunk(double margin) const {
  Box b = *this;
  const Vec d = margin * extent();
  b.lo += d;
  b.hi -= d;
  return b;
}

ProductNet ProductNet::from_sizes(const std::vector<int>& sizes) {
  ProductNet net;
  int next = 0;
  for (int s : sizes) {
    std::vector<int> block;
    for (int i = 0; i < s; ++i) block.push_back(next++);
    net.blocks.push_back(block);
  }
  return net;
}

void ProductNet::validate(int n) const {
  if (blocks.size() < 2) throw DimensionMismatch("a product net needs at least two blocks");
  std::set<int> seen;
  for (const auto& b : blocks) {
    if (b.empty()) throw DimensionMismatch("empty net block");
    for (int i : b) {
      if (i < 0 || i >= n) throw DimensionMismatch("net index out of range");
      if (!seen.insert(i).second) throw DimensionMismatch("net blocks overlap");
    }
  }
  if (static_cast<int>(seen.size()) != n) throw DimensionMismatch("net blocks do not cover all coordinates");
}

int ProductNet::block_of(int coordinate) const {
  for (std::size_t b = 0; b < blocks.size(); ++b)
    if (std::find(blocks[b].begin(), blocks[b].end(), coordinate) != blocks[b].end())
      return static_cast<int>(b);
  return -1;
}

Taylor ambient_inner(const TVec& u, const TVec& v, Ambient ambient) {
  if (ambient == Ambient::lorentz) return lorentz_inner(u, v);
  if (u.size() != v.size()) throw DimensionMismatch("inner product of vectors of different length");
  Taylor s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

double ambient_inner(const Vec& u, const Vec& v, Ambient ambient) {
  if (ambient == Ambient::lorentz) return lorentz_inner(u, v);
  if (u.size() != v.size()) throw DimensionMismatch("inner product of vectors of different length");
  return u.dot(v);
}

TMat induced_metric(const Map& f, Ambient ambient, const Vec& u, int order) {
  const int n = f.in_dim();
  const TVec jet = f.jet(u, order + 1);
  std::vector<TVec> d;
  for (int i = 0; i < n; ++i) d.push_back(diff(jet, i));
  TMat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      g(i, j) = ambient_inner(d[static_cast<std::size_t>(i)], d[static_cast<std::size_t>(j)], ambient);
      g(j, i) = g(i, j);
    }
  return g;
}

BaseMetric BaseMetric::pullback() { return BaseMetric(); }

BaseMetric BaseMetric::flat(int n) {
  BaseMetric m;
  m.kind_ = Kind::flat;
  m.n_ = n;
  m.fn_ = [n](const Vec& u, int order) {
    TMat g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = Taylor::constant(static_cast<int>(u.size()), order, i == j ? 1.0 : 0.0);
    return g;
  };
  return m;
}

BaseMetric BaseMetric::product(const std::vector<Map>& factors, const std::vector<Ambient>& ambients) {
  if (factors.size() != ambients.size()) throw DimensionMismatch("one ambient per factor");
  BaseMetric m;
  m.kind_ = Kind::product;
  for (const auto& f : factors) m.n_ += f.in_dim();
  const int n = m.n_;
  m.fn_ = [factors, ambients, n](const Vec& u, int order) {
    TMat g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = Taylor::constant(n, order, 0.0);
    int offset = 0;
    for (std::size_t k = 0; k < factors.size(); ++k) {
      const int nk = factors[k].in_dim();
      // Embed the factor metric jet (in nk variables) into the full jet space.
      TVec local;
      for (int i = 0; i < nk; ++i) local.push_back(Taylor::variable(n, order, offset + i, u(offset + i)));
      const TMat gk = induced_metric(factors[k], ambients[k], u.segment(offset, nk), order);
      for (int i = 0; i < nk; ++i)
        for (int j = 0; j < nk; ++j) {
          const TVec entry = substitute({gk(i, j)}, local);
          g(offset + i, offset + j) = entry[0];
        }
      offset += nk;
    }
    return g;
  };
  return m;
}

BaseMetric BaseMetric::twisted(const ProductNet& net, std::vector<ScalarFn> rho) {
  if (net.blocks.size() != rho.size()) throw DimensionMismatch("one twist function per block");
  BaseMetric m;
  m.kind_ = Kind::twisted;
  for (const auto& b : net.blocks) m.n_ += static_cast<int>(b.size());
  net.validate(m.n_);
  const int n = m.n_;
  m.rho_ = rho;
  m.twist_net_ = net;
  m.fn_ = [net, rho, n](const Vec& u, int order) {
    const TVec x = variables(u, order);
    TMat g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = Taylor::constant(n, order, 0.0);
    for (std::size_t b = 0; b < net.blocks.size(); ++b) {
      const Taylor r = rho[b](x);
      const Taylor r2 = r * r;
      for (int i : net.blocks[b]) g(i, i) = r2;
    }
    return g;
  };
  return m;
}

BaseMetric BaseMetric::conformal(ScalarFn lambda, const BaseMetric& base) {
  if (!base.declared()) throw DomainError("conformal rescaling needs a declared base metric");
  BaseMetric m;
  m.kind_ = Kind::conformal;
  m.n_ = base.n_;
  m.fn_ = [lambda, base](const Vec& u, int order) {
    const Taylor scale = exp(2.0 * lambda(variables(u, order)));
    return scale * base.jet(u, order);
  };
  return m;
}

BaseMetric BaseMetric::general(int n, Fn fn) {
  BaseMetric m;
  m.kind_ = Kind::general;
  m.n_ = n;
  m.fn_ = std::move(fn);
  return m;
}

Mat BaseMetric::at(const Vec& u) const { return jet(u, 0).values(); }

TMat BaseMetric::jet(const Vec& u, int order) const {
  if (!declared()) throw DomainError("pullback metric needs a chart map");
  if (u.size() != n_) throw DimensionMismatch("metric evaluated at a point of the wrong dimension");
  return fn_(u, order);
}

TMat Chart::base_metric(const Vec& u, int order) const {
  if (base.declared()) return base.jet(u, order);
  return induced_metric(map, ambient, u, order);
}

Chart Chart::finite_differenced() const {
  Chart c = *this;
  const Vec extent = box.extent();
  c.map = map.finite_differenced(extent);
  if (factor) c.factor = factor->finite_differenced(extent);
  return c;
}

}  // namespace isothermic
