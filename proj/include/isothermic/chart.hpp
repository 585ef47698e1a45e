#pragma once

#include <optional>
#include <string>
#include <vector>

#include "isothermic/map.hpp"
#include "isothermic/taylor.hpp"

namespace isothermic {

// Axis-aligned sample grid with inclusive endpoints; flat index is row-major
// with the last axis varying fastest.
struct Box {
  Vec lo;
  Vec hi;
  std::vector<int> counts;

  static Box uniform(const Vec& lo, const Vec& hi, int count);

  int dim() const { return static_cast<int>(lo.size()); }
  std::size_t size() const;
  Vec extent() const { return hi - lo; }
  Vec point(std::size_t flat) const;
  std::vector<int> multi_index(std::size_t flat) const;
  Box with_resolution(int count) const;
  // Shrinks every axis towards the centre by `margin` of its extent on each side.
  Box shrunk(double margin) const;
};

struct ProductNet {
  std::vector<std::vector<int>> blocks;

  static ProductNet from_sizes(const std::vector<int>& sizes);
  // Checks a partition of {0..n-1} into k >= 2 nonempty blocks.
  void validate(int n) const;
  int block_of(int coordinate) const;
  std::size_t size() const { return blocks.size(); }
};

enum class Ambient { euclidean, lorentz };

Taylor ambient_inner(const TVec& u, const TVec& v, Ambient ambient);
double ambient_inner(const Vec& u, const Vec& v, Ambient ambient);

// Riemannian metric on a chart domain, evaluable on jets.
class BaseMetric {
 public:
  enum class Kind { pullback, flat, product, twisted, conformal, general };
  // Jet of the metric at a point: entries in dim() variables of the given order.
  using Fn = std::function<TMat(const Vec&, int)>;
  using ScalarFn = std::function<Taylor(const TVec&)>;

  BaseMetric() = default;

  // Use the metric induced by the chart map itself.
  static BaseMetric pullback();
  static BaseMetric flat(int n);
  // Block-diagonal metric from the induced metrics of factor maps.
  static BaseMetric product(const std::vector<Map>& factors, const std::vector<Ambient>& ambients);
  // sum_i rho_i^2 * (flat metric on block i).
  static BaseMetric twisted(const ProductNet& net, std::vector<ScalarFn> rho);
  // exp(2 lambda) * base.
  static BaseMetric conformal(ScalarFn lambda, const BaseMetric& base);
  static BaseMetric general(int n, Fn fn);

  Kind kind() const { return kind_; }
  int dim() const { return n_; }
  bool declared() const { return kind_ != Kind::pullback; }
  Mat at(const Vec& u) const;
  TMat jet(const Vec& u, int order) const;
  // Twist functions rho_i when the metric was declared as a twisted product.
  const std::vector<ScalarFn>& twist() const { return rho_; }
  const std::optional<ProductNet>& twist_net() const { return twist_net_; }

 private:
  Kind kind_ = Kind::pullback;
  int n_ = 0;
  Fn fn_;
  std::vector<ScalarFn> rho_;
  std::optional<ProductNet> twist_net_;
};

// Induced metric of a map under the ambient form, evaluable on jets.
TMat induced_metric(const Map& f, Ambient ambient, const Vec& u, int order);

struct Chart {
  std::string label;
  Map map;
  Box box;
  Ambient ambient = Ambient::euclidean;
  std::optional<ProductNet> net;
  BaseMetric base;
  // Known conformal factor with respect to `base`, when a construction supplies it.
  std::optional<Map> factor;

  int dim() const { return map.in_dim(); }
  int ambient_dim() const { return map.out_dim(); }
  Vec sample(std::size_t flat) const { return box.point(flat); }
  // Metric used for conformality: the declared base metric, or the chart's own.
  TMat base_metric(const Vec& u, int order) const;
  // Same chart with every jet computed by finite differences.
  Chart finite_differenced() const;
};

}  // namespace isothermic
