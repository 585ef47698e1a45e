#pragma once

// Smooth maps R^in -> R^out with jet access.
//
// Three flavours share one interface:
//   analytic          the formula is evaluated directly on Taylor inputs;
//   from_jets         a callback produces the Taylor expansion at a point
//                     (used for derived maps such as transforms);
//   finite_difference only values are known; jets up to order 2 come from
//                     central stencils with steps proportional to the box extent.

#include <functional>
#include <memory>

#include <Eigen/Dense>

#include "isothermic/taylor.hpp"

namespace isothermic {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

class Map {
 public:
  using TaylorFn = std::function<TVec(const TVec&)>;
  using JetFn = std::function<TVec(const Vec&, int)>;
  using ValueFn = std::function<Vec(const Vec&)>;
  enum class Kind { analytic, jets, finite_difference };

  Map() = default;

  static Map analytic(int in, int out, TaylorFn fn);
  // max_order < 0 means the jet-space limit for `in` variables.
  static Map from_jets(int in, int out, JetFn fn, int max_order = -1);
  // steps: per-axis extents; first derivatives use 1e-4 * extent, second 1e-3 * extent.
  static Map finite_difference(int in, int out, ValueFn fn, Vec extent);
  static Map constant(int in, const Vec& value);
  static Map identity(int n);

  // Same values, derivatives by finite differences only.
  Map finite_differenced(const Vec& extent) const;

  bool valid() const { return impl_ != nullptr; }
  int in_dim() const;
  int out_dim() const;
  Kind kind() const;
  // Highest derivative order the map can deliver.
  int max_order() const;

  Vec operator()(const Vec& u) const;
  // Taylor expansion at u in in_dim() variables.
  TVec jet(const Vec& u, int order) const;
  // Composition with arbitrary jets (the inputs may live in any jet space).
  TVec apply(const TVec& x) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

Map compose(const Map& outer, const Map& inner);
// u -> (m_1(u), ..., m_k(u)).
Map stack(const std::vector<Map>& maps);
// (u_1, ..., u_k) -> (m_1(u_1), ..., m_k(u_k)).
Map cartesian(const std::vector<Map>& maps);
// u -> fn(m_1(u), ..., m_k(u)); analytic when every input is.
Map combine(int in, int out, std::vector<Map> inputs,
            std::function<TVec(const std::vector<TVec>&)> fn);
// Selects the coordinates `indices` of the input.
Map select(int in, std::vector<int> indices);

// Max relative disagreement of 3-point and 5-point first-derivative stencils at u.
double finite_difference_consistency(const Map& m, const Vec& u, const Vec& extent);

}  // namespace isothermic
