#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "isothermic/chart.hpp"
#include "isothermic/lightcone.hpp"
#include "isothermic/parallel.hpp"

namespace isothermic {

struct CheckOptions {
  std::uint64_t seed = 20240917;
  int pairs = 6;  // random tangent pairs per sample
  Execution exec = Execution::parallel;
};

// Jets of an immersion at one point; tensors are indexed in chart coordinates.
// With input jets of order K, first-order quantities carry order K-1 and
// Christoffel symbols and alpha carry order K-2.
struct LocalGeometry {
  int n = 0;
  int ambient_dim = 0;
  Ambient ambient = Ambient::euclidean;
  TVec f;
  std::vector<TVec> df;   // df[i] = d_i f
  std::vector<TVec> d2f;  // d2f[i*n+j]
  TMat g;
  TMat ginv;
  std::vector<Taylor> gamma;  // gamma[(k*n+i)*n+j] = Gamma^k_ij
  std::vector<TVec> alpha;    // alpha[i*n+j], ambient vectors

  static LocalGeometry of(const TVec& f_jet, Ambient ambient);
  // Jets of order 2 + extra at u.
  static LocalGeometry at(const Map& f, Ambient ambient, const Vec& u, int extra = 0);

  const Taylor& christoffel(int k, int i, int j) const {
    return gamma[static_cast<std::size_t>((k * n + i) * n + j)];
  }
  const TVec& second_form(int i, int j) const { return alpha[static_cast<std::size_t>(i * n + j)]; }
  // Values of df as an ambient_dim x n matrix.
  Mat tangent() const;
  Mat metric() const { return g.values(); }
  // Sum_i v^i d_i f (values).
  Vec push_forward(const Vec& v) const;
};

// Throws RankDeficiency when the differential loses rank (relative 1e-8).
Mat first_fundamental_form(const Chart& chart, const Vec& u);

struct SecondFundamentalForm {
  std::vector<Vec> normals;  // orthonormal normal frame
  std::vector<int> signs;
  std::vector<Vec> alpha;    // alpha[i*n+j], ambient vectors
  std::vector<Mat> coeff;    // coeff[k](i,j) = sign_k <alpha_ij, normal_k>
};
SecondFundamentalForm second_fundamental_form(const Chart& chart, const Vec& u);

// Orthonormal frame of the normal space from tangent vector values.
std::vector<Vec> normal_frame(const Mat& tangent, Ambient ambient, std::vector<int>* signs = nullptr);

struct ConformalityResult {
  double residual = 0.0;
  std::vector<double> factor;  // phi per sample
};
ConformalityResult conformality_check(const Chart& chart, const CheckOptions& opts = {});

// max_{i != j blocks} |alpha(X_i,X_j)| / max |alpha| over unit coordinate vectors.
double adaptedness_check(const Chart& chart, const ProductNet& net, const CheckOptions& opts = {});

struct NetGeometryReport {
  std::vector<double> umbilicity;             // E_i
  std::vector<double> complement_umbilicity;  // E_i^perp
  std::vector<double> sphericality;           // E_i
  std::vector<double> complement_integrability;
  double cp_residual = 0.0;
  double tp_residual = 0.0;
  double wp_residual = 0.0;
  std::optional<double> twist_residual;
  // Per sample and block, in chart coordinates.
  std::vector<std::vector<Vec>> block_normal;       // mean curvature normal of E_i
  std::vector<std::vector<Vec>> complement_normal;  // mean curvature normal of E_i^perp
};

using MetricJet = std::function<TMat(const Vec&, int)>;

// Christoffel symbols gamma[(k*n+i)*n+j] of a metric jet (order drops by one).
std::vector<Taylor> christoffel_symbols(const TMat& g);

NetGeometryReport net_geometry_report(const MetricJet& metric, const Box& box, const ProductNet& net,
                                      const BaseMetric* twisted = nullptr, const CheckOptions& opts = {});
NetGeometryReport net_geometry_report(const BaseMetric& metric, const Box& box, const ProductNet& net,
                                      const CheckOptions& opts = {});
// Uses the chart's declared base metric, or its induced metric when none is declared.
NetGeometryReport net_geometry_report(const Chart& chart, const ProductNet& net, const CheckOptions& opts = {});

struct AlphaSplitResult {
  double residual = 0.0;       // max |alpha_F - RHS| over samples and coordinate pairs
  double gram_residual = 0.0;  // max |<F,F>| + |<F,eta> - 1|
  bool lorentzian = true;      // span{F, eta} has a Lorentzian Gram matrix everywhere
};
AlphaSplitResult verify_alpha_F_split(const MoebiusFrame& frame, const Chart& f, const Map& phi,
                                      const CheckOptions& opts = {});

struct CurvatureCluster {
  double value = 0.0;
  int multiplicity = 0;
  Mat directions;      // n x multiplicity, orthonormal for the induced metric
  double dupin = 0.0;  // max |d(value)(Y)| over unit Y in the eigenspace
};

struct PrincipalCurvatures {
  Vec values;  // ascending
  Mat vectors;
  std::vector<CurvatureCluster> clusters;
};

// Groups ascending eigenvalues; gaps above 1e-3 (relative) split clusters, gaps
// in (1e-5, 1e-3] are ambiguous and throw ClusteringAmbiguity.
std::vector<std::pair<int, int>> cluster_ranges(const Vec& sorted, double gap = 1e-3);

// Hypersurfaces in Euclidean space; the normal is oriented so det[df | nu] > 0.
PrincipalCurvatures principal_curvatures(const Chart& chart, const Vec& u, bool with_dupin = true);
std::vector<PrincipalCurvatures> principal_curvature_fields(const Chart& chart, const CheckOptions& opts = {},
                                                            bool with_dupin = true);

}  // namespace isothermic
