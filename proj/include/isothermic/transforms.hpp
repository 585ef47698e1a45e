#pragma once

// Combescure, Christoffel, Ribaucour and Darboux transforms of Euclidean
// immersions, with residual checks of their defining identities.

#include <vector>

#include "isothermic/geometry.hpp"

namespace isothermic {

// Data (phi, beta) of a Combescure transform F = df(grad phi) + beta. The field F
// is stored as a map into R^N; beta is recovered as F - df(grad phi).
struct CombescureData {
  Chart host;
  Map phi;    // n -> 1
  Map field;  // n -> N

  static CombescureData from_beta(const Chart& host, const Map& phi, const Map& beta);
  static CombescureData from_field(const Chart& host, const Map& phi, const Map& field);
};

Map beta_field(const CombescureData& data);

// Jets at one sample of the quantities built from (f, phi, beta). With
// s_order = K the tensor S carries order K, which needs f and phi of order K+2.
struct LocalCombescure {
  LocalGeometry f;
  Taylor phi;
  TVec grad;  // grad phi in chart coordinates
  TVec field;
  TVec beta;
  TMat hess;  // Hess phi, lower indices
  TMat s;     // S^i_j = g^{ik} (Hess phi - <alpha, beta>)_kj
};
LocalCombescure local_combescure(const CombescureData& data, const Vec& u, int s_order);

struct CodazziTensorField {
  std::vector<Mat> s;  // per sample, S^i_j
  double compatibility = 0.0;  // |alpha(grad phi, X) + (d_X beta)^perp| and tangency of beta
  double symmetry = 0.0;       // |gS - (gS)^T|
  double commuting = 0.0;      // |alpha(X, SY) - alpha(SX, Y)|
  double codazzi = 0.0;        // |(nabla_X S)Y - (nabla_Y S)X|
  double closedness = 0.0;     // |d_i(df S e_j) - d_j(df S e_i)|
};

// Throws CompatibilityFailure when the compatibility residual exceeds tol.
CodazziTensorField codazzi_tensor(const CombescureData& data, const CheckOptions& opts = {}, double tol = 1e-6);

struct CombescureResult {
  Chart chart;  // the map F
  bool immersive = true;
  double differential_residual = 0.0;  // |dF - df S|
  double second_form_residual = 0.0;   // |alpha_F(X,Y) - alpha_f(SX,Y)|, immersive charts only
};
CombescureResult combescure_transform(const CombescureData& data, const CheckOptions& opts = {});

enum class ChristoffelVerdict { trivial, christoffel, neither };
const char* to_string(ChristoffelVerdict v);

struct ChristoffelCheck {
  ChristoffelVerdict verdict = ChristoffelVerdict::neither;
  std::vector<double> lambda;  // sqrt(tr S^2 / n) per sample
  std::vector<int> plus_dim;   // eigenvalues +lambda
  std::vector<int> minus_dim;  // eigenvalues -lambda
  double residual = 0.0;       // |S^2 - lambda^2 I| / lambda^2
  double scalar_deviation = 0.0;  // max |S - (tr S / n) I| / |S|
};
ChristoffelCheck check_christoffel(const CodazziTensorField& field, double tol = 1e-7);

struct RibaucourSample {
  bool valid = true;  // false where D is singular; such samples are excluded
  bool contact = false;  // phi ~ 0: f~ = f and delta is undefined (left zero)
  double phi = 0.0;
  double nu = 0.0;    // 1 / <F,F>
  Vec field;
  Mat d;              // I - 2 nu phi S
  Vec delta;          // -F / phi
  Mat p;              // I - 2 nu F F^T
};

struct RibaucourData {
  CombescureData data;
  std::vector<RibaucourSample> samples;
  std::vector<std::size_t> excluded;
};

struct RibaucourResult {
  Chart chart;  // f~ = f - 2 nu phi F
  RibaucourData data;
};

// Throws NullCongruence where <F,F> vanishes (relative 1e-10) and
// DegenerateTransform when D is singular on every sample.
RibaucourResult ribaucour_transform(const CombescureData& data, const CheckOptions& opts = {});

struct RibaucourResiduals {
  double metric = 0.0;        // <X,Y>~ = <DX,DY>
  double connection = 0.0;    // D nabla~_X Y = nabla_X DY + 2nu<SX,DY> grad phi - 2nu<grad phi,DY> SX
  double second_form = 0.0;   // alpha~(X,Y) = P(alpha(DX,Y) + 2nu<SX,DY> beta)
  double differential = 0.0;  // df~ = P df D
  double isometry = 0.0;      // P^T P = I
  double reflection = 0.0;    // PZ - Z = <delta,Z>(f - f~), skipped at contact samples
  double commuting = 0.0;     // [A_xi, A~_{P xi}]
  double adaptedness = 0.0;   // alpha and alpha~ across the eigenspaces of S (two clusters only)
};
RibaucourResiduals verify_ribaucour_relations(const Chart& f, const Chart& f_tilde, const RibaucourData& rdata,
                                              const CheckOptions& opts = {});

struct DarbouxCheck {
  bool darboux = false;
  bool separated = false;
  std::vector<double> lambda;  // larger eigenvalue per sample
  std::vector<double> mu;
  double residual = 0.0;       // |(lambda + mu) phi - <F,F>| / max(1, <F,F>)
};
// Propagates ClusteringAmbiguity from the eigenvalue clustering.
DarbouxCheck check_darboux(const CodazziTensorField& field, const RibaucourData& rdata, double tol = 1e-7);

}  // namespace isothermic
