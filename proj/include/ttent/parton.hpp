#pragma once

// Leading-order production spin density matrices for q qbar -> t tbar and
// g g -> t tbar, and the pointwise entanglement quantities built from them.
// Correlation matrices are stored in the helicity basis with index order
// (k, r, n).

#include "ttent/bloch.hpp"
#include "ttent/kinematics.hpp"

namespace ttent {

enum class Channel { qqbar, gg };

const char* to_string(Channel ch) noexcept;

namespace hel {
inline constexpr int k = 0;
inline constexpr int r = 1;
inline constexpr int n = 2;
}  // namespace hel

struct ProductionCoefficients {
  double a_tilde = 0.0;
  Mat3 c_tilde = Mat3::Zero();
  Vec3 b_plus = Vec3::Zero();
  Vec3 b_minus = Vec3::Zero();

  /// rho = R / tr R expressed as a helicity-basis TwoQubitState.
  TwoQubitState normalized() const;
};

/// Unnormalized LO coefficients at (beta, cos_theta); requires 0 <= beta < 1.
ProductionCoefficients coefficients(Channel ch, double beta, double cos_theta);
inline ProductionCoefficients coefficients(Channel ch, const PhasePoint& pp) {
  return coefficients(ch, pp.beta, pp.cos_theta);
}

/// Delta = -C_nn + |C_kk + C_rr| - 1 in closed form; Delta > 0 iff entangled.
double delta_point(Channel ch, double beta, double cos_theta);
/// Same quantity from any normalized helicity-basis correlation matrix.
double delta_from_correlations(const Mat3& c_hel);
/// max(Delta, 0) / 2.
double concurrence_point(Channel ch, double beta, double cos_theta);

struct CriticalBetas {
  double beta_c1;
  double beta_c2;
};

/// Edges of the separable gg band at production angle theta in (0, pi).
CriticalBetas critical_betas(double theta);

enum class LimitingState { gg_singlet, gg_triplet, qq_threshold };

/// gg_singlet and gg_triplet are helicity-basis states; qq_threshold is given
/// in the beam basis (spins aligned along the beam).
TwoQubitState limiting_state(LimitingState which);

struct MixedPoint {
  TwoQubitState state;
  double w_qq;
  double w_gg;
};

/// Luminosity-weighted convex mixture of the two normalized channel states.
/// Throws ZeroLuminosity if L_qq * A_qq + L_gg * A_gg vanishes.
MixedPoint mix_point(double beta, double cos_theta, double l_qq, double l_gg);

}  // namespace ttent
