#pragma once

// Two-qubit state algebra in the Bloch (Fano) parametrization
//
//   rho = [ I4 + sum_i (B+_i s_i x I2 + B-_i I2 x s_i) + sum_ij C_ij s_i x s_j ] / 4
//
// with the product basis |uu>, |ud>, |du>, |dd> of the third spin component.
// Subsystem 1 is the top, subsystem 2 the antitop.

#include <Eigen/Core>
#include <complex>

namespace ttent {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using HermitianMatrix4 = Eigen::Matrix4cd;

/// Default tolerance for positive-semidefiniteness decisions.
inline constexpr double kTolPsd = 1e-10;

/// Bookkeeping label for the frame the Bloch coefficients refer to.
enum class Basis { helicity, beam, other };

struct TwoQubitState {
  Vec3 b_plus = Vec3::Zero();
  Vec3 b_minus = Vec3::Zero();
  Mat3 c = Mat3::Zero();
  Basis basis = Basis::other;

  static TwoQubitState unpolarized(const Mat3& c, Basis basis = Basis::other) {
    return {Vec3::Zero(), Vec3::Zero(), c, basis};
  }
  static TwoQubitState maximally_mixed() { return {}; }
  static TwoQubitState singlet() { return unpolarized(-Mat3::Identity()); }

  double trace_c() const { return c.trace(); }
  /// D = tr[C]/3.
  double d_observable() const { return c.trace() / 3.0; }
};

/// True when every |B±_i| <= 1 and |C_ij| <= 1 (soft sanity bound, not physicality).
bool within_bloch_bounds(const TwoQubitState& state);

HermitianMatrix4 assemble_density(const TwoQubitState& state);

/// Inverse of assemble_density: B+_i = tr(rho s_i x I), B-_i = tr(rho I x s_i),
/// C_ij = tr(rho s_i x s_j). Only the Hermitian part of `rho` contributes.
TwoQubitState bloch_coefficients(const HermitianMatrix4& rho, Basis basis = Basis::other);

/// Transposes each 2x2 block (partial transpose on the second qubit).
HermitianMatrix4 partial_transpose(const HermitianMatrix4& m);

/// Eigenvalues of the Hermitian part, ascending.
Eigen::Vector4d hermitian_eigenvalues(const HermitianMatrix4& m);

double min_eigenvalue(const TwoQubitState& state);
bool is_physical(const TwoQubitState& state, double tol = kTolPsd);

/// Peres-Horodecki: entangled iff rho^T2 has an eigenvalue below -tol.
/// Throws InputNotPhysical if rho itself is not PSD within tol.
bool is_entangled_ppt(const TwoQubitState& state, double tol = kTolPsd);

/// Wootters concurrence max(0, l1 - l2 - l3 - l4), l_i the decreasing
/// eigenvalues of sqrt(sqrt(rho) rho~ sqrt(rho)), rho~ = (s2 x s2) rho* (s2 x s2).
/// Clamped to [0, 1]. Throws InputNotPhysical.
double concurrence_wootters(const TwoQubitState& state, double tol = kTolPsd);

/// Closed-form concurrence of the real unpolarized state with C = diag(c1, c2, c3).
/// Throws NotPhysicalCoefficients when the diagonal state is not PSD within 1e-12.
double concurrence_diagonal(double c1, double c2, double c3);

/// Sufficient entanglement conditions valid for any state; each value > 0
/// certifies entanglement.
struct SufficientCriteria {
  double p_general;        // (B+3+B-3)^2 + (C11+C22)^2 + (C21-C12)^2 - (1+C33)^2
  double p_tilde;          // (C11+C22)^2 - (1+C33)^2
  double delta;            // -C33 + |C11+C22| - 1
  double trace_criterion;  // -tr[C] - 1

  bool certifies() const {
    return p_general > 0.0 || p_tilde > 0.0 || delta > 0.0 || trace_criterion > 0.0;
  }
};

SufficientCriteria sufficient_criteria(const TwoQubitState& state);

/// delta = -c_z + 2|c_perp| - 1 for a state symmetric about the third axis.
/// For unpolarized axial states delta > 0 iff entangled, concurrence = max(delta, 0)/2.
double delta_axial(double c_perp, double c_z);

/// PPT discriminant for polarized axial states:
/// 4 c_perp^2 + (bz_plus + bz_minus)^2 - (1 + c_z)^2 > 0 iff entangled.
double ppt_axial(double c_perp, double c_z, double bz_plus, double bz_minus);

/// Uhlmann fidelity (tr sqrt(sqrt(a) b sqrt(a)))^2. Negative eigenvalues of
/// either argument are clipped before taking roots.
double fidelity(const HermitianMatrix4& a, const HermitianMatrix4& b);

}  // namespace ttent
