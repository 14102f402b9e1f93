#pragma once

// Full-solid-angle averages of the LO production coefficients.
//
// Averages use the measure (1/4pi) dOmega. After averaging, the beam-basis
// correlation matrix is diag(C_perp, C_perp, C_z) and the helicity-basis one
// is diag(C_rr, C_nn, C_kk). All "_tilde" values are unnormalized; divide by
// a_tilde_avg for the spin state.

#include "ttent/bloch.hpp"
#include "ttent/parton.hpp"

namespace ttent {

/// K_{n,m}(x) = integral over [-x, x] of z^{2n} / (1 - z^2)^m, for 0 <= x < 1.
double k_integral(int n, int m, double x);

struct AveragedCoefficients {
  double a_tilde_avg = 0.0;
  double c_perp_tilde = 0.0;
  double c_z_tilde = 0.0;
  Channel channel = Channel::gg;
  double beta = 0.0;

  double c_perp() const { return c_perp_tilde / a_tilde_avg; }
  double c_z() const { return c_z_tilde / a_tilde_avg; }
  /// Unpolarized axial state in the beam basis.
  TwoQubitState state() const;
};

struct HelicityAverages {
  double c_rr = 0.0;
  double c_nn = 0.0;
  double c_kk = 0.0;
};

/// Closed forms; 0 <= beta < 1.
AveragedCoefficients averaged_coefficients(Channel ch, double beta);
HelicityAverages averaged_helicity_correlations(Channel ch, double beta);

struct OracleAverage {
  AveragedCoefficients coeffs;
  HelicityAverages helicity;
  /// Largest |off-diagonal| of the averaged beam-basis matrix.
  double max_offdiag = 0.0;
};

/// Direct quadrature of the pointwise coefficients rotated to the beam basis.
/// The azimuthal average is taken analytically; the polar integral uses
/// adaptive Simpson on [-1 + 1e-9, 1 - 1e-9] with absolute tolerance `tol`.
OracleAverage numeric_average_oracle(Channel ch, double beta, double tol = 1e-11);

/// delta = -C_z + 2|C_perp| - 1 of the averaged state.
double delta_avg(Channel ch, double beta);
/// -tr[C] - 1 = -C_z - 2 C_perp - 1; equals delta_avg while C_perp <= 0.
double delta_avg_trace_form(Channel ch, double beta);

/// Root of delta_avg(gg, .) by bisection on [0.3, 0.9] to 1e-6.
double critical_beta_gg();
/// beta above which C_perp^gg turns positive.
double beta_delta_crossover();

}  // namespace ttent
