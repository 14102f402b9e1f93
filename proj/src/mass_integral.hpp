#pragma once

// Shared invariant-mass quadrature for the luminosity and window modules.

#include <Eigen/Core>

#include "ttent/lumi.hpp"

namespace ttent::detail {

// beta/M^2 * sum_I L^I X^I for X in (A, C_perp, C_z, C_kk, C_nn, C_rr), all
// angular-averaged and unnormalized.
using MassVec = Eigen::Matrix<double, 6, 1>;
enum MassComponent { kA = 0, kPerp, kZ, kKK, kNN, kRR };

MassVec mass_integrand(double m, const LuminosityTable& table, const PhysicsConfig& cfg,
                       ChannelMix mix);

/// Clamps the window to [2 m_t, .], validates it against the table and
/// returns the effective lower edge. Throws EmptyWindow, OutOfRange.
double checked_window(const LuminosityTable& table, const PhysicsConfig& cfg, double m_lo,
                      double m_hi);

/// Integral over [lo, hi] (already validated), split at table nodes and
/// mapped to u = sqrt(M - 2 m_t) on every piece.
MassVec integrate_mass(const LuminosityTable& table, const PhysicsConfig& cfg, ChannelMix mix,
                       double lo, double hi, double rel_tol);

/// Converts the integrated A component to a cross-section in pb.
double sigma_factor(const PhysicsConfig& cfg);

}  // namespace ttent::detail
