#pragma once

// Kinematic conversions and the helicity-basis geometry.

#include <string>

#include "ttent/bloch.hpp"

namespace ttent {

/// hbar^2 c^2 in pb GeV^2.
inline constexpr double kGeV2ToPb = 0.3894e9;

struct PhysicsConfig {
  double m_t = 173.0;
  double alpha_s = 0.118;
  double sqrt_s = 13000.0;

  /// Throws Usage unless every field is finite and strictly positive.
  void validate() const;

  /// Reads `key = value` lines (keys m_t, alpha_s, sqrt_s; '#' comments).
  /// Missing keys keep their defaults. Throws ParseError.
  static PhysicsConfig load(const std::string& path);
  static PhysicsConfig parse(const std::string& text);
};

/// beta = sqrt(1 - 4 m_t^2 / M^2). Throws BelowThreshold for m < 2 m_t.
double beta_of_mass(double m, const PhysicsConfig& cfg);
/// M = 2 m_t / sqrt(1 - beta^2). Throws OutOfRange unless 0 <= beta < 1.
double mass_of_beta(double beta, const PhysicsConfig& cfg);

struct PhasePoint {
  double m_ttbar = 0.0;
  double cos_theta = 0.0;
  double beta = 0.0;

  static PhasePoint from_mass(double m, double cos_theta, const PhysicsConfig& cfg);
  static PhasePoint from_beta(double beta, double cos_theta, const PhysicsConfig& cfg);
  double sin_theta() const;
};

/// Storage order is (k, r, n); n = r x k, so the right-handed triad is (k, n, r).
struct HelicityBasis {
  Vec3 k;
  Vec3 r;
  Vec3 n;

  /// Columns k, r, n in beam coordinates.
  Mat3 matrix() const;
};

/// Top direction k = (s cos(phi), s sin(phi), c) with the beam along z.
/// Throws DegenerateAtPole when sin(theta) < 1e-12.
HelicityBasis helicity_basis(double cos_theta, double phi = 0.0);

/// C_beam = R C_hel R^T with R = helicity_basis(cos_theta, phi).matrix();
/// C_hel indices in (k, r, n) order.
Mat3 rotate_correlations_to_beam(const Mat3& c_hel, double cos_theta, double phi = 0.0);

/// alpha_s^2 beta / M^2 * a_tilde in pb / GeV / sr.
double differential_cross_section(double a_tilde, const PhasePoint& pp, const PhysicsConfig& cfg);

}  // namespace ttent
