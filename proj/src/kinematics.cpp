#include "ttent/kinematics.hpp"

#include <Eigen/Geometry>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ttent/errors.hpp"
#include "ttent/text.hpp"

namespace ttent {

void PhysicsConfig::validate() const {
  auto check = [](double v, const char* name) {
    if (!std::isfinite(v) || v <= 0.0) {
      throw Error(ErrorKind::usage, std::string(name) + " must be finite and positive");
    }
  };
  check(m_t, "m_t");
  check(alpha_s, "alpha_s");
  check(sqrt_s, "sqrt_s");
}

PhysicsConfig PhysicsConfig::parse(const std::string& text) {
  PhysicsConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = text::trim(text::strip_comment(line));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::parse_error, "config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = text::trim(body.substr(0, eq));
    const std::string value = text::trim(body.substr(eq + 1));
    double v = 0.0;
    if (!text::parse_double(value, v)) {
      throw Error(ErrorKind::parse_error,
                  "config line " + std::to_string(lineno) + ": bad number '" + value + "'");
    }
    if (key == "m_t") {
      cfg.m_t = v;
    } else if (key == "alpha_s") {
      cfg.alpha_s = v;
    } else if (key == "sqrt_s") {
      cfg.sqrt_s = v;
    } else {
      throw Error(ErrorKind::parse_error,
                  "config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

PhysicsConfig PhysicsConfig::load(const std::string& path) {
  return parse(text::read_file(path));
}

double beta_of_mass(double m, const PhysicsConfig& cfg) {
  const double threshold = 2.0 * cfg.m_t;
  if (!(m >= threshold)) {
    throw Error(ErrorKind::below_threshold,
                "M = " + std::to_string(m) + " GeV is below 2 m_t = " + std::to_string(threshold));
  }
  const double ratio = threshold / m;
  return std::sqrt((1.0 - ratio) * (1.0 + ratio));
}

double mass_of_beta(double beta, const PhysicsConfig& cfg) {
  if (!(beta >= 0.0 && beta < 1.0)) {
    throw Error(ErrorKind::out_of_range, "beta must lie in [0, 1)");
  }
  return 2.0 * cfg.m_t / std::sqrt((1.0 - beta) * (1.0 + beta));
}

PhasePoint PhasePoint::from_mass(double m, double cos_theta, const PhysicsConfig& cfg) {
  return {m, cos_theta, beta_of_mass(m, cfg)};
}

PhasePoint PhasePoint::from_beta(double beta, double cos_theta, const PhysicsConfig& cfg) {
  return {mass_of_beta(beta, cfg), cos_theta, beta};
}

double PhasePoint::sin_theta() const {
  return std::sqrt(std::max(0.0, (1.0 - cos_theta) * (1.0 + cos_theta)));
}

Mat3 HelicityBasis::matrix() const {
  Mat3 m;
  m.col(0) = k;
  m.col(1) = r;
  m.col(2) = n;
  return m;
}

HelicityBasis helicity_basis(double cos_theta, double phi) {
  if (!(std::abs(cos_theta) <= 1.0)) {
    throw Error(ErrorKind::out_of_range, "|cos_theta| must not exceed 1");
  }
  const double s = std::sqrt(std::max(0.0, (1.0 - cos_theta) * (1.0 + cos_theta)));
  if (s < 1e-12) {
    throw Error(ErrorKind::degenerate_at_pole, "helicity basis undefined along the beam axis");
  }
  const double c = cos_theta;
  const double cp = std::cos(phi);
  const double sp = std::sin(phi);
  HelicityBasis b;
  b.k = Vec3(s * cp, s * sp, c);
  // (z - c k) / s, written out to avoid the cancellation in the z component
  b.r = Vec3(-c * cp, -c * sp, s);
  b.n = b.r.cross(b.k);
  return b;
}

Mat3 rotate_correlations_to_beam(const Mat3& c_hel, double cos_theta, double phi) {
  const Mat3 r = helicity_basis(cos_theta, phi).matrix();
  return r * c_hel * r.transpose();
}

double differential_cross_section(double a_tilde, const PhasePoint& pp, const PhysicsConfig& cfg) {
  const double beta = beta_of_mass(pp.m_ttbar, cfg);
  return cfg.alpha_s * cfg.alpha_s * beta / (pp.m_ttbar * pp.m_ttbar) * a_tilde * kGeV2ToPb;
}

}  // namespace ttent
