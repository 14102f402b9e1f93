#include "ttent/parton.hpp"

#include <cassert>
#include <cmath>

#include "ttent/errors.hpp"

namespace ttent {

const char* to_string(Channel ch) noexcept { return ch == Channel::qqbar ? "qqbar" : "gg"; }

TwoQubitState ProductionCoefficients::normalized() const {
  TwoQubitState s;
  s.b_plus = b_plus / a_tilde;
  s.b_minus = b_minus / a_tilde;
  s.c = c_tilde / a_tilde;
  s.basis = Basis::helicity;
  return s;
}

namespace {

void require_beta(double beta) {
  if (!(beta >= 0.0 && beta < 1.0)) throw Error(ErrorKind::out_of_range, "beta must lie in [0, 1)");
}

}  // namespace

ProductionCoefficients coefficients(Channel ch, double beta, double cos_theta) {
  require_beta(beta);
  const double c = cos_theta;
  const double s2 = std::max(0.0, (1.0 - c) * (1.0 + c));
  const double s4 = s2 * s2;
  const double b2 = beta * beta;
  const double b4 = b2 * b2;
  const double gamma_inv = std::sqrt((1.0 - beta) * (1.0 + beta));
  const double sin2t = 2.0 * std::sqrt(s2) * c;

  ProductionCoefficients pc;
  Mat3& m = pc.c_tilde;
  double kr = 0.0;
  if (ch == Channel::qqbar) {
    const double f = 1.0 / 18.0;
    pc.a_tilde = f * (2.0 - b2 * s2);
    m(hel::r, hel::r) = f * (2.0 - b2) * s2;
    m(hel::n, hel::n) = -f * b2 * s2;
    m(hel::k, hel::k) = f * (2.0 * c * c + b2 * s2);
    kr = f * gamma_inv * sin2t;
  } else {
    const double bc2 = b2 * c * c;
    const double f = (7.0 + 9.0 * bc2) / (192.0 * (1.0 - bc2) * (1.0 - bc2));
    const double u = 1.0 + s4;
    pc.a_tilde = f * (1.0 + 2.0 * b2 * s2 - b4 * u);
    m(hel::r, hel::r) = -f * (1.0 - b2 * (2.0 - b2) * u);
    m(hel::n, hel::n) = -f * (1.0 - 2.0 * b2 + b4 * u);
    m(hel::k, hel::k) = -f * (1.0 - 0.5 * b2 * sin2t * sin2t - b4 * u);
    kr = f * gamma_inv * b2 * sin2t * s2;
  }
  m(hel::k, hel::r) = kr;
  m(hel::r, hel::k) = kr;
  return pc;
}

double delta_from_correlations(const Mat3& c) {
  return -c(hel::n, hel::n) + std::abs(c(hel::k, hel::k) + c(hel::r, hel::r)) - 1.0;
}

double delta_point(Channel ch, double beta, double cos_theta) {
  require_beta(beta);
  const double s2 = std::max(0.0, (1.0 - cos_theta) * (1.0 + cos_theta));
  const double b2 = beta * beta;
  if (ch == Channel::qqbar) {
    const double x = b2 * s2;
    return 2.0 * x / (2.0 - x);
  }
  const double b4 = b2 * b2;
  const double u = 1.0 + s2 * s2;
  const double den = 1.0 + 2.0 * b2 * s2 - b4 * u;
  const double low = (2.0 - 4.0 * b2 * (1.0 + s2) + 2.0 * b4 * u) / den;
  const double high = (2.0 * b4 * u - 2.0) / den;
  const double edge = b2 * (1.0 + s2);
  if (edge == 1.0) assert(std::abs(low - high) <= 1e-12 * std::max(1.0, std::abs(high)));
  return edge < 1.0 ? low : high;
}

double concurrence_point(Channel ch, double beta, double cos_theta) {
  return 0.5 * std::max(delta_point(ch, beta, cos_theta), 0.0);
}

CriticalBetas critical_betas(double theta) {
  if (!(theta > 0.0 && theta < M_PI)) throw Error(ErrorKind::out_of_range, "theta must lie in (0, pi)");
  const double s = std::sin(theta);
  const double u = 1.0 + s * s * s * s;
  return {std::sqrt((1.0 + s * s - std::sqrt(2.0) * s) / u), std::pow(u, -0.25)};
}

TwoQubitState limiting_state(LimitingState which) {
  switch (which) {
    case LimitingState::gg_singlet:
      return TwoQubitState::unpolarized(-Mat3::Identity(), Basis::helicity);
    case LimitingState::gg_triplet: {
      Mat3 c = Mat3::Zero();
      c(hel::k, hel::k) = 1.0;
      c(hel::r, hel::r) = 1.0;
      c(hel::n, hel::n) = -1.0;
      return TwoQubitState::unpolarized(c, Basis::helicity);
    }
    case LimitingState::qq_threshold: {
      Mat3 c = Mat3::Zero();
      c(2, 2) = 1.0;
      return TwoQubitState::unpolarized(c, Basis::beam);
    }
  }
  return {};
}

MixedPoint mix_point(double beta, double cos_theta, double l_qq, double l_gg) {
  if (!(l_qq >= 0.0 && l_gg >= 0.0)) {
    throw Error(ErrorKind::negative_luminosity, "luminosities must be non-negative");
  }
  const ProductionCoefficients qq = coefficients(Channel::qqbar, beta, cos_theta);
  const ProductionCoefficients gg = coefficients(Channel::gg, beta, cos_theta);
  const double x_qq = l_qq * qq.a_tilde;
  const double x_gg = l_gg * gg.a_tilde;
  const double total = x_qq + x_gg;
  if (!(total > 0.0)) throw Error(ErrorKind::zero_luminosity, "no production in either channel");
  MixedPoint out;
  out.w_qq = x_qq / total;
  out.w_gg = x_gg / total;
  // sum_I w_I R^I / A^I = sum_I L^I R^I / total
  out.state.c = (l_qq * qq.c_tilde + l_gg * gg.c_tilde) / total;
  out.state.basis = Basis::helicity;
  return out;
}

}  // namespace ttent
