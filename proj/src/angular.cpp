#include "ttent/angular.hpp"

#include <algorithm>
#include <cmath>

#include "ttent/errors.hpp"
#include "ttent/kinematics.hpp"
#include "ttent/quadrature.hpp"

namespace ttent {

namespace {

// Below this x the power series of K_{n,m} is used; the recursion loses
// digits to cancellation for small x.
constexpr double kSeriesCutoff = 0.7;

double k_series(int n, int m, double x) {
  const double x2 = x * x;
  double power = std::pow(x, 2 * n + 1);
  double binom = 1.0;  // C(m + j - 1, j)
  double sum = 0.0;
  for (int j = 0; j < 2000; ++j) {
    const double term = binom * power / (2 * n + 2 * j + 1);
    sum += term;
    if (term < 1e-18 * sum) break;
    binom *= static_cast<double>(m + j) / (j + 1);
    power *= x2;
  }
  return 2.0 * sum;
}

double k_recursion(int n, int m, double x) {
  if (m == 0) return 2.0 * std::pow(x, 2 * n + 1) / (2 * n + 1);
  if (n == 0) {
    if (m == 1) return 2.0 * std::atanh(x);
    return (2.0 * x / std::pow(1.0 - x * x, m - 1) + (2 * m - 3) * k_recursion(0, m - 1, x)) /
           (2.0 * (m - 1));
  }
  return k_recursion(n - 1, m, x) - k_recursion(n - 1, m - 1, x);
}

// atanh(b)/b
double at_ratio(double b) {
  if (b < 1e-3) {
    const double b2 = b * b;
    return 1.0 + b2 * (1.0 / 3.0 + b2 * (1.0 / 5.0 + b2 / 7.0));
  }
  return std::atanh(b) / b;
}

// (atanh(b)/b - 1) / b^2 = sum_{k>=1} b^{2(k-1)} / (2k+1)
double at_excess(double b) {
  if (b >= 0.3) return (std::atanh(b) / b - 1.0) / (b * b);
  const double b2 = b * b;
  double power = 1.0;
  double sum = 0.0;
  for (int k = 1; k < 200; ++k) {
    const double term = power / (2 * k + 1);
    sum += term;
    if (term < 1e-18 * sum) break;
    power *= b2;
  }
  return sum;
}

// f(b) / b^4 with f(b) = (1 - sqrt(1 - b^2))^2 / 2.
double f_over_b4(double b) {
  const double root = std::sqrt((1.0 - b) * (1.0 + b));
  return 0.5 / ((1.0 + root) * (1.0 + root));
}

double f_of_beta(double b) { return f_over_b4(b) * b * b * b * b; }

// 49 - 149 b^2/3 + 24 b^4/5 - (17 b^4 - 66 b^2 + 49) atanh(b)/b; O(b^6).
double g_bracket(double b) {
  const double b2 = b * b;
  if (b >= 0.3) {
    return 49.0 - 149.0 * b2 / 3.0 + 24.0 * b2 * b2 / 5.0 -
           (17.0 * b2 * b2 - 66.0 * b2 + 49.0) * at_ratio(b);
  }
  double power = b2 * b2 * b2;
  double sum = 0.0;
  for (int k = 3; k < 300; ++k) {
    const double term = -(49.0 / (2 * k + 1) - 66.0 / (2 * k - 1) + 17.0 / (2 * k - 3)) * power;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    power *= b2;
  }
  return sum;
}

double g_of_beta(double b) { return f_over_b4(b) / 96.0 * g_bracket(b); }

void require_beta(double beta) {
  if (!(beta >= 0.0 && beta < 1.0)) throw Error(ErrorKind::out_of_range, "beta must lie in [0, 1)");
}

}  // namespace

double k_integral(int n, int m, double x) {
  if (n < 0 || m < 0) throw Error(ErrorKind::out_of_range, "K_{n,m} needs n, m >= 0");
  if (!(x >= 0.0 && x < 1.0)) throw Error(ErrorKind::out_of_range, "K_{n,m}(x) needs 0 <= x < 1");
  if (m > 0 && x <= kSeriesCutoff) return k_series(n, m, x);
  return k_recursion(n, m, x);
}

TwoQubitState AveragedCoefficients::state() const {
  Mat3 c = Mat3::Zero();
  c(0, 0) = c(1, 1) = c_perp();
  c(2, 2) = c_z();
  return TwoQubitState::unpolarized(c, Basis::beam);
}

AveragedCoefficients averaged_coefficients(Channel ch, double beta) {
  require_beta(beta);
  const double b = beta;
  const double b2 = b * b;
  const double b4 = b2 * b2;
  AveragedCoefficients out;
  out.channel = ch;
  out.beta = beta;
  if (ch == Channel::qqbar) {
    const double f = f_of_beta(b);
    out.a_tilde_avg = (1.0 - b2 / 3.0) / 9.0;
    out.c_perp_tilde = 2.0 * f / 135.0;
    out.c_z_tilde = (1.0 - b2 / 3.0 - 4.0 * f / 15.0) / 9.0;
    return out;
  }
  const double at = at_ratio(b);
  const double g = g_of_beta(b);
  out.a_tilde_avg = (-59.0 + 31.0 * b2 + (66.0 - 36.0 * b2 + 2.0 * b4) * at) / 192.0;
  out.c_perp_tilde = (1.0 - b2) / 192.0 * (9.0 - 16.0 * at) + g;
  out.c_z_tilde = (-109.0 + 49.0 * b2 + (102.0 - 72.0 * b2 + 2.0 * b4) * at) / 192.0 - 2.0 * g;
  return out;
}

HelicityAverages averaged_helicity_correlations(Channel ch, double beta) {
  require_beta(beta);
  const double b2 = beta * beta;
  const double b4 = b2 * b2;
  HelicityAverages out;
  if (ch == Channel::qqbar) {
    out.c_rr = (2.0 - b2) / 27.0;
    out.c_nn = -b2 / 27.0;
    out.c_kk = (1.0 + b2) / 27.0;
    return out;
  }
  const double at = at_ratio(beta);
  const double ex = at_excess(beta);
  out.c_rr = -(87.0 - 31.0 * b2 + 66.0 * ex - (102.0 - 38.0 * b2 + 2.0 * b4) * at) / 192.0;
  out.c_nn = -(41.0 - 31.0 * b2 - (34.0 - 36.0 * b2 + 2.0 * b4) * at) / 192.0;
  out.c_kk = -(-37.0 + 31.0 * b2 - 66.0 * ex + (66.0 - 34.0 * b2 + 2.0 * b4) * at) / 192.0;
  return out;
}

OracleAverage numeric_average_oracle(Channel ch, double beta, double tol) {
  require_beta(beta);
  constexpr double edge = 1.0 - 1e-9;
  // component of the beam-basis matrix at azimuth 0
  auto beam = [&](double c, int i, int j) {
    const ProductionCoefficients pc = coefficients(ch, beta, c);
    return rotate_correlations_to_beam(pc.c_tilde, c)(i, j);
  };
  auto average = [&](auto&& fn) { return 0.5 * quad::simpson(fn, -edge, edge, tol); };

  OracleAverage out;
  AveragedCoefficients& co = out.coeffs;
  co.channel = ch;
  co.beta = beta;
  co.a_tilde_avg = average([&](double c) { return coefficients(ch, beta, c).a_tilde; });
  // averaging over azimuth maps diag(xx, yy, zz) to diag((xx+yy)/2, (xx+yy)/2, zz)
  co.c_perp_tilde = average([&](double c) { return 0.5 * (beam(c, 0, 0) + beam(c, 1, 1)); });
  co.c_z_tilde = average([&](double c) { return beam(c, 2, 2); });

  auto hel_avg = [&](int idx) {
    return average([&](double c) { return coefficients(ch, beta, c).c_tilde(idx, idx); });
  };
  out.helicity.c_kk = hel_avg(hel::k);
  out.helicity.c_rr = hel_avg(hel::r);
  out.helicity.c_nn = hel_avg(hel::n);

  const double xz = average([&](double c) { return beam(c, 0, 2); });
  const double xy = average([&](double c) { return beam(c, 0, 1); });
  const double yz = average([&](double c) { return beam(c, 1, 2); });
  const double kr = average([&](double c) { return coefficients(ch, beta, c).c_tilde(hel::k, hel::r); });
  out.max_offdiag = std::max({std::abs(xz), std::abs(xy), std::abs(yz), std::abs(kr)});
  return out;
}

double delta_avg(Channel ch, double beta) {
  const AveragedCoefficients a = averaged_coefficients(ch, beta);
  return delta_axial(a.c_perp(), a.c_z());
}

double delta_avg_trace_form(Channel ch, double beta) {
  const AveragedCoefficients a = averaged_coefficients(ch, beta);
  return -(2.0 * a.c_perp() + a.c_z()) - 1.0;
}

double critical_beta_gg() {
  return quad::bisect([](double b) { return delta_avg(Channel::gg, b); }, 0.3, 0.9, 1e-6);
}

double beta_delta_crossover() {
  return quad::bisect([](double b) { return averaged_coefficients(Channel::gg, b).c_perp_tilde; },
                      0.9, 0.999, 1e-9);
}

}  // namespace ttent
