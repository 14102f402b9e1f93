#pragma once

// Adaptive 1D quadrature used by the averaging and window integrals.
// Both schemes bisect in a fixed order, so results are bit-reproducible.

#include <array>
#include <cmath>
#include <string>
#include <type_traits>

#include <Eigen/Core>

#include "ttent/errors.hpp"

namespace ttent::quad {

namespace detail {

template <class F>
double simpson_step(const F& f, double a, double b, double fa, double fm, double fb, double whole,
                    double tol, int depth, int max_depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  if (depth >= max_depth) {
    throw Error(ErrorKind::quadrature_no_convergence,
                "adaptive Simpson exceeded depth " + std::to_string(max_depth));
  }
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1, max_depth) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1, max_depth);
}

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1].
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::abs(v); }
template <class V>
double magnitude(const V& v) {
  return v.template lpNorm<Eigen::Infinity>();
}

template <class V>
struct GkResult {
  V value;
  double error;
};

template <class F>
auto gk15(const F& f, double a, double b) {
  using V = std::decay_t<decltype(f(a))>;
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const V fc = f(c);
  V kronrod = kWgk[7] * fc;
  V gauss = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const V sum = f(c - dx) + f(c + dx);
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  const V value = kronrod * h;
  const V diff = (kronrod - gauss) * h;
  return GkResult<V>{value, magnitude(diff)};
}

template <class F, class V>
V gk_step(const F& f, double a, double b, const GkResult<V>& whole, double abs_tol,
          double rel_tol, int depth, int max_depth) {
  if (whole.error <= std::max(abs_tol, rel_tol * magnitude(whole.value))) return whole.value;
  if (depth >= max_depth) {
    throw Error(ErrorKind::quadrature_no_convergence,
                "adaptive Gauss-Kronrod exceeded depth " + std::to_string(max_depth));
  }
  const double m = 0.5 * (a + b);
  const auto left = gk15(f, a, m);
  const auto right = gk15(f, m, b);
  return gk_step(f, a, m, left, 0.5 * abs_tol, rel_tol, depth + 1, max_depth) +
         gk_step(f, m, b, right, 0.5 * abs_tol, rel_tol, depth + 1, max_depth);
}

}  // namespace detail

/// Adaptive Simpson with absolute tolerance `tol`.
template <class F>
double simpson(const F& f, double a, double b, double tol, int max_depth = 40) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, 0, max_depth);
}

/// Adaptive Gauss-Kronrod 7-15; stops when the local error estimate is below
/// max(abs_tol, rel_tol * |local value|). `f` may return a double or a
/// fixed-size Eigen vector (max norm is used).
template <class F>
auto gauss_kronrod(const F& f, double a, double b, double abs_tol, double rel_tol,
                     int max_depth = 30) {
  return detail::gk_step(f, a, b, detail::gk15(f, a, b), abs_tol, rel_tol, 0, max_depth);
}

/// Bisection for a sign change of `f` on [lo, hi]; returns the midpoint of the
/// final bracket once it is narrower than `tol`.
template <class F>
double bisect(const F& f, double lo, double hi, double tol) {
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    throw Error(ErrorKind::no_sign_change, "bisection bracket has no sign change");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace ttent::quad
