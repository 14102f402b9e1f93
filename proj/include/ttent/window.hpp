#pragma once

// Spin state integrated over an invariant-mass window [2 m_t, M_max]:
// rho = integral of p(M) rho_Omega(M) dM, with p the normalized mass density.

#include <iosfwd>
#include <string>
#include <vector>

#include "ttent/bloch.hpp"
#include "ttent/lumi.hpp"

namespace ttent {

struct WindowState {
  double m_lo = 0.0;
  double m_hi = 0.0;
  double sigma_pb = 0.0;
  // normalized beam-basis (axial) and helicity-basis correlations
  double c_perp = 0.0;
  double c_z = 0.0;
  double c_kk = 0.0;
  double c_nn = 0.0;
  double c_rr = 0.0;

  TwoQubitState state() const;
  double d() const { return (2.0 * c_perp + c_z) / 3.0; }
  double delta() const { return delta_axial(c_perp, c_z); }
  /// Exact for the unpolarized axial family: max(delta, 0) / 2.
  double concurrence() const;
};

/// Integrates over [max(m_lo, 2 m_t), m_max] to relative tolerance `rel_tol`.
/// Throws EmptyWindow, OutOfRange.
WindowState integrate_window(double m_max, const LuminosityTable& table, const PhysicsConfig& cfg,
                             ChannelMix mix = ChannelMix::mixed, double rel_tol = 1e-7,
                             double m_lo = 0.0);

inline TwoQubitState integrate_state(double m_max, const LuminosityTable& table,
                                     const PhysicsConfig& cfg, ChannelMix mix = ChannelMix::mixed,
                                     double rel_tol = 1e-7) {
  return integrate_window(m_max, table, cfg, mix, rel_tol).state();
}

struct WindowRow {
  double m_max;
  double c_perp;
  double c_z;
  double d;
  double delta;
  double c_rr;
  double c_nn;
  double c_kk;
  double concurrence;
  double sigma_window_pb;
};

struct WindowSeries {
  std::vector<WindowRow> rows;
  std::string table_source;
  double m_t = 0.0;
  ChannelMix mix = ChannelMix::mixed;
};

/// One row per grid point, in grid order. `threads` = 0 picks the hardware
/// concurrency; the output does not depend on it.
WindowSeries window_series(const std::vector<double>& m_grid, const LuminosityTable& table,
                           const PhysicsConfig& cfg, ChannelMix mix = ChannelMix::mixed,
                           double rel_tol = 1e-7, unsigned threads = 0);

inline constexpr const char* kWindowColumns =
    "m_max,C_perp,C_z,D,delta,c_rr,c_nn,c_kk,concurrence,sigma_window_pb";

/// Writes `header` lines prefixed with "# ", the column line, then the rows.
void write_csv(std::ostream& out, const WindowSeries& series,
               const std::vector<std::string>& header = {});
/// JSON document with schema "ttent.window/1".
std::string to_json(const WindowSeries& series);

/// Upper window edge where delta of the integrated state crosses zero,
/// bisected to `tol` GeV. Throws NoSignChange.
double critical_mass_total(const LuminosityTable& table, const PhysicsConfig& cfg,
                           ChannelMix mix = ChannelMix::mixed, double tol = 0.1,
                           double rel_tol = 1e-9);

}  // namespace ttent
