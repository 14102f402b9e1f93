#pragma once

// Parton luminosity tables and the invariant-mass distribution they induce.
//
// File format:
//   # sqrt_s=<GeV> source=<string>
//   M_GeV,L_qqbar,L_gg          (optional column header)
//   <M>,<L_qqbar>,<L_gg>
// Any other line starting with '#' is a comment. Luminosity units are
// arbitrary but shared by both columns.

#include <functional>
#include <string>
#include <vector>

#include "ttent/kinematics.hpp"

namespace ttent {

enum class ChannelMix { qqbar, gg, mixed };

const char* to_string(ChannelMix mix) noexcept;

struct LumiValues {
  double l_qq;
  double l_gg;
};

/// Zeroes the channels excluded by `mix`.
LumiValues apply_mix(LumiValues v, ChannelMix mix);

class LuminosityTable {
 public:
  LuminosityTable() = default;
  /// Throws NonMonotonicGrid, NegativeLuminosity, or ParseError (< 2 rows).
  LuminosityTable(std::vector<double> m, std::vector<double> l_qq, std::vector<double> l_gg,
                  std::string source = "", double sqrt_s = 0.0);

  /// Throws ParseError (with line number), NonMonotonicGrid, NegativeLuminosity.
  static LuminosityTable parse(const std::string& text);
  static LuminosityTable load(const std::string& path);

  /// Linear interpolation, exact at nodes. Throws OutOfRange.
  LumiValues interpolate(double m) const;

  double m_min() const { return m_.front(); }
  double m_max() const { return m_.back(); }
  std::size_t size() const { return m_.size(); }
  const std::vector<double>& masses() const { return m_; }
  const std::vector<double>& l_qq() const { return l_qq_; }
  const std::vector<double>& l_gg() const { return l_gg_; }
  const std::string& source() const { return source_; }
  double sqrt_s() const { return sqrt_s_; }

 private:
  std::vector<double> m_;
  std::vector<double> l_qq_;
  std::vector<double> l_gg_;
  std::string source_;
  double sqrt_s_ = 0.0;
};

struct ChannelWeights {
  double w_qq;
  double w_gg;
};

/// w_I = L^I A^I / sum_J L^J A^J. Throws ZeroLuminosity.
ChannelWeights channel_weights(double l_qq, double l_gg, double a_qq, double a_gg);
ChannelWeights weights_averaged(const LuminosityTable& table, double m, double a_qq_avg,
                                double a_gg_avg);

/// p(M) = (1 / sigma) dsigma/dM on [m_lo, m_hi], with the angular-averaged
/// partonic rates.
struct MassDensity {
  LuminosityTable table;
  PhysicsConfig cfg;
  ChannelMix mix = ChannelMix::mixed;
  double m_lo = 0.0;
  double m_hi = 0.0;
  double sigma_pb = 0.0;

  /// dsigma/dM in pb/GeV (zero outside the window).
  double dsigma_dm(double m) const;
  double operator()(double m) const { return dsigma_dm(m) / sigma_pb; }
};

/// Window [m_lo, m_hi]; m_lo defaults to 2 m_t. Throws EmptyWindow, OutOfRange.
MassDensity mass_probability_density(const LuminosityTable& table, const PhysicsConfig& cfg,
                                     double m_hi, ChannelMix mix = ChannelMix::mixed,
                                     double m_lo = 0.0, double rel_tol = 1e-10);

}  // namespace ttent
