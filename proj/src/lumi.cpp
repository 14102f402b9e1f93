#include "ttent/lumi.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mass_integral.hpp"
#include "ttent/angular.hpp"
#include "ttent/errors.hpp"
#include "ttent/quadrature.hpp"
#include "ttent/text.hpp"

namespace ttent {

const char* to_string(ChannelMix mix) noexcept {
  switch (mix) {
    case ChannelMix::qqbar: return "qq";
    case ChannelMix::gg: return "gg";
    case ChannelMix::mixed: return "mixed";
  }
  return "mixed";
}

LumiValues apply_mix(LumiValues v, ChannelMix mix) {
  if (mix == ChannelMix::qqbar) v.l_gg = 0.0;
  if (mix == ChannelMix::gg) v.l_qq = 0.0;
  return v;
}

LuminosityTable::LuminosityTable(std::vector<double> m, std::vector<double> l_qq,
                                 std::vector<double> l_gg, std::string source, double sqrt_s)
    : m_(std::move(m)),
      l_qq_(std::move(l_qq)),
      l_gg_(std::move(l_gg)),
      source_(std::move(source)),
      sqrt_s_(sqrt_s) {
  if (m_.size() != l_qq_.size() || m_.size() != l_gg_.size()) {
    throw Error(ErrorKind::parse_error, "luminosity columns differ in length");
  }
  if (m_.size() < 2) throw Error(ErrorKind::parse_error, "luminosity table needs at least 2 rows");
  for (std::size_t i = 0; i < m_.size(); ++i) {
    if (i > 0 && !(m_[i] > m_[i - 1])) {
      throw Error(ErrorKind::non_monotonic_grid,
                  "mass grid not strictly increasing at M = " + text::format_double(m_[i]));
    }
    if (!(l_qq_[i] >= 0.0) || !(l_gg_[i] >= 0.0)) {
      throw Error(ErrorKind::negative_luminosity,
                  "negative luminosity at M = " + text::format_double(m_[i]));
    }
  }
}

LuminosityTable LuminosityTable::parse(const std::string& text_in) {
  std::vector<double> m;
  std::vector<double> qq;
  std::vector<double> gg;
  std::string source;
  double sqrt_s = 0.0;

  std::istringstream in(text_in);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorKind::parse_error, "line " + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = text::trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      // metadata is only read from key=value tokens on comment lines
      std::istringstream tokens(t.substr(1));
      std::string tok;
      while (tokens >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq);
        const std::string value = tok.substr(eq + 1);
        if (key == "sqrt_s" && sqrt_s == 0.0) {
          if (!text::parse_double(value, sqrt_s)) fail("bad sqrt_s '" + value + "'");
        } else if (key == "source" && source.empty()) {
          source = value;
        }
      }
      continue;
    }
    const auto fields = text::split(t, ',');
    if (fields.size() != 3) fail("expected 3 comma-separated fields");
    if (m.empty() && text::trim(fields[0]) == "M_GeV") continue;
    double row[3];
    for (int i = 0; i < 3; ++i) {
      if (!text::parse_double(fields[i], row[i])) fail("bad number '" + text::trim(fields[i]) + "'");
    }
    m.push_back(row[0]);
    qq.push_back(row[1]);
    gg.push_back(row[2]);
  }
  if (m.empty()) throw Error(ErrorKind::parse_error, "no luminosity rows");
  return LuminosityTable(std::move(m), std::move(qq), std::move(gg), std::move(source), sqrt_s);
}

LuminosityTable LuminosityTable::load(const std::string& path) { return parse(text::read_file(path)); }

LumiValues LuminosityTable::interpolate(double m) const {
  if (!(m >= m_.front() && m <= m_.back())) {
    throw Error(ErrorKind::out_of_range, "M = " + text::format_double(m) + " GeV outside table [" +
                                             text::format_double(m_.front()) + ", " +
                                             text::format_double(m_.back()) + "]");
  }
  const auto it = std::upper_bound(m_.begin(), m_.end(), m);
  if (it == m_.end()) return {l_qq_.back(), l_gg_.back()};
  const std::size_t hi = static_cast<std::size_t>(it - m_.begin());
  const std::size_t lo = hi - 1;
  if (m == m_[lo]) return {l_qq_[lo], l_gg_[lo]};
  const double t = (m - m_[lo]) / (m_[hi] - m_[lo]);
  return {l_qq_[lo] + t * (l_qq_[hi] - l_qq_[lo]), l_gg_[lo] + t * (l_gg_[hi] - l_gg_[lo])};
}

ChannelWeights channel_weights(double l_qq, double l_gg, double a_qq, double a_gg) {
  const double x_qq = l_qq * a_qq;
  const double x_gg = l_gg * a_gg;
  const double total = x_qq + x_gg;
  if (!(total > 0.0)) throw Error(ErrorKind::zero_luminosity, "no production in either channel");
  return {x_qq / total, x_gg / total};
}

ChannelWeights weights_averaged(const LuminosityTable& table, double m, double a_qq_avg,
                                double a_gg_avg) {
  const LumiValues l = table.interpolate(m);
  return channel_weights(l.l_qq, l.l_gg, a_qq_avg, a_gg_avg);
}

namespace detail {

MassVec mass_integrand(double m, const LuminosityTable& table, const PhysicsConfig& cfg,
                       ChannelMix mix) {
  const double beta = beta_of_mass(m, cfg);
  const LumiValues l = apply_mix(table.interpolate(m), mix);
  MassVec out = MassVec::Zero();
  auto add = [&](Channel ch, double lumi) {
    if (lumi == 0.0) return;
    const AveragedCoefficients a = averaged_coefficients(ch, beta);
    const HelicityAverages h = averaged_helicity_correlations(ch, beta);
    MassVec v;
    v << a.a_tilde_avg, a.c_perp_tilde, a.c_z_tilde, h.c_kk, h.c_nn, h.c_rr;
    out += lumi * v;
  };
  add(Channel::qqbar, l.l_qq);
  add(Channel::gg, l.l_gg);
  return out * (beta / (m * m));
}

double checked_window(const LuminosityTable& table, const PhysicsConfig& cfg, double m_lo,
                      double m_hi) {
  const double lo = std::max(m_lo, 2.0 * cfg.m_t);
  if (!(m_hi > lo)) {
    throw Error(ErrorKind::empty_window, "window [" + text::format_double(lo) + ", " +
                                             text::format_double(m_hi) + "] GeV is empty");
  }
  if (lo < table.m_min() || m_hi > table.m_max()) {
    throw Error(ErrorKind::out_of_range, "window [" + text::format_double(lo) + ", " +
                                             text::format_double(m_hi) +
                                             "] GeV not covered by the luminosity table");
  }
  return lo;
}

MassVec integrate_mass(const LuminosityTable& table, const PhysicsConfig& cfg, ChannelMix mix,
                       double lo, double hi, double rel_tol) {
  const double threshold = 2.0 * cfg.m_t;
  const auto& nodes = table.masses();
  auto piece = [&](double a, double b) {
    auto f = [&](double u) -> MassVec {
      return 2.0 * u * mass_integrand(threshold + u * u, table, cfg, mix);
    };
    return quad::gauss_kronrod(f, std::sqrt(a - threshold), std::sqrt(b - threshold), 0.0, rel_tol);
  };
  MassVec total = MassVec::Zero();
  double a = lo;
  for (auto it = std::upper_bound(nodes.begin(), nodes.end(), lo); it != nodes.end() && *it < hi; ++it) {
    total += piece(a, *it);
    a = *it;
  }
  total += piece(a, hi);
  return total;
}

double sigma_factor(const PhysicsConfig& cfg) {
  return 4.0 * M_PI * cfg.alpha_s * cfg.alpha_s * kGeV2ToPb;
}

}  // namespace detail

double MassDensity::dsigma_dm(double m) const {
  if (m < m_lo || m > m_hi) return 0.0;
  return detail::sigma_factor(cfg) * detail::mass_integrand(m, table, cfg, mix)[detail::kA];
}

MassDensity mass_probability_density(const LuminosityTable& table, const PhysicsConfig& cfg,
                                     double m_hi, ChannelMix mix, double m_lo, double rel_tol) {
  MassDensity d;
  d.m_lo = detail::checked_window(table, cfg, m_lo, m_hi);
  d.m_hi = m_hi;
  d.table = table;
  d.cfg = cfg;
  d.mix = mix;
  const detail::MassVec integral = detail::integrate_mass(table, cfg, mix, d.m_lo, m_hi, rel_tol);
  d.sigma_pb = detail::sigma_factor(cfg) * integral[detail::kA];
  if (!(d.sigma_pb > 0.0)) throw Error(ErrorKind::zero_luminosity, "vanishing cross-section in window");
  return d;
}

}  // namespace ttent
