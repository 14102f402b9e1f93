#include "ttent/window.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "json.hpp"
#include "mass_integral.hpp"
#include "ttent/errors.hpp"
#include "ttent/quadrature.hpp"

namespace ttent {

namespace {

WindowState from_integral(const detail::MassVec& v, double lo, double hi, const PhysicsConfig& cfg) {
  WindowState w;
  w.m_lo = lo;
  w.m_hi = hi;
  const double a = v[detail::kA];
  w.sigma_pb = detail::sigma_factor(cfg) * a;
  w.c_perp = v[detail::kPerp] / a;
  w.c_z = v[detail::kZ] / a;
  w.c_kk = v[detail::kKK] / a;
  w.c_nn = v[detail::kNN] / a;
  w.c_rr = v[detail::kRR] / a;
  return w;
}

WindowRow to_row(const WindowState& w) {
  return {w.m_hi, w.c_perp, w.c_z, w.d(), w.delta(), w.c_rr, w.c_nn, w.c_kk, w.concurrence(), w.sigma_pb};
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v == 0.0 ? 0.0 : v);
  return buf;
}

}  // namespace

TwoQubitState WindowState::state() const {
  Mat3 c = Mat3::Zero();
  c(0, 0) = c(1, 1) = c_perp;
  c(2, 2) = c_z;
  return TwoQubitState::unpolarized(c, Basis::beam);
}

double WindowState::concurrence() const { return 0.5 * std::max(delta(), 0.0); }

WindowState integrate_window(double m_max, const LuminosityTable& table, const PhysicsConfig& cfg,
                             ChannelMix mix, double rel_tol, double m_lo) {
  const double lo = detail::checked_window(table, cfg, m_lo, m_max);
  const detail::MassVec v = detail::integrate_mass(table, cfg, mix, lo, m_max, rel_tol);
  if (!(v[detail::kA] > 0.0)) throw Error(ErrorKind::zero_luminosity, "vanishing cross-section in window");
  return from_integral(v, lo, m_max, cfg);
}

WindowSeries window_series(const std::vector<double>& m_grid, const LuminosityTable& table,
                           const PhysicsConfig& cfg, ChannelMix mix, double rel_tol,
                           unsigned threads) {
  WindowSeries series;
  series.table_source = table.source();
  series.m_t = cfg.m_t;
  series.mix = mix;
  series.rows.resize(m_grid.size());

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, m_grid.size())));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < m_grid.size(); i = next++) {
      try {
        series.rows[i] = to_row(integrate_window(m_grid[i], table, cfg, mix, rel_tol));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = m_grid.size();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return series;
}

void write_csv(std::ostream& out, const WindowSeries& series, const std::vector<std::string>& header) {
  for (const auto& line : header) out << "# " << line << '\n';
  out << kWindowColumns << '\n';
  for (const WindowRow& r : series.rows) {
    out << fmt(r.m_max) << ',' << fmt(r.c_perp) << ',' << fmt(r.c_z) << ',' << fmt(r.d) << ','
        << fmt(r.delta) << ',' << fmt(r.c_rr) << ',' << fmt(r.c_nn) << ',' << fmt(r.c_kk) << ','
        << fmt(r.concurrence) << ',' << fmt(r.sigma_window_pb) << '\n';
  }
}

std::string to_json(const WindowSeries& series) {
  nlohmann::json rows = nlohmann::json::array();
  for (const WindowRow& r : series.rows) {
    rows.push_back({{"m_max", r.m_max},
                    {"C_perp", r.c_perp},
                    {"C_z", r.c_z},
                    {"D", r.d},
                    {"delta", r.delta},
                    {"c_rr", r.c_rr},
                    {"c_nn", r.c_nn},
                    {"c_kk", r.c_kk},
                    {"concurrence", r.concurrence},
                    {"sigma_window_pb", r.sigma_window_pb}});
  }
  const nlohmann::json j = {{"schema", "ttent.window/1"},
                            {"table_source", series.table_source},
                            {"m_t", series.m_t},
                            {"channel", to_string(series.mix)},
                            {"rows", std::move(rows)}};
  return j.dump(2) + "\n";
}

double critical_mass_total(const LuminosityTable& table, const PhysicsConfig& cfg, ChannelMix mix,
                           double tol, double rel_tol) {
  const double threshold = 2.0 * cfg.m_t;
  detail::checked_window(table, cfg, threshold, table.m_max());
  auto delta_of = [](const detail::MassVec& v) {
    return delta_axial(v[detail::kPerp] / v[detail::kA], v[detail::kZ] / v[detail::kA]);
  };

  // prefix integrals at the table nodes above threshold
  std::vector<double> edges;
  for (double m : table.masses()) {
    if (m > threshold) edges.push_back(m);
  }
  detail::MassVec running = detail::MassVec::Zero();
  double prev = threshold;
  for (double edge : edges) {
    const detail::MassVec before = running;
    running += detail::integrate_mass(table, cfg, mix, prev, edge, rel_tol);
    if (delta_of(running) <= 0.0) {
      if (prev == threshold) {
        throw Error(ErrorKind::no_sign_change, "integrated state separable already in the first bin");
      }
      const double lo = prev;
      auto f = [&](double m) {
        return delta_of(before + detail::integrate_mass(table, cfg, mix, lo, m, rel_tol));
      };
      return quad::bisect(f, lo, edge, tol);
    }
    prev = edge;
  }
  throw Error(ErrorKind::no_sign_change, "integrated state stays entangled over the whole table");
}

}  // namespace ttent
