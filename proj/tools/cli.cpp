#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "ttent/angular.hpp"
#include "ttent/errors.hpp"
#include "ttent/events.hpp"
#include "ttent/lumi.hpp"
#include "ttent/parton.hpp"
#include "ttent/text.hpp"
#include "ttent/tomography.hpp"
#include "ttent/window.hpp"

#ifndef TTENT_VERSION
#define TTENT_VERSION "dev"
#endif

namespace ttent::cli {

namespace {

struct Options {
  std::string table;
  std::string config;
  std::string out;
  std::uint64_t seed = 1;
  std::string grid_m;
  std::string grid_theta = "90";
  std::string window_max = "450";
  std::string rel_unc = "0.01:0.20:20";
  std::optional<double> d_value;
  std::string channel;
  bool gg_only = false;
  std::size_t events = 100000;
  int level = 15;
  std::string events_in;
  std::string save_events;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Error usage(const std::string& what) { return Error(ErrorKind::usage, what); }

PhysicsConfig load_config(const Options& o) {
  PhysicsConfig cfg = o.config.empty() ? PhysicsConfig{} : PhysicsConfig::load(o.config);
  cfg.validate();
  return cfg;
}

std::string table_path(const Options& o) {
  if (!o.table.empty()) return o.table;
  if (const char* env = std::getenv("TT_ENT_TABLE")) return env;
  throw usage("no luminosity table: pass --table or set TT_ENT_TABLE");
}

ChannelMix channel_mix(const Options& o, ChannelMix fallback) {
  if (o.gg_only) return ChannelMix::gg;
  if (o.channel.empty()) return fallback;
  if (o.channel == "qq") return ChannelMix::qqbar;
  if (o.channel == "gg") return ChannelMix::gg;
  return ChannelMix::mixed;
}

std::vector<double> theta_grid(const std::string& spec) {
  double n_only = 0.0;
  if (spec.find(':') == std::string::npos && text::parse_double(spec, n_only)) {
    // n cell centres of (0, pi): never touches the poles
    const int n = static_cast<int>(n_only);
    if (n < 2 || n != n_only) throw usage("--grid-theta count must be an integer >= 2");
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = M_PI * (i + 0.5) / n;
    return g;
  }
  std::vector<double> g = parse_grid(spec);
  for (double t : g) {
    if (!(t > 0.0 && t < M_PI)) throw usage("--grid-theta must stay inside the open interval (0, pi)");
  }
  return g;
}

// Output sink: the --out file when given, otherwise the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw usage("cannot write '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

// Header comment lines shared by every command.
std::vector<std::string> provenance(const std::string& cmd, const Options& o, const PhysicsConfig& cfg,
                                    const std::string& source, const std::string& settings) {
  std::ostringstream canon;
  canon << cmd << '|' << settings << "|m_t=" << fmt(cfg.m_t) << "|alpha_s=" << fmt(cfg.alpha_s)
        << "|sqrt_s=" << fmt(cfg.sqrt_s) << "|table=" << source << "|seed=" << o.seed;
  return {"ttent " + cmd + " v1",
          std::string("version=") + TTENT_VERSION + " seed=" + std::to_string(o.seed) +
              " table=" + (source.empty() ? "none" : source) + " m_t=" + fmt(cfg.m_t) +
              " alpha_s=" + fmt(cfg.alpha_s) + " sqrt_s=" + fmt(cfg.sqrt_s),
          settings + " config_hash=" + hex64(fnv1a(canon.str()))};
}

void write_header(std::ostream& out, const std::vector<std::string>& lines) {
  for (const auto& l : lines) out << "# " << l << '\n';
}

nlohmann::json provenance_json(const std::vector<std::string>& lines) {
  return nlohmann::json(lines);
}

bool wants_json(const std::string& path) {
  return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}

int cmd_map(const Options& o, std::ostream& fallback) {
  const PhysicsConfig cfg = load_config(o);
  const LuminosityTable table = LuminosityTable::load(table_path(o));
  const std::vector<double> masses = parse_grid(o.grid_m.empty() ? "350:1500:116" : o.grid_m);
  const std::vector<double> thetas = theta_grid(o.grid_theta);
  std::vector<double> betas;
  for (double m : masses) {
    betas.push_back(beta_of_mass(m, cfg));
    table.interpolate(m);
    if (betas.back() >= 0.999) throw Error(ErrorKind::out_of_range, "map masses must keep beta below 0.999");
  }
  std::vector<ChannelMix> mixes = {ChannelMix::qqbar, ChannelMix::gg, ChannelMix::mixed};
  if (o.gg_only || !o.channel.empty()) mixes = {channel_mix(o, ChannelMix::mixed)};

  std::string channels;
  for (ChannelMix m : mixes) channels += std::string(channels.empty() ? "" : ",") + to_string(m);
  const std::string settings = "grid_m=" + (o.grid_m.empty() ? "350:1500:116" : o.grid_m) +
                               " grid_theta=" + o.grid_theta + " channels=" + channels;
  Sink sink(o.out, fallback);
  std::ostream& out = *sink;
  write_header(out, provenance("map", o, cfg, table.source(), settings));
  out << "M,theta,beta,channel,concurrence,delta,dsigma_dM_dtheta_pb\n";
  for (std::size_t im = 0; im < masses.size(); ++im) {
    const double m = masses[im];
    const double beta = betas[im];
    const LumiValues l = table.interpolate(m);
    for (double theta : thetas) {
      const double c = std::cos(theta);
      const PhasePoint pp{m, c, beta};
      // integrate the azimuth: dOmega = 2 pi sin(theta) dtheta
      const double jac = 2.0 * M_PI * std::sin(theta);
      for (ChannelMix mix : mixes) {
        double conc = 0.0;
        double delta = 0.0;
        double a = 0.0;
        if (mix == ChannelMix::mixed) {
          const MixedPoint mp = mix_point(beta, c, l.l_qq, l.l_gg);
          delta = delta_from_correlations(mp.state.c);
          conc = concurrence_wootters(mp.state);
          a = l.l_qq * coefficients(Channel::qqbar, beta, c).a_tilde +
              l.l_gg * coefficients(Channel::gg, beta, c).a_tilde;
        } else {
          const Channel ch = mix == ChannelMix::gg ? Channel::gg : Channel::qqbar;
          delta = delta_point(ch, beta, c);
          conc = concurrence_point(ch, beta, c);
          a = (ch == Channel::gg ? l.l_gg : l.l_qq) * coefficients(ch, beta, c).a_tilde;
        }
        out << fmt(m) << ',' << fmt(theta) << ',' << fmt(beta) << ',' << to_string(mix) << ','
            << fmt(conc) << ',' << fmt(delta) << ',' << fmt(differential_cross_section(a, pp, cfg) * jac)
            << '\n';
      }
    }
  }
  return 0;
}

int cmd_avg(const Options& o, std::ostream& fallback) {
  const PhysicsConfig cfg = load_config(o);
  const std::string grid = o.grid_m.empty() ? "350:1500:116" : o.grid_m;
  const std::vector<double> masses = parse_grid(grid);
  std::optional<LuminosityTable> table;
  if (!o.table.empty() || std::getenv("TT_ENT_TABLE")) table = LuminosityTable::load(table_path(o));

  const double beta_c = critical_beta_gg();
  const std::string settings = "grid_m=" + grid;
  Sink sink(o.out, fallback);
  std::ostream& out = *sink;
  write_header(out, provenance("avg", o, cfg, table ? table->source() : "", settings));
  out << "# beta_c=" << fmt(beta_c) << " M_c=" << fmt(mass_of_beta(beta_c, cfg))
      << " beta_delta=" << fmt(beta_delta_crossover()) << '\n';
  out << "M,beta,channel,a_tilde_avg,C_perp,C_z,c_rr,c_nn,c_kk,D,delta,concurrence\n";
  for (double m : masses) {
    const double beta = beta_of_mass(m, cfg);
    double sum_a = 0.0;
    double sum_perp = 0.0;
    double sum_z = 0.0;
    double sum_rr = 0.0;
    double sum_nn = 0.0;
    double sum_kk = 0.0;
    const LumiValues l = table ? table->interpolate(m) : LumiValues{0.0, 0.0};
    for (Channel ch : {Channel::qqbar, Channel::gg}) {
      const AveragedCoefficients a = averaged_coefficients(ch, beta);
      const HelicityAverages h = averaged_helicity_correlations(ch, beta);
      const double cp = a.c_perp();
      const double cz = a.c_z();
      const double delta = delta_axial(cp, cz);
      out << fmt(m) << ',' << fmt(beta) << ',' << (ch == Channel::gg ? "gg" : "qq") << ','
          << fmt(a.a_tilde_avg) << ',' << fmt(cp) << ',' << fmt(cz) << ',' << fmt(h.c_rr / a.a_tilde_avg)
          << ',' << fmt(h.c_nn / a.a_tilde_avg) << ',' << fmt(h.c_kk / a.a_tilde_avg) << ','
          << fmt((2.0 * cp + cz) / 3.0) << ',' << fmt(delta) << ',' << fmt(0.5 * std::max(delta, 0.0))
          << '\n';
      const double lumi = ch == Channel::gg ? l.l_gg : l.l_qq;
      sum_a += lumi * a.a_tilde_avg;
      sum_perp += lumi * a.c_perp_tilde;
      sum_z += lumi * a.c_z_tilde;
      sum_rr += lumi * h.c_rr;
      sum_nn += lumi * h.c_nn;
      sum_kk += lumi * h.c_kk;
    }
    if (table) {
      if (!(sum_a > 0.0)) throw Error(ErrorKind::zero_luminosity, "no production at M = " + fmt(m));
      const double cp = sum_perp / sum_a;
      const double cz = sum_z / sum_a;
      const double delta = delta_axial(cp, cz);
      out << fmt(m) << ',' << fmt(beta) << ",mixed," << fmt(sum_a) << ',' << fmt(cp) << ',' << fmt(cz)
          << ',' << fmt(sum_rr / sum_a) << ',' << fmt(sum_nn / sum_a) << ',' << fmt(sum_kk / sum_a)
          << ',' << fmt((2.0 * cp + cz) / 3.0) << ',' << fmt(delta) << ','
          << fmt(0.5 * std::max(delta, 0.0)) << '\n';
    }
  }
  return 0;
}

int cmd_window(const Options& o, std::ostream& fallback) {
  const PhysicsConfig cfg = load_config(o);
  const LuminosityTable table = LuminosityTable::load(table_path(o));
  const ChannelMix mix = channel_mix(o, ChannelMix::mixed);
  const std::string grid = o.grid_m.empty() ? "350:1500:116" : o.grid_m;
  const WindowSeries series = window_series(parse_grid(grid), table, cfg, mix);

  std::string critical = "none";
  try {
    critical = fmt(critical_mass_total(table, cfg, mix));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::no_sign_change) throw;
  }
  std::vector<std::string> header =
      provenance("window", o, cfg, table.source(), "grid_m=" + grid + " channel=" + to_string(mix));
  header.push_back("critical_mass_total=" + critical);

  Sink sink(o.out, fallback);
  if (wants_json(o.out)) {
    nlohmann::json j = nlohmann::json::parse(to_json(series));
    j["provenance"] = provenance_json(header);
    *sink << j.dump(2) << '\n';
  } else {
    write_csv(*sink, series, header);
  }
  return 0;
}

int cmd_tomo(const Options& o, std::ostream& fallback) {
  const PhysicsConfig cfg = load_config(o);
  const AssumptionLevel level = assumption_level_from_int(o.level);
  const ChannelMix mix = channel_mix(o, ChannelMix::mixed);
  std::vector<DileptonEvent> events;
  std::string source;
  std::string settings;
  if (!o.events_in.empty()) {
    events = load_events(o.events_in);
    settings = "events_in=" + std::to_string(events.size()) + " level=" + std::to_string(o.level);
  } else {
    const LuminosityTable table = LuminosityTable::load(table_path(o));
    source = table.source();
    double m_max = 0.0;
    if (!text::parse_double(o.window_max, m_max)) throw usage("--window-max must be a number");
    events = sample_events(o.events, m_max, table, cfg, o.seed, mix);
    settings = "events=" + std::to_string(o.events) + " window_max=" + fmt(m_max) +
               " channel=" + to_string(mix) + " level=" + std::to_string(o.level);
  }
  if (!o.save_events.empty()) save_events(o.save_events, events);
  const TomographyResult result = tomography_report(events, level);
  const DEstimate d = estimate_D(events);

  nlohmann::json j = nlohmann::json::parse(to_json(result));
  j["D_hat"] = {{"value", d.d}, {"error", d.std_err}};
  j["provenance"] = provenance_json(provenance("tomo", o, cfg, source, settings));
  Sink sink(o.out, fallback);
  *sink << j.dump(2) << '\n';
  return 0;
}

int cmd_significance(const Options& o, std::ostream& fallback) {
  const PhysicsConfig cfg = load_config(o);
  const std::vector<double> rel = parse_grid(o.rel_unc);
  Sink sink(o.out, fallback);
  std::ostream& out = *sink;
  if (o.d_value) {
    write_header(out, provenance("significance", o, cfg, "", "d=" + fmt(*o.d_value) + " rel_unc=" + o.rel_unc));
    out << "D,rel_unc,n_sigma,witness\n";
    for (double u : rel) {
      const Significance s = significance(*o.d_value, u);
      out << fmt(*o.d_value) << ',' << fmt(u) << ',' << fmt(s.n_sigma) << ',' << fmt(s.witness) << '\n';
    }
    return 0;
  }
  const LuminosityTable table = LuminosityTable::load(table_path(o));
  const ChannelMix mix = channel_mix(o, ChannelMix::mixed);
  const std::string grid = o.grid_m.empty() ? "360:800:45" : o.grid_m;
  const WindowSeries series = window_series(parse_grid(grid), table, cfg, mix);
  write_header(out, provenance("significance", o, cfg, table.source(),
                               "grid_m=" + grid + " rel_unc=" + o.rel_unc + " channel=" + to_string(mix)));
  out << "m_max,D,rel_unc,n_sigma,witness\n";
  for (const WindowRow& row : series.rows) {
    for (double u : rel) {
      const Significance s = significance(row.d, u);
      out << fmt(row.m_max) << ',' << fmt(row.d) << ',' << fmt(u) << ',' << fmt(s.n_sigma) << ','
          << fmt(s.witness) << '\n';
    }
  }
  return 0;
}

}  // namespace

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<double> parse_grid(const std::string& spec) {
  const auto parts = text::split(spec, ':');
  if (parts.size() == 1) {
    double v = 0.0;
    if (!text::parse_double(parts[0], v)) throw usage("bad grid value '" + spec + "'");
    return {v};
  }
  double lo = 0.0;
  double hi = 0.0;
  double count = 0.0;
  if (parts.size() != 3 || !text::parse_double(parts[0], lo) || !text::parse_double(parts[1], hi) ||
      !text::parse_double(parts[2], count)) {
    throw usage("grid must be 'lo:hi:n' or a single number, got '" + spec + "'");
  }
  const auto n = static_cast<long>(count);
  if (n < 2 || static_cast<double>(n) != count || !(hi > lo)) {
    throw usage("grid '" + spec + "' needs lo < hi and an integer count >= 2");
  }
  std::vector<double> g(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  g.back() = hi;
  return g;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spin entanglement of top-antitop pairs at leading order", "ttent"};
  app.set_version_flag("--version", TTENT_VERSION);
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool needs_table) {
    sub->add_option("--table", o.table,
                    needs_table ? "Luminosity table CSV (default: $TT_ENT_TABLE)"
                                : "Luminosity table CSV for the mixed rows (default: $TT_ENT_TABLE)");
    sub->add_option("--config", o.config, "Physics config file (m_t, alpha_s, sqrt_s)");
    sub->add_option("--out", o.out, "Output path (default: stdout)");
    sub->add_option("--seed", o.seed, "Random seed");
  };
  auto add_channel = [&](CLI::App* sub) {
    sub->add_option("--channel", o.channel, "Production channel")->check(CLI::IsMember({"qq", "gg", "mixed"}));
    sub->add_flag("--gg-only", o.gg_only, "Gluon fusion only (same as --channel gg)");
  };

  CLI::App* map = app.add_subcommand("map", "Pointwise entanglement over (M, theta)");
  add_common(map, true);
  add_channel(map);
  map->add_option("--grid-m", o.grid_m, "Mass grid lo:hi:n in GeV");
  map->add_option("--grid-theta", o.grid_theta, "Angle grid lo:hi:n in rad inside (0, pi), or a cell count");

  CLI::App* avg = app.add_subcommand("avg", "Angular-averaged coefficients versus M");
  add_common(avg, false);
  avg->add_option("--grid-m", o.grid_m, "Mass grid lo:hi:n in GeV");

  CLI::App* window = app.add_subcommand("window", "Mass-window integrated state versus M_max");
  add_common(window, true);
  add_channel(window);
  window->add_option("--grid-m", o.grid_m, "Grid of window upper edges lo:hi:n in GeV");

  CLI::App* tomo = app.add_subcommand("tomo", "Pseudo-experiment and tomography");
  add_common(tomo, true);
  add_channel(tomo);
  tomo->add_option("--events", o.events, "Number of events")->check(CLI::PositiveNumber);
  tomo->add_option("--window-max", o.window_max, "Upper edge of the mass window in GeV");
  tomo->add_option("--level", o.level, "Assumption level")->check(CLI::IsMember({2, 4, 15}));
  tomo->add_option("--events-in", o.events_in, "Read events (.csv or binary) instead of sampling");
  tomo->add_option("--save-events", o.save_events, "Write the events (.csv or binary)");

  CLI::App* sig = app.add_subcommand("significance", "Detection significance of the D witness");
  add_common(sig, true);
  add_channel(sig);
  sig->add_option("--grid-m", o.grid_m, "Grid of window upper edges lo:hi:n in GeV");
  sig->add_option("--rel-unc", o.rel_unc, "Relative uncertainty |dD/D|: lo:hi:n or a value");
  sig->add_option("--d", o.d_value, "Evaluate a given D instead of scanning windows");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (map->parsed()) return cmd_map(o, out);
    if (avg->parsed()) return cmd_avg(o, out);
    if (window->parsed()) return cmd_window(o, out);
    if (tomo->parsed()) return cmd_tomo(o, out);
    return cmd_significance(o, out);
  } catch (const Error& e) {
    err << "ttent: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "ttent: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace ttent::cli
