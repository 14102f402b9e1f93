#include <doctest.h>

#include "oracle.hpp"
#include "ttent/angular.hpp"
#include "ttent/errors.hpp"
#include "ttent/lumi.hpp"

using namespace ttent;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::usage;
}

LuminosityTable scaled(const LuminosityTable& t, double lq, double lg) {
  std::vector<double> q = t.l_qq();
  std::vector<double> g = t.l_gg();
  for (double& v : q) v *= lq;
  for (double& v : g) v *= lg;
  return LuminosityTable(t.masses(), q, g, t.source(), t.sqrt_s());
}

}  // namespace

TEST_CASE("table parsing") {
  const LuminosityTable t = LuminosityTable::parse(
      "# sqrt_s=13000 source=unit\n# another comment\nM_GeV,L_qqbar,L_gg\n340,1,10\n 400 , 2 , 20 \n\n500,0,5\n");
  CHECK(t.size() == 3);
  CHECK(t.source() == "unit");
  CHECK(t.sqrt_s() == 13000.0);
  CHECK(t.m_min() == 340.0);
  CHECK(t.m_max() == 500.0);

  CHECK(kind_of([] { LuminosityTable::parse("340,1,1\n400,x,1\n"); }) == ErrorKind::parse_error);
  CHECK(kind_of([] { LuminosityTable::parse("340,1,1\n400,1\n"); }) == ErrorKind::parse_error);
  CHECK(kind_of([] { LuminosityTable::parse("340,1,1\n"); }) == ErrorKind::parse_error);
  CHECK(kind_of([] { LuminosityTable::parse("340,1,1\n340,1,1\n"); }) == ErrorKind::non_monotonic_grid);
  CHECK(kind_of([] { LuminosityTable::parse("400,1,1\n340,1,1\n"); }) == ErrorKind::non_monotonic_grid);
  CHECK(kind_of([] { LuminosityTable::parse("340,1,1\n400,1,-1\n"); }) == ErrorKind::negative_luminosity);
  CHECK(kind_of([] { LuminosityTable::load("/nonexistent/table.csv"); }) == ErrorKind::parse_error);
  try {
    LuminosityTable::parse("# c\n340,1,1\n400,bad,1\n");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("interpolation") {
  const LuminosityTable t({340, 400, 500}, {1, 2, 0}, {10, 20, 5});
  CHECK(t.interpolate(340).l_qq == 1.0);
  CHECK(t.interpolate(400).l_gg == 20.0);
  CHECK(t.interpolate(500).l_gg == 5.0);
  CHECK(t.interpolate(370).l_qq == doctest::Approx(1.5));
  CHECK(t.interpolate(450).l_gg == doctest::Approx(12.5));
  CHECK(kind_of([&] { t.interpolate(339.9); }) == ErrorKind::out_of_range);
  CHECK(kind_of([&] { t.interpolate(500.1); }) == ErrorKind::out_of_range);

  const LumiValues v{3.0, 4.0};
  CHECK(apply_mix(v, ChannelMix::qqbar).l_gg == 0.0);
  CHECK(apply_mix(v, ChannelMix::gg).l_qq == 0.0);
  CHECK(apply_mix(v, ChannelMix::mixed).l_qq == 3.0);
  CHECK(std::string(to_string(ChannelMix::qqbar)) == "qq");
  CHECK(std::string(to_string(ChannelMix::mixed)) == "mixed");
}

TEST_CASE("channel weights") {
  const ChannelWeights w = channel_weights(1.0, 3.0, 2.0, 1.0);
  CHECK(w.w_qq == doctest::Approx(0.4));
  CHECK(w.w_gg == doctest::Approx(0.6));
  CHECK(kind_of([] { channel_weights(0.0, 0.0, 1.0, 1.0); }) == ErrorKind::zero_luminosity);

  const LuminosityTable t = LuminosityTable::load(TTENT_TEST_TABLE);
  const PhysicsConfig cfg;
  const double m = 450.0;
  const double b = beta_of_mass(m, cfg);
  const double aq = averaged_coefficients(Channel::qqbar, b).a_tilde_avg;
  const double ag = averaged_coefficients(Channel::gg, b).a_tilde_avg;
  const ChannelWeights wa = weights_averaged(t, m, aq, ag);
  const LumiValues l = t.interpolate(m);
  CHECK(wa.w_qq == doctest::Approx(l.l_qq * aq / (l.l_qq * aq + l.l_gg * ag)));
  CHECK(wa.w_gg > 0.8);
}

TEST_CASE("mass density normalization and shape") {
  const LuminosityTable t = LuminosityTable::load(TTENT_TEST_TABLE);
  const PhysicsConfig cfg;
  CHECK(t.sqrt_s() == 13000.0);
  CHECK(t.m_min() <= 2.0 * cfg.m_t);

  for (double hi : {400.0, 450.0, 1000.0, 3000.0}) {
    const MassDensity p = mass_probability_density(t, cfg, hi);
    CHECK(p.m_lo == 2.0 * cfg.m_t);
    CHECK(p(2.0 * cfg.m_t) == 0.0);
    CHECK(p(hi + 1.0) == 0.0);
    // integrate in u = sqrt(M - 2 m_t) to absorb the threshold root, split at table nodes
    double total = 0.0;
    double a = p.m_lo;
    for (double node : t.masses()) {
      if (node <= a) continue;
      const double b = std::min(node, hi);
      total += oracle::integrate(
          [&](double u) { return 2.0 * u * p(p.m_lo + u * u); }, std::sqrt(a - p.m_lo), std::sqrt(b - p.m_lo), 4);
      a = b;
      if (a >= hi) break;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }

  double prev = 0.0;
  for (double hi = 360.0; hi < 2000.0; hi += 80.0) {
    const double s = mass_probability_density(t, cfg, hi).sigma_pb;
    CHECK(s > prev);
    prev = s;
  }
  const double full = mass_probability_density(t, cfg, t.m_max()).sigma_pb;
  CHECK(full > 400.0);
  CHECK(full < 800.0);

  CHECK(kind_of([&] { mass_probability_density(t, cfg, 340.0); }) == ErrorKind::empty_window);
  CHECK(kind_of([&] { mass_probability_density(t, cfg, 7000.0); }) == ErrorKind::out_of_range);
  CHECK(kind_of([&] { mass_probability_density(t, cfg, 500.0, ChannelMix::mixed, 600.0); }) ==
        ErrorKind::empty_window);
}

TEST_CASE("density is invariant under overall luminosity scale") {
  const LuminosityTable t = LuminosityTable::load(TTENT_TEST_TABLE);
  const PhysicsConfig cfg;
  const MassDensity p = mass_probability_density(t, cfg, 800.0);
  const MassDensity p7 = mass_probability_density(scaled(t, 7.0, 7.0), cfg, 800.0);
  CHECK(p7.sigma_pb == doctest::Approx(7.0 * p.sigma_pb).epsilon(1e-12));
  for (double m : {350.0, 420.0, 600.0, 790.0}) CHECK(p7(m) == doctest::Approx(p(m)).epsilon(1e-12));

  const MassDensity q = mass_probability_density(t, cfg, 800.0, ChannelMix::qqbar);
  const MassDensity g = mass_probability_density(t, cfg, 800.0, ChannelMix::gg);
  CHECK(q.sigma_pb + g.sigma_pb == doctest::Approx(p.sigma_pb).epsilon(1e-9));
  CHECK(mass_probability_density(scaled(t, 0.0, 1.0), cfg, 800.0).sigma_pb ==
        doctest::Approx(g.sigma_pb).epsilon(1e-12));
}
