#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "oracle.hpp"
#include "ttent/errors.hpp"
#include "ttent/events.hpp"
#include "ttent/tomography.hpp"
#include "ttent/window.hpp"

using namespace ttent;

namespace {

const LuminosityTable& table() {
  static const LuminosityTable t = LuminosityTable::load(TTENT_TEST_TABLE);
  return t;
}

bool same(const DileptonEvent& a, const DileptonEvent& b) {
  return a.m_ttbar == b.m_ttbar && a.cos_theta == b.cos_theta && a.q_plus == b.q_plus && a.q_minus == b.q_minus;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::usage;
}

}  // namespace

TEST_CASE("fixed-state sampling is deterministic and thread independent") {
  const TwoQubitState s = TwoQubitState::singlet();
  const std::size_t n = 3 * kEventChunk + 17;
  const auto a = sample_fixed_state(s, n, 42, 0.0, 0.0, 1);
  const auto b = sample_fixed_state(s, n, 42, 0.0, 0.0, 5);
  const auto c = sample_fixed_state(s, n, 43, 0.0, 0.0, 1);
  REQUIRE(a.size() == n);
  bool all_same = true;
  for (std::size_t i = 0; i < n; ++i) all_same = all_same && same(a[i], b[i]);
  CHECK(all_same);
  CHECK_FALSE(same(a[0], c[0]));
  // a shorter request is a prefix of a longer one
  const auto p = sample_fixed_state(s, 100, 42);
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(same(p[i], a[i]));
  for (const auto& e : a) {
    CHECK(std::abs(e.q_plus.norm() - 1.0) < 1e-12);
    CHECK(std::abs(e.q_minus.norm() - 1.0) < 1e-12);
  }
  CHECK(kind_of([] { sample_fixed_state(TwoQubitState::unpolarized(-1.5 * Mat3::Identity()), 10, 1); }) ==
        ErrorKind::input_not_physical);
}

TEST_CASE("moment estimates reproduce random physical states") {
  oracle::Rng rng(99);
  for (int t = 0; t < 6; ++t) {
    const TwoQubitState s = oracle::random_state(rng, t);
    const TomographyResult r = estimate_moments(sample_fixed_state(s, 200000, 1000 + t));
    for (int i = 0; i < 3; ++i) {
      CHECK(std::abs(r.raw_state.b_plus[i] - s.b_plus[i]) < 5.0 * r.b_plus_err[i]);
      CHECK(std::abs(r.raw_state.b_minus[i] - s.b_minus[i]) < 5.0 * r.b_minus_err[i]);
      for (int j = 0; j < 3; ++j) CHECK(std::abs(r.raw_state.c(i, j) - s.c(i, j)) < 5.0 * r.c_err(i, j));
    }
  }
}

TEST_CASE("isotropic state gives vanishing estimates") {
  const TomographyResult r = estimate_moments(sample_fixed_state(TwoQubitState::maximally_mixed(), 100000, 5));
  CHECK(r.raw_state.b_plus.cwiseAbs().maxCoeff() < 5.0 * r.b_plus_err.maxCoeff());
  CHECK(r.raw_state.c.cwiseAbs().maxCoeff() < 5.0 * r.c_err.maxCoeff());
  // single-lepton standard error for a uniform direction is 3 sqrt(1/3 / n)
  CHECK(r.b_plus_err[2] == doctest::Approx(3.0 * std::sqrt(1.0 / 3.0 / 100000)).epsilon(0.02));
}

TEST_CASE("event files round trip") {
  auto events = sample_fixed_state(TwoQubitState::singlet(), 500, 7, 450.0, 0.25);
  events[3].m_ttbar = 1.0 / 3.0;

  std::stringstream csv;
  write_events_csv(csv, events);
  const auto from_csv = read_events_csv(csv);
  REQUIRE(from_csv.size() == events.size());
  for (std::size_t i = 0; i < events.size(); ++i) CHECK(same(events[i], from_csv[i]));

  std::stringstream bin(std::ios::in | std::ios::out | std::ios::binary);
  write_events_binary(bin, events);
  CHECK(bin.str().size() == 16 + 64 * events.size());
  CHECK(bin.str().substr(0, 8) == "TTEV0001");
  const auto from_bin = read_events_binary(bin);
  REQUIRE(from_bin.size() == events.size());
  for (std::size_t i = 0; i < events.size(); ++i) CHECK(same(events[i], from_bin[i]));

  const auto dir = std::filesystem::temp_directory_path();
  for (const char* name : {"ttent_events_test.csv", "ttent_events_test.bin"}) {
    const std::string path = (dir / name).string();
    save_events(path, events);
    const auto back = load_events(path);
    REQUIRE(back.size() == events.size());
    CHECK(same(back.back(), events.back()));
    std::remove(path.c_str());
  }

  std::istringstream bad_magic("TTEV9999xxxxxxxx");
  CHECK(kind_of([&] { read_events_binary(bad_magic); }) == ErrorKind::parse_error);
  std::string truncated = bin.str().substr(0, 100);
  std::istringstream trunc(truncated);
  CHECK(kind_of([&] { read_events_binary(trunc); }) == ErrorKind::parse_error);
  std::istringstream not_unit(std::string(kEventColumns) + "\n400,0.1,1,1,0,0,0,1\n");
  CHECK(kind_of([&] { read_events_csv(not_unit); }) == ErrorKind::parse_error);
  std::istringstream short_row(std::string(kEventColumns) + "\n400,0.1,1,0\n");
  CHECK(kind_of([&] { read_events_csv(short_row); }) == ErrorKind::parse_error);
  CHECK(kind_of([] { load_events("/nonexistent/events.bin"); }) == ErrorKind::parse_error);
}

TEST_CASE("production sampling follows the mass window") {
  const PhysicsConfig cfg;
  const std::size_t n = 100000;
  const auto ev = sample_events(n, 600.0, table(), cfg, 11);
  REQUIRE(ev.size() == n);
  const auto again = sample_events(2000, 600.0, table(), cfg, 11, ChannelMix::mixed, 0.0, 3);
  for (std::size_t i = 0; i < again.size(); ++i) CHECK(same(again[i], ev[i]));

  double sum_m = 0.0;
  double sum_m2 = 0.0;
  double sum_c = 0.0;
  for (const auto& e : ev) {
    CHECK(e.m_ttbar >= 2.0 * cfg.m_t);
    CHECK(e.m_ttbar <= 600.0);
    CHECK(std::abs(e.cos_theta) <= 1.0);
    sum_m += e.m_ttbar;
    sum_m2 += e.m_ttbar * e.m_ttbar;
    sum_c += e.cos_theta;
  }
  const double mean = sum_m / n;
  const double sd = std::sqrt(sum_m2 / n - mean * mean);

  const MassDensity p = mass_probability_density(table(), cfg, 600.0);
  const double ref_mean = oracle::integrate([&](double u) { return 2.0 * u * (p.m_lo + u * u) * p(p.m_lo + u * u); },
                                            0.0, std::sqrt(600.0 - p.m_lo), 256);
  CHECK(std::abs(mean - ref_mean) < 5.0 * sd / std::sqrt(double(n)));
  CHECK(std::abs(sum_c / n) < 5.0 / std::sqrt(3.0 * n));

  const DEstimate d = estimate_D(ev);
  const WindowState w = integrate_window(600.0, table(), cfg);
  CHECK(std::abs(d.d - w.d()) < 5.0 * d.std_err);

  const auto gg = sample_events(50000, 400.0, table(), cfg, 3, ChannelMix::gg);
  const DEstimate dg = estimate_D(gg);
  CHECK(std::abs(dg.d - integrate_window(400.0, table(), cfg, ChannelMix::gg).d()) < 5.0 * dg.std_err);

  CHECK(kind_of([&] { sample_events(10, 340.0, table(), cfg, 1); }) == ErrorKind::empty_window);
  CHECK(kind_of([&] { sample_events(10, 9000.0, table(), cfg, 1); }) == ErrorKind::out_of_range);
}
