#include <doctest.h>

#include "oracle.hpp"
#include "ttent/errors.hpp"
#include "ttent/kinematics.hpp"
#include "ttent/parton.hpp"

using namespace ttent;

namespace {

oracle::Lo lo(Channel ch, double b, double c) { return ch == Channel::qqbar ? oracle::lo_qq(b, c) : oracle::lo_gg(b, c); }

double oracle_delta(Channel ch, double b, double c) {
  const oracle::Lo l = lo(ch, b, c);
  return -l.nn / l.a + std::abs(l.kk + l.rr) / l.a - 1.0;
}

}  // namespace

TEST_CASE("production coefficients match the reference expressions") {
  for (Channel ch : {Channel::qqbar, Channel::gg}) {
    for (int i = 0; i < 40; ++i) {
      const double b = 0.999 * i / 39.0;
      for (int j = 0; j < 41; ++j) {
        const double c = -1.0 + 2.0 * j / 40.0;
        const ProductionCoefficients pc = coefficients(ch, b, c);
        const oracle::Lo ref = lo(ch, b, c);
        const double scale = std::abs(ref.a) + 1e-300;
        CHECK(std::abs(pc.a_tilde - ref.a) <= 1e-13 * scale);
        CHECK(std::abs(pc.c_tilde(hel::k, hel::k) - ref.kk) <= 1e-13 * scale);
        CHECK(std::abs(pc.c_tilde(hel::r, hel::r) - ref.rr) <= 1e-13 * scale);
        CHECK(std::abs(pc.c_tilde(hel::n, hel::n) - ref.nn) <= 1e-13 * scale);
        CHECK(std::abs(pc.c_tilde(hel::k, hel::r) - ref.kr) <= 1e-13 * scale);
        CHECK(pc.c_tilde(hel::r, hel::k) == pc.c_tilde(hel::k, hel::r));
        CHECK(pc.c_tilde(hel::k, hel::n) == 0.0);
        CHECK(pc.c_tilde(hel::r, hel::n) == 0.0);
        CHECK(pc.b_plus.norm() == 0.0);
        CHECK(pc.b_minus.norm() == 0.0);
      }
    }
  }
  CHECK_THROWS_AS(coefficients(Channel::gg, 1.0, 0.0), Error);
  CHECK_THROWS_AS(coefficients(Channel::qqbar, -0.1, 0.0), Error);
  CHECK(std::string(to_string(Channel::qqbar)) == "qqbar");
  CHECK(std::string(to_string(Channel::gg)) == "gg");
}

TEST_CASE("gg at beta = 0.9, central angle") {
  // f(1, 1 + 2b^2 - 2b^4) etc. with b^2 = 0.81, b^4 = 0.6561, sin = 1
  const double a = 1.0 + 1.62 - 1.3122;
  const TwoQubitState s = coefficients(Channel::gg, 0.9, 0.0).normalized();
  CHECK(s.c(hel::k, hel::k) == doctest::Approx(0.3122 / a).epsilon(1e-12));
  CHECK(s.c(hel::r, hel::r) == doctest::Approx(0.9278 / a).epsilon(1e-12));
  CHECK(s.c(hel::n, hel::n) == doctest::Approx(-0.6922 / a).epsilon(1e-12));
  CHECK(s.c(hel::k, hel::r) == 0.0);
  CHECK(delta_point(Channel::gg, 0.9, 0.0) == doctest::Approx((0.6922 + 1.24 - a) / a).epsilon(1e-12));
}

TEST_CASE("pointwise Delta closed forms") {
  for (int i = 0; i < 50; ++i) {
    const double b = 0.99 * i / 49.0;
    for (int j = 0; j < 50; ++j) {
      const double c = -0.98 + 1.96 * j / 49.0;
      const double s2 = 1.0 - c * c;
      const double qq = delta_point(Channel::qqbar, b, c);
      CHECK(qq == doctest::Approx(2.0 * b * b * s2 / (2.0 - b * b * s2)).epsilon(1e-12));
      CHECK(qq == doctest::Approx(oracle_delta(Channel::qqbar, b, c)).epsilon(1e-12));
      CHECK(delta_point(Channel::gg, b, c) == doctest::Approx(oracle_delta(Channel::gg, b, c)).epsilon(1e-12));
      for (Channel ch : {Channel::qqbar, Channel::gg}) {
        const TwoQubitState st = coefficients(ch, b, c).normalized();
        CHECK(delta_from_correlations(st.c) == doctest::Approx(delta_point(ch, b, c)).epsilon(1e-12));
        CHECK(concurrence_point(ch, b, c) == doctest::Approx(0.5 * std::max(delta_point(ch, b, c), 0.0)));
        if (std::abs(delta_point(ch, b, c)) > 1e-9) {
          CHECK((delta_point(ch, b, c) > 0.0) == is_entangled_ppt(st));
        }
      }
    }
  }
}

TEST_CASE("normalized states are physical on a dense grid") {
  for (Channel ch : {Channel::qqbar, Channel::gg}) {
    for (int i = 0; i <= 60; ++i) {
      const double b = 0.9999 * i / 60.0;
      for (int j = 0; j <= 60; ++j) {
        const double c = -1.0 + 2.0 * j / 60.0;
        CHECK(oracle::min_eig(coefficients(ch, b, c).normalized()) >= -1e-12);
      }
    }
  }
}

TEST_CASE("mirror symmetry in cos theta") {
  for (Channel ch : {Channel::qqbar, Channel::gg}) {
    for (double b : {0.1, 0.5, 0.8, 0.95}) {
      for (double c : {0.1, 0.4, 0.77}) {
        const ProductionCoefficients p = coefficients(ch, b, c);
        const ProductionCoefficients m = coefficients(ch, b, -c);
        CHECK(p.a_tilde == doctest::Approx(m.a_tilde));
        CHECK(p.c_tilde(hel::n, hel::n) == doctest::Approx(m.c_tilde(hel::n, hel::n)));
        CHECK(p.c_tilde(hel::k, hel::r) == doctest::Approx(-m.c_tilde(hel::k, hel::r)));
        CHECK(delta_point(ch, b, c) == doctest::Approx(delta_point(ch, b, -c)));
      }
    }
  }
}

TEST_CASE("separable gg band at central angle") {
  const CriticalBetas cb = critical_betas(M_PI / 2);
  CHECK(cb.beta_c1 == doctest::Approx(0.54120).epsilon(1e-4));
  CHECK(cb.beta_c2 == doctest::Approx(0.84090).epsilon(1e-4));
  CHECK(std::abs(oracle_delta(Channel::gg, cb.beta_c1, 0.0)) < 1e-9);
  CHECK(std::abs(oracle_delta(Channel::gg, cb.beta_c2, 0.0)) < 1e-9);
  for (int i = 1; i < 100; ++i) {
    const double b = 0.99 * i / 100.0;
    if (std::abs(b - cb.beta_c1) < 1e-6 || std::abs(b - cb.beta_c2) < 1e-6) continue;
    const bool inside = b > cb.beta_c1 && b < cb.beta_c2;
    CHECK((delta_point(Channel::gg, b, 0.0) <= 0.0) == inside);
  }
  for (double theta : {0.6, 1.0, 1.3, 2.0}) {
    const CriticalBetas t = critical_betas(theta);
    CHECK(t.beta_c1 < t.beta_c2);
    CHECK(std::abs(oracle_delta(Channel::gg, t.beta_c1, std::cos(theta))) < 1e-9);
    CHECK(std::abs(oracle_delta(Channel::gg, t.beta_c2, std::cos(theta))) < 1e-9);
  }
}

TEST_CASE("limiting states") {
  const TwoQubitState singlet = limiting_state(LimitingState::gg_singlet);
  CHECK((singlet.c + Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-15);
  for (double c : {-0.7, 0.0, 0.4}) {
    CHECK((coefficients(Channel::gg, 0.0, c).normalized().c - singlet.c).cwiseAbs().maxCoeff() < 1e-14);
  }

  const TwoQubitState triplet = limiting_state(LimitingState::gg_triplet);
  CHECK(triplet.c(hel::k, hel::k) == 1.0);
  CHECK(triplet.c(hel::r, hel::r) == 1.0);
  CHECK(triplet.c(hel::n, hel::n) == -1.0);
  CHECK((coefficients(Channel::gg, 0.99999, 0.0).normalized().c - triplet.c).cwiseAbs().maxCoeff() < 5e-4);

  const TwoQubitState qq = limiting_state(LimitingState::qq_threshold);
  Mat3 beam = Mat3::Zero();
  beam(2, 2) = 1.0;
  CHECK((qq.c - beam).cwiseAbs().maxCoeff() < 1e-15);
  for (double c : {-0.5, 0.0, 0.3, 0.9}) {
    const Mat3 hel = coefficients(Channel::qqbar, 0.0, c).normalized().c;
    CHECK((rotate_correlations_to_beam(hel, c) - beam).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("luminosity-weighted mixture") {
  oracle::Rng rng(17);
  for (int t = 0; t < 300; ++t) {
    const double b = rng.uniform(0, 0.99);
    const double c = rng.uniform(-0.99, 0.99);
    const double lq = rng.uniform(0, 2);
    const double lg = rng.uniform(0, 20);
    const MixedPoint mp = mix_point(b, c, lq, lg);
    const oracle::Lo q = oracle::lo_qq(b, c);
    const oracle::Lo g = oracle::lo_gg(b, c);
    const double tot = lq * q.a + lg * g.a;
    CHECK(mp.w_qq == doctest::Approx(lq * q.a / tot).epsilon(1e-12));
    CHECK(mp.w_qq + mp.w_gg == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(mp.state.c(hel::n, hel::n) == doctest::Approx((lq * q.nn + lg * g.nn) / tot).epsilon(1e-12));
    CHECK(mp.state.c(hel::k, hel::r) * tot == doctest::Approx(lq * q.kr + lg * g.kr).epsilon(1e-12));
    CHECK(oracle::min_eig(mp.state) >= -1e-12);
  }
  CHECK(mix_point(0.5, 0.2, 1.0, 0.0).w_gg == 0.0);
  try {
    mix_point(0.5, 0.2, 0.0, 0.0);
    FAIL("expected ZeroLuminosity");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::zero_luminosity);
  }
  try {
    mix_point(0.5, 0.2, -1.0, 1.0);
    FAIL("expected NegativeLuminosity");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::negative_luminosity);
  }
}
