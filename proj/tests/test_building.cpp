#include "hvac/building.hpp"

#include <random>
#include <stdexcept>

#include "doctest.h"
#include "fixtures.hpp"

using namespace hvac;

TEST_CASE("coefficient derivation matches exact arithmetic") {
  // Exact values: a = 300/2915, b = 303.6/550000, d = 1 - a.
  auto k = derive_coefficients(0.0053, 550000.0, 300.0, 1.012);
  CHECK(k.a == doctest::Approx(0.10291595197255575).epsilon(1e-12));
  CHECK(k.b == doctest::Approx(0.000552).epsilon(1e-12));
  CHECK(k.d == doctest::Approx(0.8970840480274442).epsilon(1e-12));

  auto k4 = derive_coefficients(0.0067, 620000.0, 300.0, 1.012);
  CHECK(k4.a == doctest::Approx(0.07221954742416947).epsilon(1e-12));
  CHECK(k4.b == doctest::Approx(0.0004896774193548387).epsilon(1e-12));
}

TEST_CASE("coefficient identity a + d == 1 exactly as stored") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const double r = 0.003 + 0.017 * (rng() >> 11) * 0x1.0p-53;
    const double c = 3e5 + 7e5 * (rng() >> 11) * 0x1.0p-53;
    auto k = derive_coefficients(r, c, 300.0, 1.012);
    CHECK(k.a + k.d == 1.0);
  }
}

TEST_CASE("coefficients degenerate toward the continuous limit as tau -> 0") {
  auto k = derive_coefficients(0.0053, 550000.0, 1e-9, 1.012);
  CHECK(k.a < 1e-9);
  CHECK(k.b < 1e-9);
  CHECK(k.d == doctest::Approx(1.0));
}

TEST_CASE("coefficient derivation rejects invalid inputs") {
  CHECK_THROWS_AS(derive_coefficients(-1.0, 550000.0, 300.0, 1.012),
                  std::invalid_argument);
  CHECK_THROWS_AS(derive_coefficients(0.0053, 0.0, 300.0, 1.012),
                  std::invalid_argument);
  // tau/(R*C) = 300 >= 1: slot far too long for the RC constant.
  CHECK_THROWS_AS(derive_coefficients(1e-4, 1e4, 300.0, 1.012),
                  std::invalid_argument);
}

TEST_CASE("temperature step matches the hand-evaluated fixture") {
  const auto cfg = fixtures::building();
  const auto zones = fixtures::zones();
  const double t_next = step_temperature(24.0, 200.0, 30.0, 0.15, zones[0], cfg);
  CHECK(t_next == doctest::Approx(23.381097530017154).epsilon(1e-12));
}

TEST_CASE("temperature step degenerates to pure RC relaxation at zero airflow") {
  const auto cfg = fixtures::building();
  const auto zones = fixtures::zones();
  const ZoneParams& zp = zones[1];
  const double t_next = step_temperature(23.0, 0.0, 31.5, 0.0, zp, cfg);
  CHECK(t_next == zp.d * 23.0 + zp.a * 31.5);
}

TEST_CASE("supply temperature is a fixed point of the dynamics") {
  const auto cfg = fixtures::building();
  const auto zones = fixtures::zones();
  for (double m : {0.0, 120.0, 450.0}) {
    const double t_next =
        step_temperature(cfg.t_supply, m, cfg.t_supply, 0.0, zones[2], cfg);
    CHECK(t_next == doctest::Approx(cfg.t_supply).epsilon(1e-12));
  }
}

TEST_CASE("temperature step is monotone in airflow, outdoor temp, and load") {
  const auto cfg = fixtures::building();
  const auto zones = fixtures::zones();
  std::mt19937_64 rng(11);
  auto u = [&rng](double lo, double hi) {
    return lo + (hi - lo) * (rng() >> 11) * 0x1.0p-53;
  };
  for (int i = 0; i < 500; ++i) {
    const ZoneParams& zp = zones[i % 4];
    const double t_in = u(18.0, 26.0);
    const double t_out = u(15.0, 40.0);
    const double q = u(0.1, 0.2);
    const double m1 = u(0.0, 450.0);
    const double m2 = u(0.0, 450.0);
    if (m1 != m2) {
      const double lo = std::min(m1, m2), hi = std::max(m1, m2);
      CHECK(step_temperature(t_in, lo, t_out, q, zp, cfg) >
            step_temperature(t_in, hi, t_out, q, zp, cfg));
    }
    CHECK(step_temperature(t_in, m1, t_out + 1.0, q, zp, cfg) >
          step_temperature(t_in, m1, t_out, q, zp, cfg));
    CHECK(step_temperature(t_in, m1, t_out, q + 0.05, zp, cfg) >
          step_temperature(t_in, m1, t_out, q, zp, cfg));
  }
}

TEST_CASE("comfort rate interval clamps the fixture endpoints to the box") {
  const auto cfg = fixtures::building();
  const auto zones = fixtures::zones();
  // Raw inversion gives [-223.606..., 1070.39...]; both ends clamp.
  const RateInterval r = comfort_rate_interval(24.0, 30.0, 0.15, zones[0], cfg);
  CHECK_FALSE(r.empty());
  CHECK(r.lo == 0.0);
  CHECK(r.hi == 450.0);
}

TEST_CASE("comfort rate interval round-trips through the dynamics") {
  const auto cfg = fixtures::building();
  const auto zones = fixtures::zones();
  std::mt19937_64 rng(23);
  auto u = [&rng](double lo, double hi) {
    return lo + (hi - lo) * (rng() >> 11) * 0x1.0p-53;
  };
  for (int i = 0; i < 500; ++i) {
    const ZoneParams& zp = zones[i % 4];
    const double t_in = u(18.0, 26.0);
    const double t_out = u(18.7, 36.4);
    const double q = u(0.1, 0.2);
    const RateInterval r = comfort_rate_interval(t_in, t_out, q, zp, cfg);
    if (r.empty()) continue;
    for (double w : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      const double m = r.lo + w * (r.hi - r.lo);
      const double t_next = step_temperature(t_in, m, t_out, q, zp, cfg);
      CHECK(t_next >= zp.t_min - 1e-9);
      CHECK(t_next <= zp.t_max + 1e-9);
    }
  }
}

TEST_CASE("comfort rate interval hits the band edges when interior") {
  const auto cfg = fixtures::building();
  auto zones = fixtures::zones();
  ZoneParams zp = zones[0];
  zp.t_min = 23.0;
  zp.t_max = 24.5;
  // Hot afternoon: both endpoints stay inside the box, so stepping with an
  // endpoint rate must land exactly on the matching band edge.
  const RateInterval r = comfort_rate_interval(24.0, 36.0, 0.15, zp, cfg);
  REQUIRE_FALSE(r.empty());
  CHECK(r.lo > zp.m_min);
  CHECK(r.hi < zp.m_max);
  CHECK(step_temperature(24.0, r.lo, 36.0, 0.15, zp, cfg) ==
        doctest::Approx(zp.t_max).epsilon(1e-12));
  CHECK(step_temperature(24.0, r.hi, 36.0, 0.15, zp, cfg) ==
        doctest::Approx(zp.t_min).epsilon(1e-12));
}

TEST_CASE("comfort rate interval reports emptiness instead of projecting") {
  const auto cfg = fixtures::building();
  auto zones = fixtures::zones();
  ZoneParams zp = zones[0];
  zp.m_max = 5.0;  // not enough airflow to stop a hot excursion
  const RateInterval r = comfort_rate_interval(25.9, 45.0, 0.2, zp, cfg);
  CHECK(r.empty());
  CHECK(r.lo > zp.m_max);
}

TEST_CASE("comfort rate interval rejects non-cooling states") {
  const auto cfg = fixtures::building();
  const auto zones = fixtures::zones();
  CHECK_THROWS_AS(comfort_rate_interval(12.8, 30.0, 0.15, zones[0], cfg),
                  std::domain_error);
  CHECK_THROWS_AS(comfort_rate_interval(10.0, 30.0, 0.15, zones[0], cfg),
                  std::domain_error);
}

TEST_CASE("controllability report for the reference configuration") {
  const auto cfg = fixtures::building();
  const auto zones = fixtures::zones(26.0);
  const auto env = fixtures::envelope(zones, cfg).exogenous();
  const auto report = validate_controllability(zones, cfg, env);
  REQUIRE(report.zones.size() == 4);
  CHECK(report.ok());
  CHECK(report.zones[0].min_rate_slack ==
        doctest::Approx(0.07209571183533448).epsilon(1e-12));
  CHECK(report.zones[0].drift_margin ==
        doctest::Approx(2.8994531046312177).epsilon(1e-12));
  CHECK(report.zones[0].damping_slack ==
        doctest::Approx(0.8970840480274442).epsilon(1e-12));
  CHECK(report.cap_slack == doctest::Approx(88.91951561254758).epsilon(1e-10));
}

TEST_CASE("airflow cap check fails at the tight band and with a zero cap") {
  auto cfg = fixtures::building();
  const auto zones24 = fixtures::zones(24.0);
  const auto env = fixtures::envelope(zones24, cfg).exogenous();
  const auto report = validate_controllability(zones24, cfg, env);
  CHECK_FALSE(report.cap_ok());
  CHECK(report.cap_slack ==
        doctest::Approx(-163.18211179058704).epsilon(1e-10));
  CHECK_FALSE(report.ok());
  // All other inequalities are unaffected by the cap.
  for (const auto& z : report.zones) {
    CHECK(z.min_rate_ok());
    CHECK(z.drift_ok());
    CHECK(z.damping_ok());
  }

  cfg.m_total_cap = 0.0;
  const auto zones26 = fixtures::zones(26.0);
  CHECK_FALSE(validate_controllability(zones26, cfg, env).cap_ok());
}

TEST_CASE("controllability comparisons are non-strict except the drift margin") {
  ZoneControllability z;
  z.min_rate_slack = 0.0;
  z.drift_margin = 0.0;
  z.damping_slack = 0.0;
  CHECK(z.min_rate_ok());
  CHECK_FALSE(z.drift_ok());
  CHECK(z.damping_ok());
}

TEST_CASE("parameter validation catches structural mistakes") {
  const auto cfg = fixtures::building();
  auto zones = fixtures::zones();
  CHECK_NOTHROW(validate_parameters(zones, cfg));

  auto broken = zones;
  broken[2].d = 1.0 - broken[2].a + 1e-12;
  CHECK_THROWS_AS(validate_parameters(broken, cfg), std::invalid_argument);

  broken = zones;
  broken[0].t_min = broken[0].t_max;
  CHECK_THROWS_AS(validate_parameters(broken, cfg), std::invalid_argument);

  auto cap_cfg = cfg;
  cap_cfg.m_total_cap = 4 * 450.0;  // redundant cap
  CHECK_THROWS_AS(validate_parameters(zones, cap_cfg), std::invalid_argument);

  auto warm_cfg = cfg;
  warm_cfg.t_supply = 19.0;  // not colder than every zone's band floor
  CHECK_THROWS_AS(validate_parameters(zones, warm_cfg), std::invalid_argument);
}
