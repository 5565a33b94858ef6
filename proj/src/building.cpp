#include "hvac/building.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hvac {

Coefficients derive_coefficients(double r_thermal, double c_thermal,
                                 double tau, double c_air) {
  if (!(r_thermal > 0.0) || !(c_thermal > 0.0) || !(tau > 0.0) ||
      !(c_air > 0.0)) {
    throw std::invalid_argument(
        "derive_coefficients: all inputs must be positive");
  }
  Coefficients c;
  c.a = tau / (r_thermal * c_thermal);
  c.b = tau * c_air / c_thermal;
  c.d = 1.0 - c.a;
  if (c.a >= 1.0) {
    throw std::invalid_argument(
        "derive_coefficients: tau/(R*C) = " + std::to_string(c.a) +
        " >= 1; slot too long for the zone RC constant");
  }
  return c;
}

double step_temperature(double t_in, double m, double t_out, double q,
                        const ZoneParams& zp, const BuildingConfig& cfg) {
  return zp.d * t_in + zp.b * m * (cfg.t_supply - t_in) + zp.a * t_out +
         (cfg.tau / zp.c_thermal) * q;
}

RateInterval comfort_rate_interval(double t_in, double t_out, double q,
                                   const ZoneParams& zp,
                                   const BuildingConfig& cfg) {
  if (!(t_in > cfg.t_supply)) {
    throw std::domain_error(
        "comfort_rate_interval: t_in <= supply temperature; airflow would "
        "not cool (cooling-mode assumption violated)");
  }
  // Next temperature is strictly decreasing in m, so the band maps to a
  // closed rate interval: the upper comfort bound gives the low rate.
  const double free_response =
      zp.d * t_in + zp.a * t_out + (cfg.tau / zp.c_thermal) * q;
  const double slope = zp.b * (t_in - cfg.t_supply);
  RateInterval r;
  r.lo = std::max((free_response - zp.t_max) / slope, zp.m_min);
  r.hi = std::min((free_response - zp.t_min) / slope, zp.m_max);
  return r;
}

bool ControllabilityReport::ok() const {
  if (!cap_ok()) return false;
  return std::all_of(zones.begin(), zones.end(), [](const auto& z) {
    return z.min_rate_ok() && z.drift_ok() && z.damping_ok();
  });
}

ControllabilityReport validate_controllability(
    std::span<const ZoneParams> zones, const BuildingConfig& cfg,
    const ExogenousExtrema& env) {
  ControllabilityReport report;
  report.zones.reserve(zones.size());
  double cap_required = 0.0;
  for (std::size_t i = 0; i < zones.size(); ++i) {
    const ZoneParams& zp = zones[i];
    const double tc = cfg.tau / zp.c_thermal;
    ZoneControllability zc;
    // Holding the minimum rate at the cold corner must not undercool.
    zc.min_rate_slack = zp.d * zp.t_min +
                        zp.b * zp.m_min * (cfg.t_supply - zp.t_min) +
                        zp.a * env.t_out_min + tc * env.q_min[i] - zp.t_min;
    // Width of the feasible tuning range; must be strictly positive.
    zc.drift_margin =
        (zp.t_max - zp.t_min) + zp.a * (env.t_out_min - env.t_out_max) +
        tc * (env.q_min[i] - env.q_max[i]) +
        zp.b * (zp.m_max * (cfg.t_supply - zp.t_max) -
                zp.m_min * (cfg.t_supply - zp.t_min));
    zc.damping_slack = zp.d - zp.b * zp.m_min;
    // Worst-case rate needed to stop an upward excursion at the hot corner.
    zc.cap_share = (zp.a * (zp.t_max - env.t_out_max) - tc * env.q_max[i]) /
                   (zp.b * (cfg.t_supply - zp.t_min));
    cap_required += zc.cap_share;
    report.zones.push_back(zc);
  }
  report.cap_slack = cfg.m_total_cap - cap_required;
  return report;
}

void validate_parameters(std::span<const ZoneParams> zones,
                         const BuildingConfig& cfg) {
  if (cfg.n_zones <= 0 ||
      static_cast<std::size_t>(cfg.n_zones) != zones.size()) {
    throw std::invalid_argument("config: n_zones does not match zone list");
  }
  if (!(cfg.gamma >= 0.0 && cfg.gamma <= 1.0)) {
    throw std::invalid_argument("config: gamma must lie in [0,1]");
  }
  if (!(cfg.eta > 0.0) || !(cfg.cop > 0.0) || !(cfg.mu > 0.0) ||
      !(cfg.tau > 0.0) || !(cfg.c_air > 0.0)) {
    throw std::invalid_argument(
        "config: eta, cop, mu, tau, c_air must be positive");
  }
  double sum_m_max = 0.0;
  double sum_m_min = 0.0;
  for (std::size_t i = 0; i < zones.size(); ++i) {
    const ZoneParams& zp = zones[i];
    const std::string tag = "zone " + std::to_string(i) + ": ";
    if (!(zp.a > 0.0 && zp.a < 1.0) || !(zp.b > 0.0)) {
      throw std::invalid_argument(tag + "coefficients out of range");
    }
    if (zp.d != 1.0 - zp.a) {
      throw std::invalid_argument(tag + "d must equal 1 - a exactly");
    }
    if (!(zp.t_min < zp.t_max)) {
      throw std::invalid_argument(tag + "t_min must be below t_max");
    }
    if (!(zp.m_min >= 0.0 && zp.m_min < zp.m_max)) {
      throw std::invalid_argument(tag + "rate bounds invalid");
    }
    if (!(cfg.t_supply < zp.t_min)) {
      throw std::invalid_argument(tag +
                                  "supply air must be colder than t_min");
    }
    if (!(zp.phi >= 0.0)) {
      throw std::invalid_argument(tag + "phi must be non-negative");
    }
    sum_m_max += zp.m_max;
    sum_m_min += zp.m_min;
  }
  if (!(cfg.m_total_cap < sum_m_max)) {
    throw std::invalid_argument(
        "config: m_total_cap must be below the sum of zone m_max "
        "(otherwise the shared cap is redundant)");
  }
  if (!(sum_m_min <= cfg.m_total_cap)) {
    throw std::invalid_argument(
        "config: sum of zone m_min exceeds m_total_cap; no feasible rates");
  }
}

}  // namespace hvac
