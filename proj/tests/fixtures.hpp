#pragma once

// Shared reference configuration for tests: the four-zone office building
// with the synthetic month traces.

#include <vector>

#include "hvac/config.hpp"
#include "hvac/simulation.hpp"

namespace fixtures {

inline hvac::BuildingConfig building() {
  hvac::BuildingConfig cfg;
  cfg.n_zones = 4;
  cfg.tau = 300.0;
  cfg.c_air = 1.012;
  cfg.t_supply = 12.8;
  cfg.gamma = 0.95;
  cfg.eta = 0.8879;
  cfg.cop = 5.9153;
  cfg.mu = 2e-6;
  cfg.m_total_cap = 1400.0;
  return cfg;
}

inline std::vector<hvac::ZoneParams> zones(double t_max = 26.0,
                                           double phi = 0.001) {
  const double r[4] = {0.0053, 0.0060, 0.0063, 0.0067};
  const double c[4] = {550000.0, 570000.0, 590000.0, 620000.0};
  const hvac::BuildingConfig cfg = building();
  std::vector<hvac::ZoneParams> out(4);
  for (int i = 0; i < 4; ++i) {
    hvac::ZoneParams& zp = out[i];
    zp.r_thermal = r[i];
    zp.c_thermal = c[i];
    const auto k =
        hvac::derive_coefficients(r[i], c[i], cfg.tau, cfg.c_air);
    zp.a = k.a;
    zp.b = k.b;
    zp.d = k.d;
    zp.t_min = 18.0;
    zp.t_max = t_max;
    zp.m_min = 0.0;
    zp.m_max = 450.0;
    zp.phi = phi;
  }
  return out;
}

// Envelope over the synthetic-trace box: two-tier price {0.4, 1.4},
// outdoor range [18.7, 36.4], disturbance [0.1, 0.2], targets {21,22,23}.
inline hvac::ParameterEnvelope envelope(const std::vector<hvac::ZoneParams>& z,
                                        const hvac::BuildingConfig& cfg) {
  const double prices[] = {0.4, 1.4};
  const double t_outs[] = {18.7, 36.4};
  return hvac::compute_envelope(prices, t_outs, hvac::InputDistributions{},
                                z, cfg);
}

inline hvac::SimConfig config(double t_max = 26.0, double phi = 0.001,
                              hvac::Controller controller =
                                  hvac::Controller::cdra,
                              std::uint64_t seed = 1, int horizon = 8928) {
  hvac::SimConfig cfg;
  cfg.building = building();
  cfg.zones = zones(t_max, phi);
  cfg.horizon = horizon;
  cfg.controller = controller;
  cfg.seed = seed;
  return cfg;
}

}  // namespace fixtures
