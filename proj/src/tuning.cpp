#include "hvac/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hvac/cost.hpp"
#include "json.hpp"

namespace hvac {

namespace {

void check_finite(double lo, double hi, const char* what) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
    throw std::invalid_argument(std::string("compute_envelope: ") + what +
                                " support must be a finite interval");
  }
}

}  // namespace

ParameterEnvelope compute_envelope(std::span<const double> prices_kwh,
                                   std::span<const double> t_out,
                                   const InputDistributions& dists,
                                   std::span<const ZoneParams> zones,
                                   const BuildingConfig& cfg) {
  if (prices_kwh.empty() || t_out.empty()) {
    throw std::invalid_argument("compute_envelope: empty traces");
  }
  check_finite(dists.q_lo, dists.q_hi, "disturbance");
  check_finite(dists.t_ref_lo, dists.t_ref_hi, "comfort-target");

  ParameterEnvelope env;
  auto [s_lo, s_hi] = std::minmax_element(prices_kwh.begin(), prices_kwh.end());
  auto [o_lo, o_hi] = std::minmax_element(t_out.begin(), t_out.end());
  env.s_min = *s_lo;
  env.s_max = *s_hi;
  env.t_out_min = *o_lo;
  env.t_out_max = *o_hi;
  if (!std::isfinite(env.s_min) || !std::isfinite(env.t_out_min) ||
      !std::isfinite(env.s_max) || !std::isfinite(env.t_out_max)) {
    throw std::invalid_argument("compute_envelope: non-finite trace values");
  }

  const double k = cfg.c_air / (cfg.eta * cfg.cop);
  for (const ZoneParams& zp : zones) {
    env.q_min.push_back(dists.q_lo);
    env.q_max.push_back(dists.q_hi);
    env.t_ref_max.push_back(dists.t_ref_hi);
    // The mixed-air bracket is affine in (T_i, T_out) with non-negative
    // coefficients, so its extrema sit at the corners; g is bilinear in
    // (S, bracket), so all four sign combinations are evaluated.
    const double br_lo = cfg.gamma * zp.t_min +
                         (1.0 - cfg.gamma) * env.t_out_min - cfg.t_supply;
    const double br_hi = cfg.gamma * zp.t_max +
                         (1.0 - cfg.gamma) * env.t_out_max - cfg.t_supply;
    double g_lo = std::numeric_limits<double>::infinity();
    double g_hi = -g_lo;
    for (double s : {env.s_min, env.s_max}) {
      for (double br : {br_lo, br_hi}) {
        const double g = price_per_joule(s) * cfg.tau * k * br;
        g_lo = std::min(g_lo, g);
        g_hi = std::max(g_hi, g);
      }
    }
    env.g_min.push_back(g_lo);
    env.g_max.push_back(g_hi);
  }
  return env;
}

TuningBundle compute_tuning(const ParameterEnvelope& envelope,
                            std::span<const ZoneParams> zones,
                            const BuildingConfig& cfg,
                            const TuningChoice& choice) {
  const std::size_t n = zones.size();
  const double n_zones = static_cast<double>(cfg.n_zones);
  const double cap = cfg.m_total_cap;
  const double ts = cfg.t_supply;
  const double s_min_j = price_per_joule(envelope.s_min);
  const double s_max_j = price_per_joule(envelope.s_max);

  TuningBundle bundle;
  bundle.envelope = envelope;
  bundle.hbar.resize(n);
  bundle.upsilon.resize(n);

  double v_max = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const ZoneParams& zp = zones[i];
    const double tc = cfg.tau / zp.c_thermal;
    const double hbar =
        (zp.t_max - zp.t_min) +
        zp.a * (envelope.t_out_min - envelope.t_out_max) +
        tc * (envelope.q_min[i] - envelope.q_max[i]) +
        zp.b * (zp.m_max * (ts - zp.t_max) - zp.m_min * (ts - zp.t_min));
    const double upsilon =
        2.0 * zp.phi *
            (envelope.t_ref_max[i] + zp.d * zp.t_max +
             zp.a * envelope.t_out_max + tc * envelope.q_max[i] +
             zp.b * (zp.t_max - ts) * zp.m_max) +
        (envelope.g_max[i] +
         2.0 * zp.m_max * cfg.mu * s_max_j * cfg.tau * n_zones * cap) /
            (zp.b * (zp.t_min - ts)) -
        (envelope.g_min[i] +
         2.0 * zp.m_min * cfg.mu * s_min_j * cfg.tau * n_zones * cap) /
            (zp.b * (zp.t_max - ts));
    bundle.hbar[i] = hbar;
    bundle.upsilon[i] = upsilon;
    if (upsilon > 0.0) {
      v_max = std::min(v_max, hbar / upsilon);
    }
  }
  if (!(v_max > 0.0) || !std::isfinite(v_max)) {
    throw std::invalid_argument(
        "compute_tuning: v_max is not a positive finite value; the drift "
        "margin inequality fails for some zone");
  }
  bundle.v_max = v_max;

  double v = choice.v.value_or(v_max);
  if (!(v > 0.0) || v > v_max) {
    throw std::invalid_argument("compute_tuning: v must lie in (0, v_max]");
  }
  bundle.v = v;

  bundle.delta_min.resize(n);
  bundle.delta_max.resize(n);
  bundle.kappa_min.resize(n);
  bundle.kappa_max.resize(n);
  bundle.delta.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ZoneParams& zp = zones[i];
    const double tc = cfg.tau / zp.c_thermal;
    const double kappa_min =
        2.0 * v * zp.phi *
            (envelope.t_ref_max[i] + zp.b * (zp.t_max - ts) * zp.m_max) +
        (v * envelope.g_max[i] +
         2.0 * v * cfg.mu * cfg.tau * n_zones * cap * zp.m_max * s_max_j) /
            (zp.b * (zp.t_min - ts)) +
        zp.b * zp.m_min * (ts - zp.t_min) + zp.a * envelope.t_out_max +
        tc * envelope.q_max[i] - zp.t_max;
    const double kappa_max =
        -2.0 * v * zp.phi *
            (zp.d * zp.t_max + zp.a * envelope.t_out_max +
             tc * envelope.q_max[i]) +
        (v * envelope.g_min[i] +
         2.0 * v * cfg.mu * cfg.tau * n_zones * cap * zp.m_min * s_min_j) /
            (zp.b * (zp.t_max - ts)) +
        zp.b * zp.m_max * (ts - zp.t_max) + zp.a * envelope.t_out_min +
        tc * envelope.q_min[i] - zp.t_min;
    bundle.kappa_min[i] = kappa_min;
    bundle.kappa_max[i] = kappa_max;
    double lo = kappa_min / (1.0 - zp.a);
    double hi = kappa_max / (1.0 - zp.a);
    // At v = v_max the band of the binding zone closes to a single point;
    // the two ends are computed through different expressions, so allow a
    // rounding-level inversion and collapse it.
    if (lo > hi) {
      const double tol = 1e-9 * std::max(1.0, std::abs(lo));
      if (lo - hi > tol) {
        throw std::invalid_argument(
            "compute_tuning: delta band inverted for zone " +
            std::to_string(i));
      }
      hi = lo;
    }
    bundle.delta_min[i] = lo;
    bundle.delta_max[i] = hi;
    switch (choice.delta_mode) {
      case TuningChoice::DeltaMode::min:
        bundle.delta[i] = lo;
        break;
      case TuningChoice::DeltaMode::max:
        bundle.delta[i] = hi;
        break;
      case TuningChoice::DeltaMode::explicit_values:
        if (choice.delta_values.size() != n) {
          throw std::invalid_argument(
              "compute_tuning: explicit delta needs one value per zone");
        }
        bundle.delta[i] = std::clamp(choice.delta_values[i], lo, hi);
        break;
    }
  }

  bundle.b_drift.resize(n);
  bundle.theta = 0.0;
  double theta_drift = 0.0;
  double theta_xi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const ZoneParams& zp = zones[i];
    const double tc = cfg.tau / zp.c_thermal;
    const double abs_delta = std::abs(bundle.delta[i]);
    // Note: the first summand squares the supply/indoor temperature gap
    // inside the parenthesis; that mixes units but is kept exactly as the
    // stability analysis defines the constant.
    const double head = zp.b * zp.m_max * (ts - zp.t_max) * (ts - zp.t_max) +
                        zp.a * (abs_delta + envelope.t_out_max) +
                        tc * envelope.q_max[i];
    const double b_i =
        head * head + 2.0 * (1.0 - zp.a) * (abs_delta + zp.t_max) *
                          (zp.a * (abs_delta + envelope.t_out_max) +
                           tc * envelope.q_max[i]);
    bundle.b_drift[i] = b_i;
    theta_drift += b_i;
    // The gap constant's ratio uses Ts + t_min in the denominator, unlike
    // the dynamics elsewhere; kept verbatim.
    theta_xi += (1.0 - zp.a) * (zp.t_max + abs_delta) * ts *
                ((zp.a * (zp.t_max - envelope.t_out_min) -
                  tc * envelope.q_min[i]) /
                 (ts + zp.t_min));
  }
  bundle.theta = 0.5 * theta_drift + theta_xi;

  // Queue saturation thresholds (worst case over the envelope).
  bundle.q_lo.resize(n);
  bundle.q_hi.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ZoneParams& zp = zones[i];
    const double tc = cfg.tau / zp.c_thermal;
    const double one_minus_a = 1.0 - zp.a;
    bundle.q_lo[i] =
        (v * envelope.g_min[i] +
         2.0 * zp.m_min * v * cfg.mu * s_min_j * cfg.tau * n_zones * cap) /
            (zp.b * one_minus_a * (zp.t_max - ts)) -
        (2.0 * v * zp.phi *
         (zp.d * zp.t_max + zp.a * envelope.t_out_max +
          tc * envelope.q_max[i])) /
            one_minus_a;
    bundle.q_hi[i] =
        (v * envelope.g_max[i] +
         2.0 * zp.m_max * v * cfg.mu * s_max_j * cfg.tau * n_zones * cap) /
            (zp.b * one_minus_a * (zp.t_min - ts)) +
        (2.0 * (zp.t_max - ts) * zp.m_max * v * zp.phi * zp.b) / one_minus_a +
        (2.0 * envelope.t_ref_max[i] * v * zp.phi) / one_minus_a;
  }
  return bundle;
}

std::string tuning_to_json(const TuningBundle& bundle, int indent) {
  nlohmann::json j;
  j["v"] = bundle.v;
  j["v_max"] = bundle.v_max;
  j["delta"] = bundle.delta;
  j["delta_min"] = bundle.delta_min;
  j["delta_max"] = bundle.delta_max;
  j["b_drift"] = bundle.b_drift;
  j["q_lo"] = bundle.q_lo;
  j["q_hi"] = bundle.q_hi;
  j["theta"] = bundle.theta;
  j["hbar"] = bundle.hbar;
  j["upsilon"] = bundle.upsilon;
  j["kappa_min"] = bundle.kappa_min;
  j["kappa_max"] = bundle.kappa_max;
  j["envelope"] = {{"s_min", bundle.envelope.s_min},
                   {"s_max", bundle.envelope.s_max},
                   {"t_out_min", bundle.envelope.t_out_min},
                   {"t_out_max", bundle.envelope.t_out_max},
                   {"q_min", bundle.envelope.q_min},
                   {"q_max", bundle.envelope.q_max},
                   {"t_ref_max", bundle.envelope.t_ref_max},
                   {"g_min", bundle.envelope.g_min},
                   {"g_max", bundle.envelope.g_max}};
  return j.dump(indent);
}

}  // namespace hvac
