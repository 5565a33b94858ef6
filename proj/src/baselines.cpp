#include "hvac/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hvac {

std::vector<double> b1_step(std::span<const ZoneState> states,
                            const SlotObservation& obs,
                            std::span<const ZoneParams> zones,
                            const BuildingConfig& cfg) {
  std::vector<double> rates(zones.size());
  for (std::size_t i = 0; i < zones.size(); ++i) {
    const ZoneParams& zp = zones[i];
    const double t_in = states[i].t_in;
    if (!(t_in > cfg.t_supply)) {
      throw std::domain_error("b1_step: zone not in cooling mode");
    }
    const double free_response = zp.d * t_in + zp.a * obs.t_out +
                                 (cfg.tau / zp.c_thermal) * obs.q[i];
    const double required =
        (free_response - obs.t_ref[i]) / (zp.b * (t_in - cfg.t_supply));
    rates[i] = std::clamp(required, zp.m_min, zp.m_max);
  }
  const double total = std::accumulate(rates.begin(), rates.end(), 0.0);
  if (total > cfg.m_total_cap) {
    const double scale = cfg.m_total_cap / total;
    for (double& m : rates) m *= scale;
  }
  return rates;
}

B2Result b2_step(std::span<const ZoneState> states, const SlotObservation& obs,
                 std::span<const ZoneParams> zones,
                 const BuildingConfig& cfg) {
  const std::size_t n = zones.size();
  B2Result out;
  out.rates.resize(n);
  out.interval_empty.assign(n, false);

  std::vector<ZoneQuadratic> quads(n);
  for (std::size_t i = 0; i < n; ++i) {
    const ZoneParams& zp = zones[i];
    const RateInterval band =
        comfort_rate_interval(states[i].t_in, obs.t_out, obs.q[i], zp, cfg);
    // Myopic objective: the queue-free closed form (v = 1, queue = 0) over
    // the comfort-preserving interval.
    ZoneState no_queue{states[i].t_in, 0.0};
    quads[i] = p3_zone_quadratic(no_queue, obs.price, obs.t_out, obs.t_ref[i],
                                 obs.q[i], zp, cfg, 1.0);
    if (band.empty()) {
      out.interval_empty[i] = true;
      // Nearest feasible bound: lo > m_max means even full airflow is too
      // little cooling; otherwise even m_min overshoots the band floor.
      const double pinned = band.lo > zp.m_max ? zp.m_max : zp.m_min;
      quads[i].lo = pinned;
      quads[i].hi = pinned;
    } else {
      quads[i].lo = band.lo;
      quads[i].hi = band.hi;
    }
  }

  double lo_total = 0.0;
  for (const ZoneQuadratic& zq : quads) lo_total += zq.lo;
  if (lo_total > cfg.m_total_cap) {
    // The comfort floors alone break the cap; fall back to proportional
    // scaling of the floors and flag the slot.
    out.cap_infeasible = true;
    const double scale = cfg.m_total_cap / lo_total;
    for (std::size_t i = 0; i < n; ++i) out.rates[i] = quads[i].lo * scale;
    return out;
  }

  CapSearch search(cfg.m_total_cap);
  while (true) {
    const double rho = search.current_rho();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      out.rates[i] = rate_at_dual(quads[i], rho);
      sum += out.rates[i];
    }
    const CapSearch::Step step = search.observe(sum);
    if (step == CapSearch::Step::accept) return out;
    if (step == CapSearch::Step::fail) {
      throw dual_search_error("b2_step: dual search iteration cap exceeded",
                              search.last_residual(), search.iterations());
    }
  }
}

double mcdra_delta(double phi, double phi_max, double t_ref_next,
                   double delta_min, double delta_max) {
  if (!(phi_max > 0.0)) {
    throw std::invalid_argument(
        "mcdra_delta: phi_max must be positive (fall back to the fixed-shift "
        "controller when all weights are zero)");
  }
  const double w = phi / phi_max;
  const double raw = -(w * t_ref_next + (1.0 - w) * (-delta_min));
  return std::clamp(raw, delta_min, delta_max);
}

StepResult mcdra_step(std::span<const ZoneState> states,
                      const SlotObservation& obs,
                      std::span<const ZoneParams> zones,
                      const BuildingConfig& cfg, const TuningBundle& tuning) {
  double phi_max = 0.0;
  for (const ZoneParams& zp : zones) phi_max = std::max(phi_max, zp.phi);
  if (phi_max == 0.0) {
    return cdra_step(states, obs, zones, cfg, tuning);
  }
  std::vector<ZoneParams> adapted(zones.begin(), zones.end());
  std::vector<ZoneState> rebuilt(states.begin(), states.end());
  for (std::size_t i = 0; i < zones.size(); ++i) {
    adapted[i].delta =
        mcdra_delta(zones[i].phi, phi_max, obs.t_ref[i], tuning.delta_min[i],
                    tuning.delta_max[i]);
    rebuilt[i].queue = states[i].t_in + adapted[i].delta;
  }
  return cdra_step(rebuilt, obs, adapted, cfg, tuning);
}

}  // namespace hvac
