#include "hvac/solver.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

namespace hvac {

double init_queue(double t0, double delta, const ZoneParams& zp) {
  if (t0 < zp.t_min || t0 > zp.t_max) {
    throw std::invalid_argument(
        "init_queue: initial temperature outside the comfort band");
  }
  return t0 + delta;
}

double update_queue(const ZoneState& state, double m, double t_out, double q,
                    const ZoneParams& zp, const BuildingConfig& cfg) {
  const double next =
      (1.0 - zp.a) * state.queue + zp.b * m * (cfg.t_supply - state.t_in) +
      zp.a * (zp.delta + t_out) + (cfg.tau / zp.c_thermal) * q;
#ifndef NDEBUG
  const double via_temp =
      step_temperature(state.t_in, m, t_out, q, zp, cfg) + zp.delta;
  assert(std::abs(next - via_temp) <= 1e-12);
#endif
  return next;
}

ZoneQuadratic p3_zone_quadratic(const ZoneState& state, double price_kwh,
                                double t_out, double t_ref_next, double q,
                                const ZoneParams& zp,
                                const BuildingConfig& cfg, double v) {
  const double s = price_per_joule(price_kwh);
  const double ts = cfg.t_supply;
  const double tc = cfg.tau / zp.c_thermal;
  const double cool = zp.b * (ts - state.t_in);  // dT'/dm, negative in cooling
  const double g = s * cfg.tau * (cfg.c_air / (cfg.eta * cfg.cop)) *
                   (cfg.gamma * state.t_in + (1.0 - cfg.gamma) * t_out - ts);
  // Pull of the comfort target net of the queue pressure.
  const double h =
      2.0 * v * zp.phi *
          (t_ref_next - zp.d * state.t_in - zp.a * t_out - tc * q) -
      (1.0 - zp.a) * state.queue;
  ZoneQuadratic zq;
  zq.quad = v * cfg.mu * s * cfg.tau * static_cast<double>(cfg.n_zones) *
                cfg.m_total_cap +
            v * zp.phi * cool * cool;
  zq.lin = v * g - cool * h;
  zq.lo = zp.m_min;
  zq.hi = zp.m_max;
  return zq;
}

double rate_at_dual(const ZoneQuadratic& zq, double rho) {
  if (zq.quad == 0.0) {
    return (zq.lin + rho > 0.0) ? zq.lo : (zq.lin + rho < 0.0 ? zq.hi : zq.lo);
  }
  const double stationary = (-zq.lin - rho) / (2.0 * zq.quad);
  return std::clamp(stationary, zq.lo, zq.hi);
}

double unconstrained_rate(const ZoneState& state, double price_kwh,
                          double t_out, double t_ref_next, double q,
                          const ZoneParams& zp, const BuildingConfig& cfg,
                          double v) {
  const ZoneQuadratic zq =
      p3_zone_quadratic(state, price_kwh, t_out, t_ref_next, q, zp, cfg, v);
  if (zq.quad == 0.0) {
    throw std::domain_error(
        "unconstrained_rate: objective is linear in m (zero price and zero "
        "phi); no stationary point");
  }
  return -zq.lin / (2.0 * zq.quad);
}

double dual_adjusted_rate(const ZoneState& state, double price_kwh,
                          double t_out, double t_ref_next, double q,
                          const ZoneParams& zp, const BuildingConfig& cfg,
                          double v, double rho) {
  return rate_at_dual(
      p3_zone_quadratic(state, price_kwh, t_out, t_ref_next, q, zp, cfg, v),
      rho);
}

CapSearch::CapSearch(double cap, double eps, int max_iter)
    : cap_(cap), eps_(eps), max_iter_(max_iter) {}

CapSearch::Step CapSearch::observe(double sum) {
  ++iterations_;
  last_residual_ = cap_ - sum;
  switch (phase_) {
    case Phase::at_zero:
      if (sum <= cap_) return Step::accept;
      phase_ = Phase::doubling;
      lo_ = 0.0;
      rho_ = 1.0;
      break;
    case Phase::doubling:
      if (sum <= cap_) {
        if (cap_ - sum <= eps_) return Step::accept;
        hi_ = rho_;
        phase_ = Phase::bisecting;
        rho_ = 0.5 * (lo_ + hi_);
      } else {
        lo_ = rho_;
        rho_ *= 2.0;
      }
      break;
    case Phase::bisecting:
      if (sum <= cap_) {
        if (cap_ - sum <= eps_) return Step::accept;
        hi_ = rho_;
      } else {
        lo_ = rho_;
      }
      rho_ = 0.5 * (lo_ + hi_);
      break;
  }
  return iterations_ >= max_iter_ ? Step::fail : Step::next;
}

SolveResult solve_p3(std::span<const ZoneState> states,
                     const SlotObservation& obs,
                     std::span<const ZoneParams> zones,
                     const BuildingConfig& cfg, const TuningBundle& tuning) {
  const std::size_t n = zones.size();
  std::vector<ZoneQuadratic> quads(n);
  for (std::size_t i = 0; i < n; ++i) {
    quads[i] = p3_zone_quadratic(states[i], obs.price, obs.t_out, obs.t_ref[i],
                                 obs.q[i], zones[i], cfg, tuning.v);
  }

  SolveResult result;
  result.rates.resize(n);
  CapSearch search(cfg.m_total_cap);
  while (true) {
    const double rho = search.current_rho();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      result.rates[i] = rate_at_dual(quads[i], rho);
      sum += result.rates[i];
    }
    const CapSearch::Step step = search.observe(sum);
    if (step == CapSearch::Step::accept) {
      result.rho = rho;
      result.iterations = search.iterations();
      result.residual = cfg.m_total_cap - sum;
      result.cap_active = rho > 0.0;
      return result;
    }
    if (step == CapSearch::Step::fail) {
      throw dual_search_error("solve_p3: dual search iteration cap exceeded",
                              search.last_residual(), search.iterations());
    }
  }
}

StepResult cdra_step(std::span<const ZoneState> states,
                     const SlotObservation& obs,
                     std::span<const ZoneParams> zones,
                     const BuildingConfig& cfg, const TuningBundle& tuning) {
  StepResult out;
  out.solve = solve_p3(states, obs, zones, cfg, tuning);
  out.rates = out.solve.rates;
  out.next.resize(zones.size());
  std::vector<double> t_in(zones.size());
  for (std::size_t i = 0; i < zones.size(); ++i) {
    t_in[i] = states[i].t_in;
    out.next[i].t_in = step_temperature(states[i].t_in, out.rates[i],
                                        obs.t_out, obs.q[i], zones[i], cfg);
    out.next[i].queue =
        update_queue(states[i], out.rates[i], obs.t_out, obs.q[i], zones[i],
                     cfg);
  }
  out.cost = slot_total_cost(t_in, out.rates, obs, zones, cfg);
  return out;
}

}  // namespace hvac
