#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "hvac/building.hpp"
#include "hvac/cost.hpp"
#include "hvac/tuning.hpp"

// Per-slot controller: virtual queues, the per-zone closed form of the
// surrogate objective, and the capacity-coupled solve via a dual variable
// found by binary search. The per-zone surrogate objective is
//
//   f_i(m) = (1-a)*Q*b*(Ts-T)*m + v*phi*(T'(m) - T_ref)^2
//          + v*g*m + v*mu*S*tau*N*cap*m^2
//
// with S the per-joule price and g the marginal coil price; the quadratic
// fan term upper-bounds the exact cubic on the feasible set, which is what
// decouples the zones.

namespace hvac {

struct ZoneState {
  double t_in = 0.0;   // degC
  double queue = 0.0;  // T + delta, degC
};

// Q0 = t0 + delta. Requires t0 inside the comfort band.
double init_queue(double t0, double delta, const ZoneParams& zp);

// Queue recursion: Q' = (1-a)Q + b*m*(Ts-T) + a*(delta+Tout) + (tau/C)*q.
// Algebraically identical to stepping the temperature and re-shifting; the
// identity is asserted to 1e-12 in debug builds.
double update_queue(const ZoneState& state, double m, double t_out, double q,
                    const ZoneParams& zp, const BuildingConfig& cfg);

// f_i(m) = quad*m^2 + lin*m + const, restricted to [lo, hi].
// quad >= 0; quad == 0 only when the slot price and phi are both zero.
struct ZoneQuadratic {
  double quad = 0.0;
  double lin = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

ZoneQuadratic p3_zone_quadratic(const ZoneState& state, double price_kwh,
                                double t_out, double t_ref_next, double q,
                                const ZoneParams& zp,
                                const BuildingConfig& cfg, double v);

// Minimizer of f_i over [lo, hi] with the dual charge rho on m. For the
// degenerate linear case the minimizer is the boundary selected by the
// sign of the total linear coefficient (lo on ties).
double rate_at_dual(const ZoneQuadratic& zq, double rho);

// Unclamped stationary point of f_i. Throws std::domain_error when the
// curvature is zero (objective linear in m).
double unconstrained_rate(const ZoneState& state, double price_kwh,
                          double t_out, double t_ref_next, double q,
                          const ZoneParams& zp, const BuildingConfig& cfg,
                          double v);

// Box-clamped rate at a given dual value.
double dual_adjusted_rate(const ZoneState& state, double price_kwh,
                          double t_out, double t_ref_next, double q,
                          const ZoneParams& zp, const BuildingConfig& cfg,
                          double v, double rho);

class dual_search_error : public std::runtime_error {
 public:
  dual_search_error(const std::string& what, double residual, int iterations)
      : std::runtime_error(what),
        residual_(residual),
        iterations_(iterations) {}
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

// Shared bracketing/bisection state for the coupling constraint, driven by
// observed rate sums. The same sequence of dual values is produced whether
// the sums come from the in-process solver or from coordination replies,
// which is what makes the two paths decision-identical.
//
// Acceptance requires the observed sum to sit in [cap - eps, cap]; only
// sums on the feasible side are accepted so the cap is never exceeded.
class CapSearch {
 public:
  CapSearch(double cap, double eps = kDefaultEps, int max_iter = kMaxIter);

  enum class Step { accept, next, fail };

  double current_rho() const { return rho_; }
  int iterations() const { return iterations_; }
  double last_residual() const { return last_residual_; }

  // Feed the total rate observed at current_rho().
  Step observe(double sum);

  static constexpr double kDefaultEps = 1e-6;  // g/s on the coupling residual
  static constexpr int kMaxIter = 200;

 private:
  enum class Phase { at_zero, doubling, bisecting } phase_ = Phase::at_zero;
  double cap_;
  double eps_;
  int max_iter_;
  double rho_ = 0.0;
  double lo_ = 0.0;
  double hi_ = 0.0;
  int iterations_ = 0;
  double last_residual_ = 0.0;
};

struct SolveResult {
  std::vector<double> rates;
  double rho = 0.0;
  int iterations = 0;      // rate-vector evaluations
  double residual = 0.0;   // cap - sum(rates) at acceptance
  bool cap_active = false;
};

// Full per-slot optimization: clamped closed form, then the dual search
// when the building cap binds.
SolveResult solve_p3(std::span<const ZoneState> states,
                     const SlotObservation& obs,
                     std::span<const ZoneParams> zones,
                     const BuildingConfig& cfg, const TuningBundle& tuning);

struct StepResult {
  std::vector<double> rates;
  std::vector<ZoneState> next;
  CostBreakdown cost;
  SolveResult solve;
};

// One control slot: solve, advance temperatures, advance queues via the
// recursion, and price the realized decision with the exact cost model.
StepResult cdra_step(std::span<const ZoneState> states,
                     const SlotObservation& obs,
                     std::span<const ZoneParams> zones,
                     const BuildingConfig& cfg, const TuningBundle& tuning);

}  // namespace hvac
