#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hvac/building.hpp"

// Envelope extraction and the controller's tuning constants: the feasible
// control-parameter range (v_max, per-zone delta band), the queue
// saturation thresholds, the drift constant, and the optimality-gap
// constant. All formulas are evaluated exactly as the control design
// states them; two of them carry known unit quirks that are kept verbatim
// (see notes at compute_tuning).

namespace hvac {

// Componentwise extrema of the exogenous inputs over a full run, plus the
// per-zone extrema of the marginal coil price
//   g = S * tau * Ca/(eta*COP) * (gamma*T_i + (1-gamma)*T_out - Ts)
// evaluated over the box (S, T_i, T_out) with sign taken into account.
// g values use the per-joule price; s_min/s_max stay in currency/kWh.
struct ParameterEnvelope {
  double s_min = 0.0;
  double s_max = 0.0;
  double t_out_min = 0.0;
  double t_out_max = 0.0;
  std::vector<double> q_min;
  std::vector<double> q_max;
  std::vector<double> t_ref_max;
  std::vector<double> g_min;
  std::vector<double> g_max;

  ExogenousExtrema exogenous() const {
    return {t_out_min, t_out_max, q_min, q_max};
  }
};

ParameterEnvelope compute_envelope(std::span<const double> prices_kwh,
                                   std::span<const double> t_out,
                                   const InputDistributions& dists,
                                   std::span<const ZoneParams> zones,
                                   const BuildingConfig& cfg);

// How v and delta are chosen. Defaults are the reference operating point:
// v at its maximum, delta at the low end of its band.
struct TuningChoice {
  std::optional<double> v;  // nullopt: use v_max
  enum class DeltaMode { min, max, explicit_values } delta_mode =
      DeltaMode::min;
  std::vector<double> delta_values;  // used when explicit; projected into
                                     // [delta_min, delta_max] per zone
};

struct TuningBundle {
  double v = 0.0;
  double v_max = 0.0;
  std::vector<double> delta;
  std::vector<double> delta_min;
  std::vector<double> delta_max;
  std::vector<double> b_drift;  // per-zone drift constant B_i
  std::vector<double> q_lo;     // queue threshold below which rate = m_min
  std::vector<double> q_hi;     // queue threshold above which rate <= m_max
  double theta = 0.0;           // optimality-gap constant
  // Inputs and intermediates kept for the JSON audit.
  ParameterEnvelope envelope;
  std::vector<double> hbar;       // feasibility numerators
  std::vector<double> upsilon;    // v_max denominators
  std::vector<double> kappa_min;  // delta band numerators
  std::vector<double> kappa_max;
};

// Evaluates the tuning formulas for the given envelope. Throws
// std::invalid_argument when v_max is not positive (the drift margin
// inequality fails), when an explicit v lies outside (0, v_max], or when a
// zone's delta band is inverted beyond floating-point tolerance.
TuningBundle compute_tuning(const ParameterEnvelope& envelope,
                            std::span<const ZoneParams> zones,
                            const BuildingConfig& cfg,
                            const TuningChoice& choice = {});

// Full audit export: every constant together with the inputs it was
// computed from.
std::string tuning_to_json(const TuningBundle& bundle, int indent = 2);

}  // namespace hvac
