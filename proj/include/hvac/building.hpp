#pragma once

#include <span>
#include <vector>

// Discrete-time RC thermal model of a multizone building served by a single
// AHU. Units throughout: temperature degC, air mass rate g/s, power W,
// energy J, slot length s. Electricity prices are carried as currency/kWh
// and converted to currency/J only inside cost computations (see cost.hpp).

namespace hvac {

// Per-zone physical constants and derived one-slot coefficients.
//   a = tau / (R * C)        dimensionless leak toward outdoor air
//   b = tau * Ca / C         degC cooling per (g/s) per degC of (T - Ts)
//   d = 1 - a
struct ZoneParams {
  double r_thermal = 0.0;  // thermal resistance, degC/W
  double c_thermal = 0.0;  // thermal capacitance, J/degC
  double a = 0.0;
  double b = 0.0;
  double d = 0.0;
  double t_min = 0.0;  // comfort band, degC
  double t_max = 0.0;
  double m_min = 0.0;  // VAV box rate limits, g/s
  double m_max = 0.0;
  double phi = 0.0;    // discomfort weight, currency/degC^2
  double delta = 0.0;  // virtual-queue shift, degC (set from tuning)
};

// Shared plant constants.
struct BuildingConfig {
  int n_zones = 0;
  double tau = 0.0;          // slot length, s
  double c_air = 0.0;        // specific heat of air, J/(g*degC)
  double t_supply = 0.0;     // supply air temperature, degC
  double gamma = 0.0;        // AHU damper position in [0,1]
  double eta = 0.0;          // cooling-coil efficiency factor
  double cop = 0.0;          // chiller coefficient of performance
  double mu = 0.0;           // fan coefficient, W/(g/s)^3
  double m_total_cap = 0.0;  // building airflow cap, g/s
};

// Exogenous inputs for one decision slot. t_ref holds the next-slot
// comfort targets (decided by occupants at the current slot).
struct SlotObservation {
  double price = 0.0;  // currency/kWh
  double t_out = 0.0;  // degC
  std::vector<double> t_ref;  // per zone, degC
  std::vector<double> q;      // per zone external disturbance, W
};

// Supports of the stochastic per-slot inputs (uniform q, integer-uniform
// t_ref held per hour).
struct InputDistributions {
  double q_lo = 0.1;
  double q_hi = 0.2;
  double t_ref_lo = 21.0;
  double t_ref_hi = 23.0;
};

struct Coefficients {
  double a = 0.0;
  double b = 0.0;
  double d = 0.0;
};

// One-slot discretization of the RC dynamics. Rejects non-positive inputs
// and slot lengths long enough to make a >= 1 (the forward difference is
// no longer a valid model there).
Coefficients derive_coefficients(double r_thermal, double c_thermal,
                                 double tau, double c_air);

// T' = d*T + b*m*(Ts - T) + a*Tout + (tau/C)*q. Pure function.
double step_temperature(double t_in, double m, double t_out, double q,
                        const ZoneParams& zp, const BuildingConfig& cfg);

// Closed interval of rates keeping the next temperature inside the comfort
// band, already intersected with [m_min, m_max]. lo > hi marks emptiness;
// the clamped endpoints are kept so callers can pick the nearest feasible
// bound.
struct RateInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool empty() const { return lo > hi; }
};

// Inverts the dynamics against the comfort band. Requires cooling mode
// (t_in > Ts); throws std::domain_error otherwise.
RateInterval comfort_rate_interval(double t_in, double t_out, double q,
                                   const ZoneParams& zp,
                                   const BuildingConfig& cfg);

// Extrema of the exogenous inputs used by the controllability checks and
// the tuning calculators.
struct ExogenousExtrema {
  double t_out_min = 0.0;
  double t_out_max = 0.0;
  std::vector<double> q_min;  // per zone, W
  std::vector<double> q_max;
};

// Controllability report. Each inequality is evaluated literally; slack is
// LHS - RHS oriented so that pass means slack >= 0 (strictly > 0 for the
// drift margin).
struct ZoneControllability {
  double min_rate_slack = 0.0;  // holding at m_min cannot undercool
  double drift_margin = 0.0;    // positivity of the tuning numerator
  double damping_slack = 0.0;   // d - b*m_min
  double cap_share = 0.0;       // this zone's term of the airflow-cap bound
  bool min_rate_ok() const { return min_rate_slack >= 0.0; }
  bool drift_ok() const { return drift_margin > 0.0; }
  bool damping_ok() const { return damping_slack >= 0.0; }
};

struct ControllabilityReport {
  std::vector<ZoneControllability> zones;
  double cap_slack = 0.0;  // m_total_cap - sum of cap shares
  bool cap_ok() const { return cap_slack >= 0.0; }
  bool ok() const;
};

ControllabilityReport validate_controllability(
    std::span<const ZoneParams> zones, const BuildingConfig& cfg,
    const ExogenousExtrema& env);

// Structural checks on a configuration (coefficient identities, bound
// ordering, cooling-mode supply temperature, cap non-redundancy). Throws
// std::invalid_argument on the first violation.
void validate_parameters(std::span<const ZoneParams> zones,
                         const BuildingConfig& cfg);

}  // namespace hvac
