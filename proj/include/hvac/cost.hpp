#pragma once

#include <span>
#include <utility>

#include "hvac/building.hpp"

// Per-slot cost components and trajectory metrics. This is the only place
// that converts prices; every other module passes currency/kWh through and
// calls price_per_joule at the point of use.

namespace hvac {

inline constexpr double kJoulesPerKwh = 3.6e6;

inline double price_per_joule(double price_kwh) {
  return price_kwh / kJoulesPerKwh;
}

struct CostBreakdown {
  double discomfort = 0.0;
  double fan = 0.0;
  double coil = 0.0;
  double total = 0.0;
};

// sum_i phi_i * (t_next_i - t_ref_i)^2
double discomfort_cost(std::span<const double> t_next,
                       std::span<const double> t_ref,
                       std::span<const double> phi);

// mu * (sum m)^3 W over one slot, charged at the slot price.
double fan_cost(std::span<const double> rates, double price_kwh,
                const BuildingConfig& cfg);

// Cooling-coil draw in W: sum_i m_i * Ca/(eta*COP) * (gamma*T_i +
// (1-gamma)*T_out - Ts). Well-defined at zero airflow.
double coil_power(std::span<const double> rates, std::span<const double> t_in,
                  double t_out, const BuildingConfig& cfg);

double coil_cost(double power_w, double price_kwh, const BuildingConfig& cfg);

// Composition of the three components with the exact cubic fan term. The
// quadratic fan surrogate exists only inside the solver objective; realized
// costs are always exact.
CostBreakdown slot_total_cost(std::span<const double> t_in,
                              std::span<const double> rates,
                              const SlotObservation& obs,
                              std::span<const ZoneParams> zones,
                              const BuildingConfig& cfg);

// Mean absolute deviation of achieved temperatures from the comfort targets
// over all zone-slots. Throws std::invalid_argument on an empty trajectory.
double atd(std::span<const std::pair<double, double>> achieved_vs_target);

}  // namespace hvac
