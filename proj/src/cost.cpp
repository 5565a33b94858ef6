#include "hvac/cost.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hvac {

double discomfort_cost(std::span<const double> t_next,
                       std::span<const double> t_ref,
                       std::span<const double> phi) {
  double sum = 0.0;
  for (std::size_t i = 0; i < t_next.size(); ++i) {
    const double dev = t_next[i] - t_ref[i];
    sum += phi[i] * dev * dev;
  }
  return sum;
}

double fan_cost(std::span<const double> rates, double price_kwh,
                const BuildingConfig& cfg) {
  const double total = std::accumulate(rates.begin(), rates.end(), 0.0);
  const double power = cfg.mu * total * total * total;
  return power * cfg.tau * price_per_joule(price_kwh);
}

double coil_power(std::span<const double> rates, std::span<const double> t_in,
                  double t_out, const BuildingConfig& cfg) {
  const double k = cfg.c_air / (cfg.eta * cfg.cop);
  double power = 0.0;
  for (std::size_t i = 0; i < rates.size(); ++i) {
    power += rates[i] * k *
             (cfg.gamma * t_in[i] + (1.0 - cfg.gamma) * t_out - cfg.t_supply);
  }
  return power;
}

double coil_cost(double power_w, double price_kwh, const BuildingConfig& cfg) {
  return power_w * cfg.tau * price_per_joule(price_kwh);
}

CostBreakdown slot_total_cost(std::span<const double> t_in,
                              std::span<const double> rates,
                              const SlotObservation& obs,
                              std::span<const ZoneParams> zones,
                              const BuildingConfig& cfg) {
  CostBreakdown out;
  std::vector<double> t_next(zones.size());
  std::vector<double> phi(zones.size());
  for (std::size_t i = 0; i < zones.size(); ++i) {
    t_next[i] = step_temperature(t_in[i], rates[i], obs.t_out, obs.q[i],
                                 zones[i], cfg);
    phi[i] = zones[i].phi;
  }
  out.discomfort = discomfort_cost(t_next, obs.t_ref, phi);
  out.fan = fan_cost(rates, obs.price, cfg);
  out.coil = coil_cost(coil_power(rates, t_in, obs.t_out, cfg), obs.price, cfg);
  out.total = out.discomfort + out.fan + out.coil;
  return out;
}

double atd(std::span<const std::pair<double, double>> achieved_vs_target) {
  if (achieved_vs_target.empty()) {
    throw std::invalid_argument("atd: empty trajectory");
  }
  double sum = 0.0;
  for (const auto& [achieved, target] : achieved_vs_target) {
    sum += std::abs(achieved - target);
  }
  return sum / static_cast<double>(achieved_vs_target.size());
}

}  // namespace hvac
