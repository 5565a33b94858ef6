#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hvac/building.hpp"

// Hourly exogenous traces and seeded per-slot input streams. Trace CSVs
// carry a `hour,value` header and one row per hour; hourly values are held
// constant across the slots of their hour.

namespace hvac {

class trace_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TraceSet {
  std::vector<double> price_hourly;  // currency/kWh
  std::vector<double> t_out_hourly;  // degC
  int slots_per_hour = 12;
  int horizon = 0;  // slots covered by both traces

  double price_at(int slot) const { return price_hourly[slot / slots_per_hour]; }
  double t_out_at(int slot) const { return t_out_hourly[slot / slots_per_hour]; }

  // Per-slot expansions over the first `slots` slots.
  std::vector<double> expand_price(int slots) const;
  std::vector<double> expand_t_out(int slots) const;
};

// Parses the two hourly CSVs and applies the additive shift to the weather
// trace before anything else sees it. Malformed rows are reported with
// their line number.
TraceSet load_traces(const std::string& price_csv_path,
                     const std::string& weather_csv_path, double shift_c,
                     int slots_per_hour = 12);

// Synthetic month: two-tier day/night price and a sinusoidal diurnal
// outdoor temperature spanning exactly [t_low, t_high] (minimum at 04:00,
// maximum at 16:00).
struct SyntheticSpec {
  int days = 31;
  double price_night = 0.4;  // currency/kWh
  double price_day = 1.4;
  int day_start_hour = 10;  // [day_start, day_end) billed at the day rate
  int day_end_hour = 22;
  double t_low = 18.7;  // degC
  double t_high = 36.4;
  int slots_per_hour = 12;
};

TraceSet synthetic_traces(const SyntheticSpec& spec = {});

void write_trace_csv(const std::string& path,
                     const std::vector<double>& hourly);

// Seeded stochastic inputs: comfort targets drawn per hour per zone from
// the integer-uniform support and held across the hour's slots;
// disturbances drawn fresh per slot per zone from the uniform support.
// Identical (seed, n_zones, horizon, dists) always yields identical
// streams; sampling does not depend on platform distribution internals.
struct InputStreams {
  std::vector<std::vector<double>> t_ref;  // [zone][slot]
  std::vector<std::vector<double>> q;      // [zone][slot]
};

InputStreams sample_inputs(std::uint64_t seed, int n_zones, int horizon,
                           const InputDistributions& dists,
                           int slots_per_hour = 12);

}  // namespace hvac
