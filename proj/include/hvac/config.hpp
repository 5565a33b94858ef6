#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hvac/building.hpp"
#include "hvac/traces.hpp"
#include "hvac/tuning.hpp"

// Single JSON configuration document. Keys mirror the struct field names;
// per-zone fields accept either a scalar (broadcast to all zones) or an
// array of length n_zones. Zone coefficients a, b, d are always derived
// from r_thermal/c_thermal, never read.

namespace hvac {

class config_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Controller { cdra, mcdra, b1, b2 };

Controller controller_from_string(const std::string& name);
std::string to_string(Controller c);

struct TraceConfig {
  enum class Source { synthetic, csv } source = Source::synthetic;
  SyntheticSpec synthetic;
  std::string price_csv;
  std::string weather_csv;
  double outdoor_shift = 0.0;
};

struct SimConfig {
  BuildingConfig building;
  std::vector<ZoneParams> zones;
  InputDistributions inputs;
  TraceConfig traces;
  int horizon = 8928;
  int slots_per_hour = 12;
  Controller controller = Controller::cdra;
  std::uint64_t seed = 1;
  TuningChoice tuning;
};

SimConfig load_config(const std::string& path);
SimConfig parse_config(const std::string& json_text);

TraceSet build_traces(const TraceConfig& tc, int slots_per_hour);

}  // namespace hvac
