#include "hvac/traces.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <random>

namespace hvac {

namespace {

std::vector<double> parse_hourly_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw trace_error("cannot open trace file: " + path);
  }
  std::vector<double> values;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != "hour,value") {
        throw trace_error(path + ":1: expected header 'hour,value'");
      }
      continue;
    }
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw trace_error(path + ":" + std::to_string(line_no) +
                        ": missing comma");
    }
    const std::string hour_str = line.substr(0, comma);
    const std::string value_str = line.substr(comma + 1);
    char* end = nullptr;
    const long hour = std::strtol(hour_str.c_str(), &end, 10);
    if (end == hour_str.c_str() || *end != '\0' ||
        hour != static_cast<long>(values.size())) {
      throw trace_error(path + ":" + std::to_string(line_no) +
                        ": hour column must count 0,1,2,...");
    }
    end = nullptr;
    const double value = std::strtod(value_str.c_str(), &end);
    if (end == value_str.c_str() || *end != '\0' || !std::isfinite(value)) {
      throw trace_error(path + ":" + std::to_string(line_no) +
                        ": bad value '" + value_str + "'");
    }
    values.push_back(value);
  }
  if (values.empty()) {
    throw trace_error(path + ": no data rows");
  }
  return values;
}

}  // namespace

std::vector<double> TraceSet::expand_price(int slots) const {
  std::vector<double> out(slots);
  for (int t = 0; t < slots; ++t) out[t] = price_at(t);
  return out;
}

std::vector<double> TraceSet::expand_t_out(int slots) const {
  std::vector<double> out(slots);
  for (int t = 0; t < slots; ++t) out[t] = t_out_at(t);
  return out;
}

TraceSet load_traces(const std::string& price_csv_path,
                     const std::string& weather_csv_path, double shift_c,
                     int slots_per_hour) {
  TraceSet set;
  set.slots_per_hour = slots_per_hour;
  set.price_hourly = parse_hourly_csv(price_csv_path);
  set.t_out_hourly = parse_hourly_csv(weather_csv_path);
  for (double& t : set.t_out_hourly) t += shift_c;
  const std::size_t hours =
      std::min(set.price_hourly.size(), set.t_out_hourly.size());
  set.horizon = static_cast<int>(hours) * slots_per_hour;
  return set;
}

TraceSet synthetic_traces(const SyntheticSpec& spec) {
  TraceSet set;
  set.slots_per_hour = spec.slots_per_hour;
  const int hours = spec.days * 24;
  set.price_hourly.resize(hours);
  set.t_out_hourly.resize(hours);
  // Anchored at t_low so the coolest hour (04:00) hits the range floor
  // exactly; the warmest hour (16:00) lands within rounding of t_high.
  const double span = spec.t_high - spec.t_low;
  for (int h = 0; h < hours; ++h) {
    const int hod = h % 24;
    set.price_hourly[h] =
        (hod >= spec.day_start_hour && hod < spec.day_end_hour)
            ? spec.price_day
            : spec.price_night;
    set.t_out_hourly[h] =
        spec.t_low +
        0.5 * span *
            (1.0 - std::cos(2.0 * std::numbers::pi * (hod - 4) / 24.0));
  }
  set.horizon = hours * spec.slots_per_hour;
  return set;
}

void write_trace_csv(const std::string& path,
                     const std::vector<double>& hourly) {
  std::ofstream out(path);
  if (!out) {
    throw trace_error("cannot write trace file: " + path);
  }
  out << "hour,value\n";
  char buf[64];
  for (std::size_t h = 0; h < hourly.size(); ++h) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", h, hourly[h]);
    out << buf;
  }
}

InputStreams sample_inputs(std::uint64_t seed, int n_zones, int horizon,
                           const InputDistributions& dists,
                           int slots_per_hour) {
  std::mt19937_64 rng(seed);
  // Engine output is consumed directly so the streams do not depend on
  // library distribution implementations.
  auto uniform01 = [&rng]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  const int levels =
      static_cast<int>(dists.t_ref_hi - dists.t_ref_lo + 0.5) + 1;
  auto draw_t_ref = [&]() {
    return dists.t_ref_lo + static_cast<double>(rng() % levels);
  };

  InputStreams streams;
  streams.t_ref.assign(n_zones, std::vector<double>(horizon));
  streams.q.assign(n_zones, std::vector<double>(horizon));
  const int hours = (horizon + slots_per_hour - 1) / slots_per_hour;
  // Draw order is part of the reproducibility contract: all hourly comfort
  // targets first (hour-major, zone-minor), then all disturbances
  // (slot-major, zone-minor).
  std::vector<std::vector<double>> hourly(n_zones,
                                          std::vector<double>(hours));
  for (int h = 0; h < hours; ++h) {
    for (int i = 0; i < n_zones; ++i) hourly[i][h] = draw_t_ref();
  }
  for (int t = 0; t < horizon; ++t) {
    for (int i = 0; i < n_zones; ++i) {
      streams.t_ref[i][t] = hourly[i][t / slots_per_hour];
      streams.q[i][t] = dists.q_lo + (dists.q_hi - dists.q_lo) * uniform01();
    }
  }
  return streams;
}

}  // namespace hvac
