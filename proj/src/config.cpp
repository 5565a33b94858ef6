#include "hvac/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace hvac {

using nlohmann::json;

Controller controller_from_string(const std::string& name) {
  if (name == "cdra") return Controller::cdra;
  if (name == "mcdra") return Controller::mcdra;
  if (name == "b1") return Controller::b1;
  if (name == "b2") return Controller::b2;
  throw config_error("unknown controller '" + name +
                     "' (expected cdra|mcdra|b1|b2)");
}

std::string to_string(Controller c) {
  switch (c) {
    case Controller::cdra: return "cdra";
    case Controller::mcdra: return "mcdra";
    case Controller::b1: return "b1";
    case Controller::b2: return "b2";
  }
  return "?";
}

namespace {

// Scalar-or-array per-zone field.
std::vector<double> zone_field(const json& zones, const char* key, int n,
                               bool required = true) {
  if (!zones.contains(key)) {
    if (required) {
      throw config_error(std::string("zones.") + key + " is required");
    }
    return std::vector<double>(n, 0.0);
  }
  const json& v = zones.at(key);
  std::vector<double> out;
  if (v.is_array()) {
    if (static_cast<int>(v.size()) != n) {
      throw config_error(std::string("zones.") + key + " must have " +
                         std::to_string(n) + " entries");
    }
    for (const auto& x : v) out.push_back(x.get<double>());
  } else {
    out.assign(n, v.get<double>());
  }
  return out;
}

TuningChoice parse_tuning(const json& j) {
  TuningChoice choice;
  if (!j.contains("tuning")) return choice;
  const json& t = j.at("tuning");
  if (t.contains("v")) {
    const json& v = t.at("v");
    if (v.is_string()) {
      if (v.get<std::string>() != "max") {
        throw config_error("tuning.v must be \"max\" or a number");
      }
    } else {
      choice.v = v.get<double>();
    }
  }
  if (t.contains("delta")) {
    const json& d = t.at("delta");
    if (d.is_string()) {
      const std::string mode = d.get<std::string>();
      if (mode == "min" || mode == "mcdra") {
        // The adaptive controller re-derives delta per slot; its bundle
        // starts from the band floor like the fixed-shift default.
        choice.delta_mode = TuningChoice::DeltaMode::min;
      } else if (mode == "max") {
        choice.delta_mode = TuningChoice::DeltaMode::max;
      } else {
        throw config_error("tuning.delta must be min|max|mcdra|number|array");
      }
    } else if (d.is_array()) {
      choice.delta_mode = TuningChoice::DeltaMode::explicit_values;
      for (const auto& x : d) choice.delta_values.push_back(x.get<double>());
    } else {
      choice.delta_mode = TuningChoice::DeltaMode::explicit_values;
      choice.delta_values.assign(1, d.get<double>());  // broadcast later
    }
  }
  return choice;
}

}  // namespace

SimConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw config_error(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    SimConfig cfg;
    const json& b = j.at("building");
    if (!b.at("n_zones").is_number_integer()) {
      throw config_error("building.n_zones must be an integer");
    }
    cfg.building.n_zones = b.at("n_zones").get<int>();
    cfg.building.tau = b.at("tau").get<double>();
    cfg.building.c_air = b.at("c_air").get<double>();
    cfg.building.t_supply = b.at("t_supply").get<double>();
    cfg.building.gamma = b.at("gamma").get<double>();
    cfg.building.eta = b.at("eta").get<double>();
    cfg.building.cop = b.at("cop").get<double>();
    cfg.building.mu = b.at("mu").get<double>();
    cfg.building.m_total_cap = b.at("m_total_cap").get<double>();

    const int n = cfg.building.n_zones;
    const json& z = j.at("zones");
    const auto r = zone_field(z, "r_thermal", n);
    const auto c = zone_field(z, "c_thermal", n);
    const auto t_min = zone_field(z, "t_min", n);
    const auto t_max = zone_field(z, "t_max", n);
    const auto m_min = zone_field(z, "m_min", n);
    const auto m_max = zone_field(z, "m_max", n);
    const auto phi = zone_field(z, "phi", n);
    cfg.zones.resize(n);
    for (int i = 0; i < n; ++i) {
      ZoneParams& zp = cfg.zones[i];
      zp.r_thermal = r[i];
      zp.c_thermal = c[i];
      const Coefficients k = derive_coefficients(
          zp.r_thermal, zp.c_thermal, cfg.building.tau, cfg.building.c_air);
      zp.a = k.a;
      zp.b = k.b;
      zp.d = k.d;
      zp.t_min = t_min[i];
      zp.t_max = t_max[i];
      zp.m_min = m_min[i];
      zp.m_max = m_max[i];
      zp.phi = phi[i];
    }

    if (j.contains("inputs")) {
      const json& in = j.at("inputs");
      cfg.inputs.q_lo = in.value("q_lo", cfg.inputs.q_lo);
      cfg.inputs.q_hi = in.value("q_hi", cfg.inputs.q_hi);
      cfg.inputs.t_ref_lo = in.value("t_ref_lo", cfg.inputs.t_ref_lo);
      cfg.inputs.t_ref_hi = in.value("t_ref_hi", cfg.inputs.t_ref_hi);
    }

    if (j.contains("traces")) {
      const json& tr = j.at("traces");
      const std::string source = tr.value("source", "synthetic");
      if (source == "synthetic") {
        cfg.traces.source = TraceConfig::Source::synthetic;
        SyntheticSpec& s = cfg.traces.synthetic;
        s.days = tr.value("days", s.days);
        s.price_night = tr.value("price_night", s.price_night);
        s.price_day = tr.value("price_day", s.price_day);
        s.day_start_hour = tr.value("day_start_hour", s.day_start_hour);
        s.day_end_hour = tr.value("day_end_hour", s.day_end_hour);
        s.t_low = tr.value("t_low", s.t_low);
        s.t_high = tr.value("t_high", s.t_high);
      } else if (source == "csv") {
        cfg.traces.source = TraceConfig::Source::csv;
        cfg.traces.price_csv = tr.at("price_csv").get<std::string>();
        cfg.traces.weather_csv = tr.at("weather_csv").get<std::string>();
        cfg.traces.outdoor_shift = tr.value("outdoor_shift", 0.0);
      } else {
        throw config_error("traces.source must be synthetic|csv");
      }
    }

    for (const char* key : {"horizon", "slots_per_hour"}) {
      if (j.contains(key) && !j.at(key).is_number_integer()) {
        throw config_error(std::string(key) + " must be an integer");
      }
    }
    cfg.horizon = j.value("horizon", cfg.horizon);
    cfg.slots_per_hour = j.value("slots_per_hour", cfg.slots_per_hour);
    cfg.traces.synthetic.slots_per_hour = cfg.slots_per_hour;
    if (j.contains("controller")) {
      cfg.controller =
          controller_from_string(j.at("controller").get<std::string>());
    }
    cfg.seed = j.value("seed", cfg.seed);
    cfg.tuning = parse_tuning(j);
    if (cfg.tuning.delta_mode == TuningChoice::DeltaMode::explicit_values &&
        cfg.tuning.delta_values.size() == 1) {
      cfg.tuning.delta_values.assign(n, cfg.tuning.delta_values[0]);
    }

    validate_parameters(cfg.zones, cfg.building);
    if (cfg.horizon < 2) {
      throw config_error("horizon must cover at least one decision slot");
    }
    for (const ZoneParams& zp : cfg.zones) {
      if (cfg.inputs.t_ref_lo < zp.t_min || cfg.inputs.t_ref_hi > zp.t_max) {
        throw config_error(
            "comfort-target support must lie inside every zone's band");
      }
    }
    return cfg;
  } catch (const json::exception& e) {
    throw config_error(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw config_error(std::string("config: ") + e.what());
  }
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw config_error("cannot open config file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

TraceSet build_traces(const TraceConfig& tc, int slots_per_hour) {
  if (tc.source == TraceConfig::Source::synthetic) {
    SyntheticSpec spec = tc.synthetic;
    spec.slots_per_hour = slots_per_hour;
    return synthetic_traces(spec);
  }
  return load_traces(tc.price_csv, tc.weather_csv, tc.outdoor_shift,
                     slots_per_hour);
}

}  // namespace hvac
