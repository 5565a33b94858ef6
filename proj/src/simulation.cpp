#include "hvac/simulation.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>

#include "json.hpp"

namespace hvac {

namespace {

void append_num(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

std::vector<double> t_in_of(std::span<const ZoneState> states) {
  std::vector<double> out(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) out[i] = states[i].t_in;
  return out;
}

}  // namespace

RunReport run_simulation(const SimConfig& cfg, const TraceSet& traces,
                         const InputStreams& streams,
                         bool override_controllability) {
  const auto started = std::chrono::steady_clock::now();
  validate_parameters(cfg.zones, cfg.building);
  const int n = cfg.building.n_zones;
  const int horizon = cfg.horizon;
  if (horizon > traces.horizon) {
    throw trace_error("traces cover " + std::to_string(traces.horizon) +
                      " slots but the configured horizon is " +
                      std::to_string(horizon));
  }

  RunReport report;
  report.controller = cfg.controller;
  report.seed = cfg.seed;
  report.horizon = horizon;

  const std::vector<double> prices = traces.expand_price(horizon);
  const std::vector<double> t_outs = traces.expand_t_out(horizon);
  const ParameterEnvelope envelope =
      compute_envelope(prices, t_outs, cfg.inputs, cfg.zones, cfg.building);
  if (envelope.s_min < 0.0) {
    // A negative slot price flips the sign of the quadratic rate penalty
    // and the per-zone objective stops being convex in the rate.
    throw simulation_error("negative trace prices are not supported");
  }
  report.controllability = validate_controllability(cfg.zones, cfg.building,
                                                    envelope.exogenous());
  report.controllability_ok = report.controllability.ok();
  if (!report.controllability_ok && !override_controllability) {
    throw controllability_refused(
        "controllability checks failed; rerun with the override flag to "
        "simulate anyway");
  }
  report.tuning = compute_tuning(envelope, cfg.zones, cfg.building,
                                 cfg.tuning);

  std::vector<ZoneParams> zones(cfg.zones);
  std::vector<ZoneState> states(n);
  for (int i = 0; i < n; ++i) {
    zones[i].delta = report.tuning.delta[i];
    states[i].t_in = streams.t_ref[i][0];
    states[i].queue =
        init_queue(states[i].t_in, zones[i].delta, zones[i]);
  }

  const bool enforce_band =
      report.controllability_ok && (cfg.controller == Controller::cdra ||
                                    cfg.controller == Controller::mcdra);
  report.slots.reserve(horizon - 1);
  SlotObservation obs;
  obs.t_ref.resize(n);
  obs.q.resize(n);
  for (int t = 0; t < horizon - 1; ++t) {
    obs.price = prices[t];
    obs.t_out = t_outs[t];
    for (int i = 0; i < n; ++i) {
      obs.t_ref[i] = streams.t_ref[i][t + 1];
      obs.q[i] = streams.q[i][t];
    }

    SlotRecord rec;
    rec.slot = t;
    rec.price = obs.price;
    rec.t_out = obs.t_out;
    rec.t_before = t_in_of(states);
    rec.queue_before.resize(n);
    for (int i = 0; i < n; ++i) rec.queue_before[i] = states[i].queue;
    rec.t_ref_next = obs.t_ref;
    rec.q = obs.q;

    switch (cfg.controller) {
      case Controller::cdra: {
        StepResult step = cdra_step(states, obs, zones, cfg.building,
                                    report.tuning);
        rec.rates = step.rates;
        rec.cost = step.cost;
        rec.solver_iterations = step.solve.iterations;
        rec.solver_rho = step.solve.rho;
        states = std::move(step.next);
        break;
      }
      case Controller::mcdra: {
        StepResult step = mcdra_step(states, obs, zones, cfg.building,
                                     report.tuning);
        rec.rates = step.rates;
        rec.cost = step.cost;
        rec.solver_iterations = step.solve.iterations;
        rec.solver_rho = step.solve.rho;
        states = std::move(step.next);
        break;
      }
      case Controller::b1:
      case Controller::b2: {
        rec.rates = cfg.controller == Controller::b1
                        ? b1_step(states, obs, zones, cfg.building)
                        : b2_step(states, obs, zones, cfg.building).rates;
        rec.cost = slot_total_cost(rec.t_before, rec.rates, obs, zones,
                                   cfg.building);
        for (int i = 0; i < n; ++i) {
          states[i].t_in = step_temperature(states[i].t_in, rec.rates[i],
                                            obs.t_out, obs.q[i], zones[i],
                                            cfg.building);
          states[i].queue = states[i].t_in + zones[i].delta;
        }
        break;
      }
    }

    rec.t_after = t_in_of(states);
    rec.queue_after.resize(n);
    for (int i = 0; i < n; ++i) rec.queue_after[i] = states[i].queue;
    for (int i = 0; i < n; ++i) {
      if (rec.t_after[i] < zones[i].t_min || rec.t_after[i] > zones[i].t_max) {
        ++report.band_violations;
        if (enforce_band) {
          std::ostringstream diag;
          diag << "comfort band violated at slot " << t << " zone " << i
               << ": T=" << rec.t_after[i] << " band [" << zones[i].t_min
               << ", " << zones[i].t_max << "] rate=" << rec.rates[i]
               << " queue=" << rec.queue_after[i] << " price=" << rec.price
               << " t_out=" << rec.t_out;
          throw simulation_error(diag.str());
        }
      }
    }
    report.slots.push_back(std::move(rec));
  }

  report.aggregates = aggregate_slots(report.slots);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  return report;
}

RunReport run_simulation(const SimConfig& cfg, bool override_controllability) {
  const TraceSet traces = build_traces(cfg.traces, cfg.slots_per_hour);
  const InputStreams streams =
      sample_inputs(cfg.seed, cfg.building.n_zones, cfg.horizon, cfg.inputs,
                    cfg.slots_per_hour);
  return run_simulation(cfg, traces, streams, override_controllability);
}

Aggregates aggregate_slots(std::span<const SlotRecord> slots) {
  Aggregates agg;
  std::vector<std::pair<double, double>> deviations;
  for (const SlotRecord& rec : slots) {
    agg.discomfort += rec.cost.discomfort;
    agg.fan += rec.cost.fan;
    agg.coil += rec.cost.coil;
    for (std::size_t i = 0; i < rec.t_after.size(); ++i) {
      deviations.emplace_back(rec.t_after[i], rec.t_ref_next[i]);
    }
  }
  agg.energy = agg.fan + agg.coil;
  agg.total = agg.discomfort + agg.energy;
  agg.atd = deviations.empty() ? 0.0 : atd(deviations);
  return agg;
}

std::string report_csv(const RunReport& report) {
  std::string out =
      "slot,zone,price,t_out,t_ref_next,q,t_before,queue_before,rate,"
      "t_after,queue_after,discomfort,fan,coil,total\n";
  for (const SlotRecord& rec : report.slots) {
    for (std::size_t i = 0; i < rec.rates.size(); ++i) {
      out += std::to_string(rec.slot);
      out += ',';
      out += std::to_string(i);
      for (double v : {rec.price, rec.t_out, rec.t_ref_next[i], rec.q[i],
                       rec.t_before[i], rec.queue_before[i], rec.rates[i],
                       rec.t_after[i], rec.queue_after[i],
                       rec.cost.discomfort, rec.cost.fan, rec.cost.coil,
                       rec.cost.total}) {
        out += ',';
        append_num(out, v);
      }
      out += '\n';
    }
  }
  return out;
}

std::string report_json(const RunReport& report, bool include_timing) {
  nlohmann::json j;
  j["controller"] = to_string(report.controller);
  j["seed"] = report.seed;
  j["horizon"] = report.horizon;
  j["aggregates"] = {{"discomfort", report.aggregates.discomfort},
                     {"fan", report.aggregates.fan},
                     {"coil", report.aggregates.coil},
                     {"energy", report.aggregates.energy},
                     {"total", report.aggregates.total},
                     {"atd", report.aggregates.atd}};
  j["band_violations"] = report.band_violations;
  j["controllability_ok"] = report.controllability_ok;
  j["tuning"] = nlohmann::json::parse(tuning_to_json(report.tuning));
  if (include_timing) {
    j["wall_seconds"] = report.wall_seconds;
  }
  return j.dump(2);
}

void emit_report(const RunReport& report, ReportFormat format,
                 const std::filesystem::path& out_dir,
                 const std::string& stem) {
  if (report.slots.empty()) {
    throw simulation_error("emit_report: empty trajectory");
  }
  std::filesystem::create_directories(out_dir);
  auto write = [&](const std::string& name, const std::string& content) {
    const auto path = out_dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      throw simulation_error("cannot write " + path.string());
    }
    out << content;
  };
  if (format == ReportFormat::csv || format == ReportFormat::both) {
    write(stem + ".csv", report_csv(report));
  }
  if (format == ReportFormat::json || format == ReportFormat::both) {
    write(stem + ".json", report_json(report));
  }
}

std::vector<SweepPoint> run_sweep(const SimConfig& base,
                                  const std::string& param,
                                  std::span<const double> values,
                                  bool override_controllability) {
  if (param != "tmax" && param != "phi") {
    throw config_error("sweep param must be tmax or phi");
  }
  const TraceSet traces = build_traces(base.traces, base.slots_per_hour);
  const InputStreams streams =
      sample_inputs(base.seed, base.building.n_zones, base.horizon,
                    base.inputs, base.slots_per_hour);

  auto run_point = [&](double value) {
    SweepPoint point;
    point.value = value;
    SimConfig cfg = base;
    for (ZoneParams& zp : cfg.zones) {
      if (param == "tmax") {
        zp.t_max = value;
      } else {
        zp.phi = value;
      }
    }
    for (Controller ctl : {Controller::cdra, Controller::mcdra,
                           Controller::b1, Controller::b2}) {
      cfg.controller = ctl;
      RunReport report =
          run_simulation(cfg, traces, streams, override_controllability);
      point.by_controller[ctl] = report.aggregates;
      if (ctl == Controller::cdra) {
        point.theta_over_v = report.tuning.theta / report.tuning.v;
        point.controllability_ok = report.controllability_ok;
      }
    }
    return point;
  };

  std::vector<std::future<SweepPoint>> futures;
  futures.reserve(values.size());
  for (double v : values) {
    futures.push_back(std::async(std::launch::async, run_point, v));
  }
  std::vector<SweepPoint> points;
  points.reserve(values.size());
  for (auto& f : futures) points.push_back(f.get());
  return points;
}

std::string sweep_csv(std::span<const SweepPoint> points,
                      const std::string& param) {
  std::string out = param +
                    ",controller,discomfort,fan,coil,energy,total,atd,"
                    "theta_over_v,controllability_ok\n";
  for (const SweepPoint& p : points) {
    for (const auto& [ctl, agg] : p.by_controller) {
      append_num(out, p.value);
      out += ',';
      out += to_string(ctl);
      for (double v : {agg.discomfort, agg.fan, agg.coil, agg.energy,
                       agg.total, agg.atd, p.theta_over_v}) {
        out += ',';
        append_num(out, v);
      }
      out += ',';
      out += p.controllability_ok ? "1" : "0";
      out += '\n';
    }
  }
  return out;
}

std::string sweep_json(std::span<const SweepPoint> points,
                       const std::string& param) {
  nlohmann::json arr = nlohmann::json::array();
  for (const SweepPoint& p : points) {
    nlohmann::json entry;
    entry[param] = p.value;
    entry["theta_over_v"] = p.theta_over_v;
    entry["controllability_ok"] = p.controllability_ok;
    for (const auto& [ctl, agg] : p.by_controller) {
      entry[to_string(ctl)] = {{"discomfort", agg.discomfort},
                               {"fan", agg.fan},
                               {"coil", agg.coil},
                               {"energy", agg.energy},
                               {"total", agg.total},
                               {"atd", agg.atd}};
    }
    arr.push_back(entry);
  }
  return arr.dump(2);
}

}  // namespace hvac
