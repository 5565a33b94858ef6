// Command-line front end: simulate a month, print the tuning audit, run
// the experiment sweeps, or check controllability. Exit codes: 0 success,
// 2 validation failure, 1 runtime error.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hvac/simulation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;

hvac::ReportFormat parse_format(const std::string& f) {
  if (f == "csv") return hvac::ReportFormat::csv;
  if (f == "json") return hvac::ReportFormat::json;
  return hvac::ReportFormat::both;
}

void print_controllability(const hvac::ControllabilityReport& report) {
  for (std::size_t i = 0; i < report.zones.size(); ++i) {
    const auto& z = report.zones[i];
    std::printf("zone %zu: min-rate hold %s (slack %.6g), drift margin %s "
                "(%.6g), damping %s (%.6g), cap share %.6g\n",
                i, z.min_rate_ok() ? "PASS" : "FAIL", z.min_rate_slack,
                z.drift_ok() ? "PASS" : "FAIL", z.drift_margin,
                z.damping_ok() ? "PASS" : "FAIL", z.damping_slack,
                z.cap_share);
  }
  std::printf("building: airflow cap %s (slack %.6g)\n",
              report.cap_ok() ? "PASS" : "FAIL", report.cap_slack);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trace-driven multizone HVAC control simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string controller;
  std::string out_dir = "out";
  std::string format = "both";
  std::uint64_t seed = 0;
  bool override_controllability = false;

  auto* simulate = app.add_subcommand("simulate", "Run one month-long simulation");
  simulate->add_option("--config", config_path, "Config JSON path")->required();
  simulate->add_option("--controller", controller, "cdra|mcdra|b1|b2");
  auto* seed_opt = simulate->add_option("--seed", seed, "Input-stream seed");
  simulate->add_option("--out", out_dir, "Output directory");
  simulate->add_option("--format", format, "csv|json|both")
      ->check(CLI::IsMember({"csv", "json", "both"}));
  simulate->add_flag("--override-controllability", override_controllability,
                     "Run even when the controllability checks fail");

  auto* tune = app.add_subcommand("tune", "Print the tuning bundle as JSON");
  tune->add_option("--config", config_path, "Config JSON path")->required();

  std::string sweep_param;
  std::vector<double> sweep_values;
  auto* sweep = app.add_subcommand("sweep", "Run a tmax or phi experiment grid");
  sweep->add_option("--config", config_path, "Config JSON path")->required();
  sweep->add_option("--param", sweep_param, "tmax|phi")
      ->required()
      ->check(CLI::IsMember({"tmax", "phi"}));
  sweep->add_option("--values", sweep_values, "Grid values")
      ->required()
      ->delimiter(',');
  sweep->add_option("--out", out_dir, "Output directory");
  sweep->add_flag("--override-controllability", override_controllability,
                  "Run points whose controllability checks fail");

  auto* validate = app.add_subcommand("validate", "Run the controllability checks");
  validate->add_option("--config", config_path, "Config JSON path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    hvac::SimConfig cfg = hvac::load_config(config_path);

    if (validate->parsed()) {
      const hvac::TraceSet traces =
          hvac::build_traces(cfg.traces, cfg.slots_per_hour);
      const auto prices = traces.expand_price(std::min(cfg.horizon, traces.horizon));
      const auto t_outs = traces.expand_t_out(std::min(cfg.horizon, traces.horizon));
      const auto envelope = hvac::compute_envelope(prices, t_outs, cfg.inputs,
                                                   cfg.zones, cfg.building);
      const auto report = hvac::validate_controllability(
          cfg.zones, cfg.building, envelope.exogenous());
      print_controllability(report);
      return report.ok() ? kExitOk : kExitValidation;
    }

    if (tune->parsed()) {
      const hvac::TraceSet traces =
          hvac::build_traces(cfg.traces, cfg.slots_per_hour);
      const auto prices = traces.expand_price(std::min(cfg.horizon, traces.horizon));
      const auto t_outs = traces.expand_t_out(std::min(cfg.horizon, traces.horizon));
      const auto envelope = hvac::compute_envelope(prices, t_outs, cfg.inputs,
                                                   cfg.zones, cfg.building);
      const auto bundle =
          hvac::compute_tuning(envelope, cfg.zones, cfg.building, cfg.tuning);
      std::cout << hvac::tuning_to_json(bundle) << "\n";
      return kExitOk;
    }

    if (simulate->parsed()) {
      if (!controller.empty()) {
        cfg.controller = hvac::controller_from_string(controller);
      }
      if (seed_opt->count() > 0) cfg.seed = seed;
      hvac::RunReport report;
      try {
        report = hvac::run_simulation(cfg, override_controllability);
      } catch (const hvac::controllability_refused& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
      }
      const std::string stem =
          hvac::to_string(cfg.controller) + "_seed" + std::to_string(cfg.seed);
      hvac::emit_report(report, parse_format(format), out_dir, stem);
      std::printf("%s: total=%.6g energy=%.6g discomfort=%.6g atd=%.6g "
                  "band_violations=%d (%.2fs)\n",
                  hvac::to_string(cfg.controller).c_str(),
                  report.aggregates.total, report.aggregates.energy,
                  report.aggregates.discomfort, report.aggregates.atd,
                  report.band_violations, report.wall_seconds);
      return kExitOk;
    }

    // sweep
    const auto points = hvac::run_sweep(cfg, sweep_param, sweep_values,
                                        override_controllability);
    std::filesystem::create_directories(out_dir);
    const std::string stem = "sweep_" + sweep_param;
    {
      std::ofstream csv(std::filesystem::path(out_dir) / (stem + ".csv"),
                        std::ios::binary);
      csv << hvac::sweep_csv(points, sweep_param);
      std::ofstream js(std::filesystem::path(out_dir) / (stem + ".json"),
                       std::ios::binary);
      js << hvac::sweep_json(points, sweep_param);
    }
    for (const auto& p : points) {
      std::printf("%s=%g:", sweep_param.c_str(), p.value);
      for (const auto& [ctl, agg] : p.by_controller) {
        std::printf(" %s total=%.6g atd=%.4g |", hvac::to_string(ctl).c_str(),
                    agg.total, agg.atd);
      }
      std::printf("\n");
    }
    return kExitOk;
  } catch (const hvac::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
