#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hvac/baselines.hpp"
#include "hvac/config.hpp"
#include "hvac/solver.hpp"
#include "hvac/traces.hpp"

// The month-long simulation loop, run reports, and file emission.

namespace hvac {

class simulation_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when the controllability checks reject a configuration and no
// override was given.
class controllability_refused : public simulation_error {
  using simulation_error::simulation_error;
};

// One decision slot across all zones.
struct SlotRecord {
  int slot = 0;
  double price = 0.0;
  double t_out = 0.0;
  std::vector<double> t_before;
  std::vector<double> queue_before;
  std::vector<double> t_ref_next;
  std::vector<double> q;
  std::vector<double> rates;
  std::vector<double> t_after;
  std::vector<double> queue_after;
  CostBreakdown cost;
  int solver_iterations = 0;
  double solver_rho = 0.0;
};

struct Aggregates {
  double discomfort = 0.0;
  double fan = 0.0;
  double coil = 0.0;
  double energy = 0.0;  // fan + coil
  double total = 0.0;
  double atd = 0.0;
};

struct RunReport {
  Controller controller = Controller::cdra;
  std::uint64_t seed = 0;
  int horizon = 0;
  std::vector<SlotRecord> slots;
  Aggregates aggregates;
  TuningBundle tuning;
  ControllabilityReport controllability;
  bool controllability_ok = false;
  int band_violations = 0;
  double wall_seconds = 0.0;  // timing metadata, excluded from
                              // reproducibility comparisons
};

// Executes the configured controller over horizon-1 decision slots.
// Refuses to start when the controllability checks fail unless
// override_controllability is set. A comfort-band violation aborts the run
// when the tuning guarantees apply (valid controllability, cdra/mcdra);
// under an override it is only counted.
RunReport run_simulation(const SimConfig& cfg, const TraceSet& traces,
                         const InputStreams& streams,
                         bool override_controllability = false);

// Convenience overload building traces and input streams from the config.
RunReport run_simulation(const SimConfig& cfg,
                         bool override_controllability = false);

Aggregates aggregate_slots(std::span<const SlotRecord> slots);

enum class ReportFormat { csv, json, both };

// CSV: one row per slot per zone; building-level columns (price, t_out,
// fan, coil, total) repeat across the zone rows of a slot. JSON: the
// aggregates plus the tuning audit.
void emit_report(const RunReport& report, ReportFormat format,
                 const std::filesystem::path& out_dir,
                 const std::string& stem);

std::string report_csv(const RunReport& report);
std::string report_json(const RunReport& report, bool include_timing = true);

// Parameter sweeps (the figure-style experiment grids). Every controller
// runs on the same traces and input streams at each value; points execute
// concurrently with isolated state.
struct SweepPoint {
  double value = 0.0;
  std::map<Controller, Aggregates> by_controller;
  double theta_over_v = 0.0;  // from the cdra tuning at this point
  bool controllability_ok = false;
};

std::vector<SweepPoint> run_sweep(const SimConfig& base,
                                  const std::string& param,
                                  std::span<const double> values,
                                  bool override_controllability = false);

std::string sweep_csv(std::span<const SweepPoint> points,
                      const std::string& param);
std::string sweep_json(std::span<const SweepPoint> points,
                       const std::string& param);

}  // namespace hvac
