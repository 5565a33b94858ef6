#pragma once

#include <span>
#include <vector>

#include "hvac/solver.hpp"

// The three comparison controllers. B1 tracks the comfort target with
// proportional scaling under the shared cap. B2 greedily minimizes the
// current slot cost (same quadratic fan surrogate as the solver, so the
// two differ only by the queue term and the constraint set) inside the
// comfort-preserving rate intervals. MCDRA is the adaptive-shift variant
// that re-derives delta from the comfort weights each slot.

namespace hvac {

// Per zone: rate landing exactly on the comfort target, clamped to the box;
// if the total exceeds the cap every zone is scaled by cap/total. Throws
// std::domain_error when a zone is not in cooling mode.
std::vector<double> b1_step(std::span<const ZoneState> states,
                            const SlotObservation& obs,
                            std::span<const ZoneParams> zones,
                            const BuildingConfig& cfg);

struct B2Result {
  std::vector<double> rates;
  std::vector<bool> interval_empty;  // zone flagged, projected to the
                                     // nearest feasible bound
  bool cap_infeasible = false;       // comfort lower bounds alone exceed the
                                     // cap; rates proportionally scaled
};

B2Result b2_step(std::span<const ZoneState> states, const SlotObservation& obs,
                 std::span<const ZoneParams> zones, const BuildingConfig& cfg);

// Comfort-weighted shift: blend of the comfort target and the reference
// shift, projected into [delta_min, delta_max]. phi_max must be positive.
double mcdra_delta(double phi, double phi_max, double t_ref_next,
                   double delta_min, double delta_max);

// Re-derives each zone's shift from this slot's comfort target, rebuilds
// the queues from the definition Q = T + delta, and runs the normal
// control step. With all weights zero the shift formula is undefined and
// the step is exactly the fixed-shift controller.
StepResult mcdra_step(std::span<const ZoneState> states,
                      const SlotObservation& obs,
                      std::span<const ZoneParams> zones,
                      const BuildingConfig& cfg, const TuningBundle& tuning);

}  // namespace hvac
