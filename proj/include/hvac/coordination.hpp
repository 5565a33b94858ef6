#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "hvac/solver.hpp"

// Privacy-preserving distributed realization of the per-slot solve. The
// coordinator owns only the building cap; each zone agent owns its private
// slot data (comfort target, disturbance, weight, indoor temperature) and
// answers a dual-value broadcast with a rate. Only dual values and rates
// ever cross the boundary.
//
// Wire format (little-endian, fixed width):
//   frame    := u32 length | payload            length = payload bytes
//   payload  := 0x01 u32 iteration f64 rho      broadcast
//             | 0x02 u32 zone_id   f64 rate     reply
//             | 0x03 u32 count     f64*count    final decision
// Decoding is strict: unknown tags, short frames, and trailing bytes are
// errors.

namespace hvac {

struct BroadcastMsg {
  std::uint32_t iteration = 0;  // 1-based
  double rho = 0.0;
};

struct ReplyMsg {
  std::uint32_t zone_id = 0;
  double rate = 0.0;
};

struct FinalMsg {
  std::vector<double> rates;
};

using CoordinationMessage = std::variant<BroadcastMsg, ReplyMsg, FinalMsg>;

std::vector<std::uint8_t> encode_message(const CoordinationMessage& msg);
CoordinationMessage decode_message(std::span<const std::uint8_t> frame);

// Records every frame that crosses the agent/coordinator boundary, for the
// byte-level privacy audit.
struct FrameLog {
  std::vector<std::vector<std::uint8_t>> frames;
  void record(std::vector<std::uint8_t> frame) {
    frames.push_back(std::move(frame));
  }
};

// Per-zone agent. Everything needed to evaluate the zone's closed form is
// held locally; none of these fields are reachable from the codec.
class ZoneAgent {
 public:
  ZoneAgent(std::uint32_t zone_id, const ZoneParams& zp,
            const BuildingConfig& cfg, const ZoneState& state,
            double t_ref_next, double q, double price_kwh, double t_out,
            double v);

  ReplyMsg respond(const BroadcastMsg& broadcast) const;
  std::uint32_t zone_id() const { return zone_id_; }

 private:
  std::uint32_t zone_id_;
  ZoneParams zp_;
  BuildingConfig cfg_;
  ZoneState state_;
  double t_ref_next_;
  double q_;
  double price_kwh_;
  double t_out_;
  double v_;
};

// Drives the same bracketing search as the in-process solver, one round at
// a time. Work per reply per round is O(1).
class Coordinator {
 public:
  Coordinator(double m_total_cap, int n_zones,
              double eps = CapSearch::kDefaultEps,
              int max_iter = CapSearch::kMaxIter);

  BroadcastMsg initial() const { return BroadcastMsg{1, 0.0}; }

  // Feed one full round of replies; either the next broadcast or the final
  // decision. Throws std::runtime_error naming the zone on a missing or
  // duplicated reply, dual_search_error past the iteration cap.
  std::variant<BroadcastMsg, FinalMsg> round(std::span<const ReplyMsg> replies);

  int iterations() const { return search_.iterations(); }

 private:
  int n_zones_;
  CapSearch search_;
  std::uint32_t next_iteration_ = 1;
};

struct DistributedOutcome {
  std::vector<double> rates;
  int iterations = 0;
  std::size_t messages = 0;  // 2*N*iterations + N
};

// Runs one slot of the three-step loop (broadcast, reply, check), pushing
// every message through the codec; frames are mirrored into `log` when
// given.
DistributedOutcome run_distributed_slot(std::span<const ZoneAgent> agents,
                                        Coordinator& coordinator,
                                        FrameLog* log = nullptr);

// Convenience: builds agents for one slot from the centralized inputs.
std::vector<ZoneAgent> make_agents(std::span<const ZoneState> states,
                                   const SlotObservation& obs,
                                   std::span<const ZoneParams> zones,
                                   const BuildingConfig& cfg,
                                   const TuningBundle& tuning);

}  // namespace hvac
