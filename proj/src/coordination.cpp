#include "hvac/coordination.hpp"

#include <cstring>
#include <stdexcept>
#include <string>

namespace hvac {

namespace {

constexpr std::uint8_t kTagBroadcast = 0x01;
constexpr std::uint8_t kTagReply = 0x02;
constexpr std::uint8_t kTagFinal = 0x03;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back((v >> (8 * i)) & 0xff);
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  for (int i = 0; i < 8; ++i) out.push_back((bits >> (8 * i)) & 0xff);
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}
  std::uint8_t u8() {
    need(1);
    return data_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{data_[pos_++]} << (8 * i);
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= std::uint64_t{data_[pos_++]} << (8 * i);
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
  }
  bool exhausted() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) {
    if (pos_ + n > data_.size()) {
      throw std::runtime_error("decode_message: truncated frame");
    }
  }
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode_message(const CoordinationMessage& msg) {
  std::vector<std::uint8_t> payload;
  if (const auto* b = std::get_if<BroadcastMsg>(&msg)) {
    payload.push_back(kTagBroadcast);
    put_u32(payload, b->iteration);
    put_f64(payload, b->rho);
  } else if (const auto* r = std::get_if<ReplyMsg>(&msg)) {
    payload.push_back(kTagReply);
    put_u32(payload, r->zone_id);
    put_f64(payload, r->rate);
  } else {
    const auto& f = std::get<FinalMsg>(msg);
    payload.push_back(kTagFinal);
    put_u32(payload, static_cast<std::uint32_t>(f.rates.size()));
    for (double v : f.rates) put_f64(payload, v);
  }
  std::vector<std::uint8_t> frame;
  frame.reserve(payload.size() + 4);
  put_u32(frame, static_cast<std::uint32_t>(payload.size()));
  frame.insert(frame.end(), payload.begin(), payload.end());
  return frame;
}

CoordinationMessage decode_message(std::span<const std::uint8_t> frame) {
  Reader r(frame);
  const std::uint32_t length = r.u32();
  if (frame.size() != std::size_t{length} + 4) {
    throw std::runtime_error("decode_message: length prefix mismatch");
  }
  const std::uint8_t tag = r.u8();
  CoordinationMessage msg;
  switch (tag) {
    case kTagBroadcast: {
      BroadcastMsg b;
      b.iteration = r.u32();
      b.rho = r.f64();
      msg = b;
      break;
    }
    case kTagReply: {
      ReplyMsg rep;
      rep.zone_id = r.u32();
      rep.rate = r.f64();
      msg = rep;
      break;
    }
    case kTagFinal: {
      FinalMsg f;
      const std::uint32_t count = r.u32();
      f.rates.reserve(count);
      for (std::uint32_t i = 0; i < count; ++i) f.rates.push_back(r.f64());
      msg = f;
      break;
    }
    default:
      throw std::runtime_error("decode_message: unknown tag " +
                               std::to_string(tag));
  }
  if (!r.exhausted()) {
    throw std::runtime_error("decode_message: trailing bytes");
  }
  return msg;
}

ZoneAgent::ZoneAgent(std::uint32_t zone_id, const ZoneParams& zp,
                     const BuildingConfig& cfg, const ZoneState& state,
                     double t_ref_next, double q, double price_kwh,
                     double t_out, double v)
    : zone_id_(zone_id),
      zp_(zp),
      cfg_(cfg),
      state_(state),
      t_ref_next_(t_ref_next),
      q_(q),
      price_kwh_(price_kwh),
      t_out_(t_out),
      v_(v) {}

ReplyMsg ZoneAgent::respond(const BroadcastMsg& broadcast) const {
  const double rate = dual_adjusted_rate(state_, price_kwh_, t_out_,
                                         t_ref_next_, q_, zp_, cfg_, v_,
                                         broadcast.rho);
  return ReplyMsg{zone_id_, rate};
}

Coordinator::Coordinator(double m_total_cap, int n_zones, double eps,
                         int max_iter)
    : n_zones_(n_zones), search_(m_total_cap, eps, max_iter) {}

std::variant<BroadcastMsg, FinalMsg> Coordinator::round(
    std::span<const ReplyMsg> replies) {
  std::vector<bool> seen(n_zones_, false);
  std::vector<double> rates(n_zones_, 0.0);
  double sum = 0.0;
  for (const ReplyMsg& r : replies) {
    if (r.zone_id >= static_cast<std::uint32_t>(n_zones_) || seen[r.zone_id]) {
      throw std::runtime_error("coordinator: duplicate or unknown zone " +
                               std::to_string(r.zone_id));
    }
    seen[r.zone_id] = true;
    rates[r.zone_id] = r.rate;
    sum += r.rate;
  }
  for (int i = 0; i < n_zones_; ++i) {
    if (!seen[i]) {
      throw std::runtime_error("coordinator: missing reply from zone " +
                               std::to_string(i));
    }
  }
  const CapSearch::Step step = search_.observe(sum);
  if (step == CapSearch::Step::accept) {
    return FinalMsg{std::move(rates)};
  }
  if (step == CapSearch::Step::fail) {
    throw dual_search_error("coordinator: dual search iteration cap exceeded",
                            search_.last_residual(), search_.iterations());
  }
  return BroadcastMsg{++next_iteration_, search_.current_rho()};
}

DistributedOutcome run_distributed_slot(std::span<const ZoneAgent> agents,
                                        Coordinator& coordinator,
                                        FrameLog* log) {
  DistributedOutcome out;
  // Every message physically round-trips through the codec so the audit
  // sees exactly the bytes the decisions were derived from.
  auto transfer = [&](const CoordinationMessage& msg) {
    std::vector<std::uint8_t> frame = encode_message(msg);
    CoordinationMessage delivered = decode_message(frame);
    if (log != nullptr) log->record(std::move(frame));
    ++out.messages;
    return delivered;
  };

  BroadcastMsg broadcast = coordinator.initial();
  while (true) {
    std::vector<ReplyMsg> replies;
    replies.reserve(agents.size());
    for (const ZoneAgent& agent : agents) {
      const auto delivered_b =
          std::get<BroadcastMsg>(transfer(CoordinationMessage{broadcast}));
      const ReplyMsg reply = agent.respond(delivered_b);
      replies.push_back(
          std::get<ReplyMsg>(transfer(CoordinationMessage{reply})));
    }
    auto outcome = coordinator.round(replies);
    if (auto* final_msg = std::get_if<FinalMsg>(&outcome)) {
      for (std::size_t i = 0; i < agents.size(); ++i) {
        auto delivered_f =
            std::get<FinalMsg>(transfer(CoordinationMessage{*final_msg}));
        if (i + 1 == agents.size()) {
          out.rates = std::move(delivered_f.rates);
        }
      }
      out.iterations = coordinator.iterations();
      return out;
    }
    broadcast = std::get<BroadcastMsg>(outcome);
  }
}

std::vector<ZoneAgent> make_agents(std::span<const ZoneState> states,
                                   const SlotObservation& obs,
                                   std::span<const ZoneParams> zones,
                                   const BuildingConfig& cfg,
                                   const TuningBundle& tuning) {
  std::vector<ZoneAgent> agents;
  agents.reserve(zones.size());
  for (std::size_t i = 0; i < zones.size(); ++i) {
    agents.emplace_back(static_cast<std::uint32_t>(i), zones[i], cfg,
                        states[i], obs.t_ref[i], obs.q[i], obs.price,
                        obs.t_out, tuning.v);
  }
  return agents;
}

}  // namespace hvac
