#include "hrrm/pdcp/flow.hpp"

#include <stdexcept>

#include "hrrm/core/error.hpp"

namespace hrrm::pdcp {

std::string_view to_string(FlowMode mode) {
  switch (mode) {
    case FlowMode::aggregate: return "aggregate";
    case FlowMode::load_balance: return "load_balance";
    case FlowMode::duplicate: return "duplicate";
  }
  return "?";
}

std::optional<FlowMode> parse_flow_mode(std::string_view text) {
  for (auto m : {FlowMode::aggregate, FlowMode::load_balance, FlowMode::duplicate}) {
    if (to_string(m) == text) return m;
  }
  return std::nullopt;
}

ServiceModeMap default_service_modes() {
  return {{TrafficClass::urllc, FlowMode::duplicate},
          {TrafficClass::embb, FlowMode::aggregate},
          {TrafficClass::legacy_mbb, FlowMode::load_balance},
          {TrafficClass::mmtc, FlowMode::aggregate}};
}

namespace {

double delay_of(double queue_bits, const CapabilityDescriptor& d) {
  return d.capacity_score > 0.0 ? queue_bits / d.capacity_score : queue_bits;
}

}  // namespace

Leg make_leg(CellId cell, const CapabilityDescriptor& descriptor) {
  Leg leg;
  leg.leg_id = cell.value;
  leg.cell = cell;
  leg.descriptor = descriptor;
  return leg;
}

const Leg* FlowState::find_leg(CellId cell) const {
  for (const auto& l : legs) {
    if (l.cell == cell) return &l;
  }
  return nullptr;
}

FlowState configure_legs(FlowId flow, std::vector<Leg> legs, FlowMode mode, TrafficClass service) {
  if (legs.empty()) throw NoLegsError("flow " + to_string(flow) + " has no legs");
  if (mode == FlowMode::duplicate && legs.size() < 2) {
    throw ModeArityError("duplicate mode needs at least two legs");
  }
  FlowState state;
  state.flow = flow;
  state.service = service;
  state.mode = mode;
  state.legs = std::move(legs);
  for (auto& l : state.legs) l.delay_estimate = delay_of(l.queue_bits, l.descriptor);
  return state;
}

void refresh_legs(FlowState& state, std::span<const LegStatus> status) {
  if (status.size() != state.legs.size()) {
    throw std::invalid_argument("one leg status per leg expected");
  }
  for (std::size_t i = 0; i < status.size(); ++i) {
    Leg& leg = state.legs[i];
    leg.queue_bits = status[i].queue_bits;
    leg.descriptor.current_load = status[i].load;
    leg.delay_estimate = delay_of(leg.queue_bits, leg.descriptor);
  }
}

std::vector<Transmission> route_packet(FlowState& state, double bits, std::uint64_t epoch,
                                       const LoadBalanceThresholds& thresholds) {
  if (state.legs.empty()) throw NoLegsError("flow " + to_string(state.flow) + " has no legs");
  const std::uint32_t sn = state.next_sn++;
  std::vector<Transmission> out;

  auto send = [&](std::size_t i) {
    Leg& leg = state.legs[i];
    leg.queue_bits += bits;
    leg.delay_estimate = delay_of(leg.queue_bits, leg.descriptor);
    out.push_back({leg.leg_id, leg.cell, sn, bits});
  };

  switch (state.mode) {
    case FlowMode::aggregate: {
      std::size_t best = 0;
      for (std::size_t i = 1; i < state.legs.size(); ++i) {
        if (state.legs[i].delay_estimate < state.legs[best].delay_estimate) best = i;
      }
      send(best);
      break;
    }
    case FlowMode::load_balance: {
      if (state.active_leg >= state.legs.size()) state.active_leg = 0;
      const bool may_switch = !state.last_switch_epoch || *state.last_switch_epoch != epoch;
      const double own = state.legs[state.active_leg].descriptor.current_load;
      if (may_switch && own > thresholds.leave_above) {
        std::size_t alt = state.legs.size();
        for (std::size_t i = 0; i < state.legs.size(); ++i) {
          if (i == state.active_leg) continue;
          if (alt == state.legs.size() ||
              state.legs[i].descriptor.current_load < state.legs[alt].descriptor.current_load) {
            alt = i;
          }
        }
        if (alt != state.legs.size() &&
            state.legs[alt].descriptor.current_load < thresholds.join_below) {
          state.active_leg = alt;
          state.last_switch_epoch = epoch;
        }
      }
      send(state.active_leg);
      break;
    }
    case FlowMode::duplicate: {
      for (std::size_t i = 0; i < state.legs.size(); ++i) send(i);
      break;
    }
  }
  return out;
}

}  // namespace hrrm::pdcp
