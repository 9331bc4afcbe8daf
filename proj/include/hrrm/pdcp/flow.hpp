#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hrrm/abstraction/descriptor.hpp"
#include "hrrm/core/ids.hpp"
#include "hrrm/core/network.hpp"

namespace hrrm::pdcp {

enum class FlowMode { aggregate, load_balance, duplicate };

std::string_view to_string(FlowMode mode);
std::optional<FlowMode> parse_flow_mode(std::string_view text);

/// Service class to flow-control mode used when legs are (re)configured.
using ServiceModeMap = std::map<TrafficClass, FlowMode>;
ServiceModeMap default_service_modes();

/// One connection leg. Routing reads only this record, so any radio that can
/// produce a CapabilityDescriptor can serve as a leg.
struct Leg {
  std::uint32_t leg_id = 0;
  CellId cell;
  CapabilityDescriptor descriptor;
  double queue_bits = 0.0;
  /// queue_bits / descriptor.capacity_score, in slots of the leg's cell.
  double delay_estimate = 0.0;
};

Leg make_leg(CellId cell, const CapabilityDescriptor& descriptor);

struct LoadBalanceThresholds {
  /// The active leg is left once its load exceeds this...
  double leave_above = 0.8;
  /// ...and only for a leg whose load is below this.
  double join_below = 0.5;
};

/// Maximum sequence number plus one. Runs stay well below it, so no wraparound.
inline constexpr std::uint32_t kSnSpace = 1u << 18;

struct FlowState {
  FlowId flow;
  TrafficClass service = TrafficClass::embb;
  FlowMode mode = FlowMode::aggregate;
  std::vector<Leg> legs;
  std::uint32_t next_sn = 0;
  std::size_t active_leg = 0;
  std::optional<std::uint64_t> last_switch_epoch;

  const Leg* find_leg(CellId cell) const;
};

/// Throws NoLegsError on an empty leg list and ModeArityError for duplicate
/// mode with fewer than two legs.
FlowState configure_legs(FlowId flow, std::vector<Leg> legs, FlowMode mode, TrafficClass service);

struct LegStatus {
  double queue_bits = 0.0;
  double load = 0.0;
};

/// Refreshes queue, load and delay estimate of every leg from MAC feedback.
/// `status` must have one entry per leg.
void refresh_legs(FlowState& state, std::span<const LegStatus> status);

struct Transmission {
  std::uint32_t leg_id = 0;
  CellId cell;
  std::uint32_t sn = 0;
  double bits = 0.0;
  friend bool operator==(const Transmission&, const Transmission&) = default;
};

/// Routes one SDU and consumes one sequence number.
///   aggregate    -> one copy on the leg with the smallest delay estimate
///   load_balance -> one copy on the active leg; the active leg moves at most
///                   once per epoch, only when its load is above leave_above and
///                   the least-loaded other leg is below join_below
///   duplicate    -> one copy per leg, same sequence number
/// Queued bits and delay estimates of the chosen legs grow by the SDU size.
/// Throws NoLegsError when the flow has no legs.
std::vector<Transmission> route_packet(FlowState& state, double bits, std::uint64_t epoch,
                                       const LoadBalanceThresholds& thresholds = {});

}  // namespace hrrm::pdcp
