#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace hrrm::pdcp {

inline constexpr std::uint64_t kDefaultReorderSlots = 50;

struct Pdu {
  std::uint32_t sn = 0;
  double bits = 0.0;
  /// Slot the SDU entered PDCP at the sender; carried for latency accounting.
  std::uint64_t created_slot = 0;
  friend bool operator==(const Pdu&, const Pdu&) = default;
};

/// Receive side of one flow: in-order, duplicate-free delivery.
struct ReceiverState {
  std::uint32_t expected_sn = 0;
  std::map<std::uint32_t, Pdu> buffer;
  /// Slot at which the current gap was first observed.
  std::optional<std::uint64_t> timer_started;
  std::uint64_t t_reorder = kDefaultReorderSlots;

  std::uint64_t delivered = 0;
  std::uint64_t duplicates = 0;
  std::uint64_t lost = 0;
};

/// Accepts one PDU. In-order PDUs (and any buffered run behind them) are
/// delivered at once; PDUs ahead of a gap are buffered and arm the reorder
/// timer; PDUs already delivered, declared lost or buffered are discarded.
std::vector<Pdu> reorder_deliver(ReceiverState& rx, const Pdu& pdu, std::uint64_t now);

/// When the reorder timer has run for t_reorder slots, declares the missing
/// SNs below the lowest buffered one lost and releases the buffered run. A
/// gap still left behind restarts the timer at `now`.
std::vector<Pdu> expire_reorder_timer(ReceiverState& rx, std::uint64_t now);

}  // namespace hrrm::pdcp
