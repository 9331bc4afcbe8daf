#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hrrm/core/ids.hpp"
#include "hrrm/core/network.hpp"
#include "hrrm/uts/history.hpp"

namespace hrrm::sim {

struct FlowReport {
  FlowId flow;
  UeId ue;
  TrafficClass cls = TrafficClass::embb;
  std::string mode;
  double arrived_bits = 0.0;
  /// Bits the MAC took off this flow's leg queues, summed over legs.
  double served_bits = 0.0;
  double delivered_bits = 0.0;
  double throughput_bps = 0.0;
  std::optional<double> latency_p50_ms;
  std::optional<double> latency_p95_ms;
  std::optional<double> latency_p99_ms;
  std::uint64_t sdus_arrived = 0;
  std::uint64_t sdus_delivered = 0;
  std::uint64_t sdus_lost = 0;
  std::uint64_t duplicates_discarded = 0;
  std::uint64_t deadline_misses = 0;
  /// Share of transmitted bits per leg cell.
  std::map<CellId, double> leg_split;
};

struct AccessReport {
  std::uint64_t attempts = 0;
  std::uint64_t successes = 0;
  std::uint64_t collisions = 0;
  std::uint64_t deferred = 0;
  double success_rate = 0.0;
};

struct MetricsReport {
  std::string name;
  std::uint64_t seed = 0;
  std::uint64_t slots = 0;
  double slot_seconds = 0.0;
  std::vector<FlowReport> flows;
  AccessReport access;
  /// Jain index over per-flow throughput; empty when undefined (no flow or all zero).
  std::map<TrafficClass, std::optional<double>> fairness;
  /// Granted over assigned PRB-slots per partition leaf, keyed "cell/leaf".
  std::map<std::string, double> partition_utilization;
  std::map<CellId, double> cell_served_bits;
  std::uint64_t uts_epochs = 0;
  std::uint64_t steering_actions = 0;
  std::uint64_t handovers = 0;
  std::uint64_t ping_pongs = 0;
  double total_delivered_bits = 0.0;
};

/// One row per flow per UTS epoch.
struct MetricsRow {
  std::uint64_t epoch = 0;
  std::uint64_t end_slot = 0;
  FlowId flow;
  UeId ue;
  TrafficClass cls = TrafficClass::embb;
  std::string mode;
  std::string legs;
  double arrived_bits = 0.0;
  double delivered_bits = 0.0;
  double throughput_bps = 0.0;
  std::uint64_t sdus_delivered = 0;
  std::uint64_t sdus_lost = 0;
};

struct WorldEvent {
  std::uint64_t slot = 0;
  std::string subsystem;
  std::string kind;
  std::string details;
  friend bool operator==(const WorldEvent&, const WorldEvent&) = default;
};

/// Moves or additions back onto a cell the UE left no more than `window`
/// epochs earlier.
std::uint64_t count_ping_pongs(const std::vector<uts::AttachmentChange>& changes,
                               std::uint64_t window);

}  // namespace hrrm::sim
