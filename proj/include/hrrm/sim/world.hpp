#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hrrm/core/network.hpp"
#include "hrrm/mac/coordinator.hpp"
#include "hrrm/pdcp/receiver.hpp"
#include "hrrm/scenario/config.hpp"
#include "hrrm/sim/channel.hpp"
#include "hrrm/sim/report.hpp"
#include "hrrm/sim/traffic.hpp"
#include "hrrm/uts/controller.hpp"

namespace hrrm::sim {

/// What one cell's MAC did in one slot.
struct SlotObservation {
  std::uint64_t clock = 0;
  CellId cell;
  std::uint64_t cell_slot = 0;
  const CarrierGrid* grid = nullptr;
  const mac::MacSlotOutput* output = nullptr;
  const mac::PlanNode* plan = nullptr;
};

using SlotObserver = std::function<void(const SlotObservation&)>;

/// Slot-driven simulation of one scenario. The clock ticks at the finest
/// numerology present; coarser cells run their MAC every 2^(difference) ticks.
/// Each tick runs arrivals, UTS (at epoch boundaries), PDCP routing, MAC,
/// PHY delivery and metric accumulation, in that order.
class World {
 public:
  /// Validates the config; throws ValidationError before slot 0.
  World(scenario::ScenarioConfig config, std::uint64_t seed);
  ~World();
  World(const World&) = delete;
  World& operator=(const World&) = delete;

  void step_slot();
  /// Steps until the configured horizon, then closes the last metrics window.
  void run();

  void set_observer(SlotObserver observer) { observer_ = std::move(observer); }

  std::uint64_t clock() const noexcept { return clock_; }
  double slot_seconds() const noexcept { return slot_seconds_; }
  const scenario::ScenarioConfig& config() const noexcept { return config_; }
  const uts::NetworkState& network() const noexcept { return net_; }
  const std::vector<WorldEvent>& events() const noexcept { return events_; }
  const std::vector<MetricsRow>& metric_rows() const noexcept { return rows_; }
  const uts::UtsController* controller() const noexcept { return uts_.get(); }

  /// Bits queued for the flow over all its legs.
  double flow_backlog_bits(FlowId flow) const;
  double delivered_bits_total() const noexcept { return delivered_total_; }
  const pdcp::ReceiverState& receiver(FlowId flow) const;
  /// SNs delivered to the flow's application, in delivery order.
  const std::vector<std::uint32_t>& delivered_sns(FlowId flow) const;

  MetricsReport report() const;

 private:
  struct QueuedPdu {
    pdcp::Pdu pdu;
    double remaining = 0.0;
  };

  struct CellRuntime {
    CellRuntime(scenario::CellConfig c, Cell built) : config(std::move(c)), cell(std::move(built)) {}

    scenario::CellConfig config;
    Cell cell;
    CapabilityDescriptor descriptor;
    std::uint64_t stride = 1;
    std::unique_ptr<mac::MacCoordinator> mac;
    std::map<FlowId, std::deque<QueuedPdu>> queues;
    double routed_epoch_bits = 0.0;
    double served_bits = 0.0;
  };

  struct FlowRuntime {
    scenario::FlowConfig config;
    std::unique_ptr<TrafficGenerator> generator;
    pdcp::ReceiverState rx;
    std::set<CellId> legs_used;
    std::vector<std::uint32_t> delivered_sns;
    std::vector<double> latencies_slots;
    std::map<CellId, double> leg_bits;
    double arrived_bits = 0.0;
    double served_bits = 0.0;
    double delivered_bits = 0.0;
    std::uint64_t sdus_arrived = 0;
    std::uint64_t deadline_misses = 0;
    // Current metrics window.
    double window_arrived = 0.0;
    double window_delivered = 0.0;
    std::uint64_t window_sdus = 0;
    std::uint64_t window_lost_base = 0;
  };

  struct Completed {
    CellId cell;
    FlowId flow;
    QueuedPdu pdu;
  };

  Position ue_position(UeId ue, std::uint64_t clock) const;
  void log(const std::string& subsystem, const std::string& kind, const std::string& details);
  void run_uts();
  void forward_released_queues();
  void close_window();
  void route(FlowId flow, const std::vector<Arrival>& arrivals);
  void run_cell(CellRuntime& cell, std::vector<Completed>& completed);
  void deliver(const Completed& c);

  scenario::ScenarioConfig config_;
  std::uint64_t seed_;
  ChannelModel channel_;
  std::uint64_t clock_ = 0;
  double slot_seconds_ = 1e-3;
  std::uint64_t window_index_ = 0;
  std::uint64_t window_start_ = 0;
  bool closed_ = false;

  std::map<CellId, CellRuntime> cells_;
  std::map<FlowId, FlowRuntime> flows_;
  uts::NetworkState net_;
  std::unique_ptr<uts::UtsController> uts_;
  pdcp::LoadBalanceThresholds lb_;

  std::map<UeId, double> ue_window_arrived_;
  std::map<UeId, double> ue_window_delivered_;

  std::map<std::string, double> leaf_granted_;
  std::map<std::string, double> leaf_assigned_;
  AccessReport access_;
  std::uint64_t steering_actions_ = 0;
  double delivered_total_ = 0.0;

  std::vector<WorldEvent> events_;
  std::vector<MetricsRow> rows_;
  SlotObserver observer_;
};

struct SimulationResult {
  MetricsReport report;
  std::vector<MetricsRow> rows;
  std::vector<WorldEvent> events;
};

/// Runs the scenario to its horizon.
SimulationResult simulate(const scenario::ScenarioConfig& config, std::uint64_t seed,
                          const SlotObserver& observer = {});

MetricsReport run_scenario(const scenario::ScenarioConfig& config, std::uint64_t seed);

}  // namespace hrrm::sim
