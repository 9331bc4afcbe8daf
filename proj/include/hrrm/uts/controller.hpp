#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hrrm/abstraction/common_unit.hpp"
#include "hrrm/pdcp/flow.hpp"
#include "hrrm/uts/features.hpp"
#include "hrrm/uts/history.hpp"
#include "hrrm/uts/types.hpp"

namespace hrrm::uts {

/// UTS epoch length in slots of the reference timeline.
inline constexpr std::uint64_t kDefaultEpochSlots = 100;

struct CellState {
  CellId id;
  std::string site;
  CapabilityDescriptor descriptor;
  /// Raw occupancy report; passes through the unit translator.
  RawMeasurement load{"queue_occupancy", 0.0, 1.0};
  double epoch_capacity_bits = 0.0;
};

struct UeState {
  UeId id;
  CellId serving;
  std::vector<CellId> secondaries;
  bool dc_capable = false;
  /// Raw per-cell signal reports.
  std::map<CellId, RawMeasurement> measurements;
  double offered_bits = 0.0;
  double achieved_bps = 0.0;
  double target_bps = 0.0;
  std::map<FlowId, pdcp::FlowState> flows;

  /// Serving cell first, then secondaries in the order they were added.
  std::vector<CellId> leg_cells() const;
};

/// Attachments and per-flow PDCP state the UTS steers.
struct NetworkState {
  std::string scenario = "default";
  std::map<CellId, CellState> cells;
  std::map<UeId, UeState> ues;
  pdcp::ServiceModeMap service_modes = pdcp::default_service_modes();

  /// Adds a flow whose legs follow the UE's current attachment.
  void add_flow(UeId ue, FlowId flow, TrafficClass service);
};

struct UtsEvent {
  UeId ue;
  /// action, release_leg, add_leg, reconfigure or error.
  std::string kind;
  std::string details;
  friend bool operator==(const UtsEvent&, const UtsEvent&) = default;
};

/// Translates every raw report to common units.
UtsContext collect_context(const NetworkState& state, std::uint64_t epoch,
                           const CommonUnitTranslator& translator);

/// Drops hysteresis reversals, then keeps one action per UE: the issuer ranked
/// highest, then the earlier action kind, then the lower target ids. Output is
/// ordered by UE id. Throws UnrankedFeatureError for an issuer missing from
/// the ranking.
std::vector<SteeringAction> resolve_conflicts(const std::vector<SteeringAction>& candidates,
                                              const MnoStrategy& strategy,
                                              const SteeringHistory& history, std::uint64_t epoch);

struct AppliedAction {
  SteeringAction action;
  CellId serving_before;
};

struct ApplyResult {
  std::vector<AppliedAction> applied;
  std::vector<UtsEvent> events;
};

/// Applies each action all-or-nothing. Leg changes reconfigure every flow of
/// the UE with the mode its service maps to (aggregate while a duplicate flow
/// has a single leg); sequence numbers carry over. An action naming an
/// unknown cell, or one that does not fit the UE's attachment, is skipped
/// with an error event.
ApplyResult apply_actions(NetworkState& state, const std::vector<SteeringAction>& actions);

struct UtsEpochResult {
  std::uint64_t epoch = 0;
  UtsContext context;
  std::vector<SteeringAction> candidates;
  std::vector<SteeringAction> confirmed;
  std::vector<SteeringAction> resolved;
  ApplyResult applied;
};

/// collect -> evaluate -> time-to-trigger -> resolve -> apply, once per epoch.
class UtsController {
 public:
  UtsController(FeatureCatalog catalog, MnoStrategy strategy,
                CommonUnitTranslator translator = CommonUnitTranslator::with_builtin_kinds());

  UtsEpochResult run_epoch(NetworkState& state);

  const SteeringHistory& history() const noexcept { return history_; }
  const MnoStrategy& strategy() const noexcept { return strategy_; }
  const FeatureCatalog& catalog() const noexcept { return catalog_; }
  std::uint64_t epochs_run() const noexcept { return epoch_; }

 private:
  FeatureCatalog catalog_;
  MnoStrategy strategy_;
  CommonUnitTranslator translator_;
  SteeringHistory history_;
  std::uint64_t epoch_ = 0;
};

}  // namespace hrrm::uts
