#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hrrm/abstraction/common_unit.hpp"
#include "hrrm/abstraction/descriptor.hpp"
#include "hrrm/core/ids.hpp"
#include "hrrm/core/network.hpp"

namespace hrrm::uts {

/// The closed action vocabulary. Declaration order is the tie-break order.
enum class ActionKind {
  handover,
  add_secondary_cell,
  release_secondary_cell,
  configure_dc,
  release_leg,
  offload,
};

inline constexpr std::array<ActionKind, 6> kAllActionKinds = {
    ActionKind::handover,     ActionKind::add_secondary_cell, ActionKind::release_secondary_cell,
    ActionKind::configure_dc, ActionKind::release_leg,        ActionKind::offload};

std::string_view to_string(ActionKind kind);
std::optional<ActionKind> parse_action_kind(std::string_view text);

/// configure_dc targets are {master, secondary}; every other kind has one target.
struct SteeringAction {
  ActionKind kind = ActionKind::handover;
  UeId ue;
  std::vector<CellId> targets;
  std::string feature_id;

  CellId target() const { return targets.back(); }
  friend bool operator==(const SteeringAction&, const SteeringAction&) = default;
};

std::string describe(const SteeringAction& action);

struct CellContext {
  CellId cell;
  std::string site;
  CommonMeasure load = CommonMeasure::load_fraction(0.0);
  CapabilityDescriptor descriptor;
  /// Bits the cell carries over one UTS epoch at its descriptor capacity.
  double epoch_capacity_bits = 0.0;

  /// Load `bits` offered per UTS epoch would add to this cell.
  double share_of(double bits) const;
};

struct UeContext {
  UeId ue;
  CellId serving;
  std::vector<CellId> secondaries;
  /// Sorted by cell id.
  std::vector<std::pair<CellId, CommonMeasure>> signals;
  std::set<TrafficClass> services;
  bool dc_capable = false;
  /// Bits offered over the last UTS epoch.
  double offered_bits = 0.0;
  double achieved_bps = 0.0;
  double target_bps = 0.0;

  std::optional<double> signal_to(CellId cell) const;
  bool uses(CellId cell) const;
  bool has_deficit() const { return achieved_bps < target_bps; }
};

/// Everything features may read. Only common units appear here.
struct UtsContext {
  std::uint64_t epoch_index = 0;
  std::string scenario;
  /// Sorted by cell id.
  std::vector<CellContext> cells;
  /// Sorted by UE id.
  std::vector<UeContext> ues;

  const CellContext* find_cell(CellId cell) const;
};

using FeatureThresholds = std::map<std::string, double>;

struct MnoStrategy {
  std::string scenario = "default";
  /// Highest priority first.
  std::vector<std::string> ranking;
  std::map<std::string, FeatureThresholds> thresholds;
  std::uint64_t hysteresis_epochs = 10;
  std::uint64_t time_to_trigger = 2;

  std::optional<std::size_t> rank_of(std::string_view feature_id) const;
  const FeatureThresholds& thresholds_for(const std::string& feature_id) const;
  /// Throws std::invalid_argument on a repeated ranking entry or time_to_trigger 0.
  void validate() const;
};

/// Value of `name` in `th`, or `fallback`.
double threshold(const FeatureThresholds& th, const std::string& name, double fallback);

}  // namespace hrrm::uts
