#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hrrm/core/grid.hpp"
#include "hrrm/core/ids.hpp"
#include "hrrm/core/network.hpp"
#include "hrrm/core/rng.hpp"
#include "hrrm/mac/partition.hpp"
#include "hrrm/mac/schedulers.hpp"

namespace hrrm::mac {

enum class SchedulerKind { dynamic, semi_persistent, one_shot };
enum class PartitionBy { traffic_class, slice };

std::string_view to_string(SchedulerKind kind);
std::optional<SchedulerKind> parse_scheduler_kind(std::string_view text);
std::string_view to_string(PartitionBy by);
std::optional<PartitionBy> parse_partition_by(std::string_view text);

/// One radio portion of a shared carrier. A UE may use the portion when it
/// carries `required_capability` (or when the requirement is empty).
struct PortionSpec {
  std::string label;
  std::string required_capability;
  double waveform_eff = 1.0;
  friend bool operator==(const PortionSpec&, const PortionSpec&) = default;
};

std::map<TrafficClass, SchedulerKind> default_class_schedulers();

struct MacConfig {
  int epoch_slots = 10;
  int min_guarantee = 1;
  int access_cost_prbs = 1;
  double pf_ewma = kPfEwmaAlpha;
  int backoff_min_epochs = 1;
  int backoff_max_epochs = 8;
  PartitionBy partition_by = PartitionBy::traffic_class;
  std::map<TrafficClass, SchedulerKind> class_schedulers = default_class_schedulers();
  /// Two or more portions make the coordinator split the carrier first and
  /// recurse into each portion. Empty means one implicit portion.
  std::vector<PortionSpec> portions;

  friend bool operator==(const MacConfig&, const MacConfig&) = default;
};

/// A flow's queue at this cell, as the coordinator sees it.
struct MacFlowView {
  FlowId flow;
  UeId ue;
  TrafficClass cls = TrafficClass::embb;
  std::string slice;
  double backlog_bits = 0.0;
  /// Head-of-line packet size; the one-shot payload.
  double head_bits = 0.0;
  /// Semi-persistent reservation parameters.
  int sps_period_slots = 1;
  int sps_prbs = 1;
  std::uint64_t sps_start_slot = 0;
};

struct MacUeView {
  UeId ue;
  std::set<std::string> capabilities;
  /// Bits per PRB in this slot, one entry per portion (one entry without portions).
  std::vector<double> per_prb_bits;
};

struct MacSlotInput {
  std::uint64_t slot = 0;
  std::vector<MacUeView> ues;
  std::vector<MacFlowView> flows;
};

/// Node of the recursive partition tree. Leaves carry the specialized scheduler.
struct PlanNode {
  PartitionKey key;
  PrbInterval interval;
  std::optional<SchedulerKind> scheduler;
  /// Index into MacConfig::portions (0 without portions).
  int portion = 0;
  std::vector<PlanNode> children;

  bool is_leaf() const noexcept { return children.empty(); }
};

struct FlowService {
  FlowId flow;
  double bits = 0.0;
};

struct ClassFeedback {
  double served_bits = 0.0;
  double unserved_backlog_bits = 0.0;
};

struct MacEvent {
  std::string kind;
  std::string details;
};

struct MacSlotOutput {
  AllocationMap allocation;
  std::vector<FlowService> served;
  std::vector<std::pair<FlowId, AccessOutcome>> access;
  std::map<TrafficClass, ClassFeedback> feedback;
  /// PRBs granted per leaf key this slot, keyed by the leaf path.
  std::map<std::string, int> leaf_granted;
  std::map<std::string, int> leaf_assigned;
  bool plan_refreshed = false;
  std::vector<MacEvent> events;
};

/// Index of the portion a UE with `capabilities` is served in: the supported
/// portion with the highest waveform efficiency, the earlier one on ties.
/// Returns std::nullopt when the UE supports none.
std::optional<int> assign_portion(const std::set<std::string>& capabilities,
                                  const std::vector<PortionSpec>& portions);

/// Unified MAC coordinator of one cell. Every epoch it turns collective
/// demand into a partition tree; every slot it dispatches each leaf to its
/// specialized scheduler.
class MacCoordinator {
 public:
  MacCoordinator(CarrierGrid grid, MacConfig config, std::uint64_t seed, std::uint64_t substream);

  /// Refreshes the plan at epoch boundaries (or when none exists yet), then
  /// schedules `input.slot`. Propagates InsufficientResourcesError.
  MacSlotOutput run_mac_epoch(const MacSlotInput& input);

  const PlanNode& plan() const noexcept { return plan_; }
  const MacConfig& config() const noexcept { return config_; }
  const CarrierGrid& grid() const noexcept { return grid_; }
  std::uint64_t epoch_index() const noexcept { return epoch_index_; }

 private:
  struct Subset {
    std::vector<const MacUeView*> ues;
    std::vector<const MacFlowView*> flows;
  };

  void refresh_plan(const MacSlotInput& input, std::vector<MacEvent>& events);
  std::vector<PlanNode> build_leaves(PrbInterval interval, int portion, const Subset& subset,
                                     std::uint64_t slot, std::vector<MacEvent>& events,
                                     const std::string& scope);
  DemandVector leaf_demands(const Subset& subset, int portion, std::uint64_t slot,
                            std::map<PartitionKey, int>& floors,
                            std::set<PartitionKey>& active) const;
  PartitionKey leaf_key(const MacFlowView& flow) const;
  SchedulerKind leaf_scheduler(const PartitionKey& key) const;
  int floor_sum(const Subset& subset, int portion, std::uint64_t slot) const;

  void schedule_leaf(const PlanNode& leaf, const std::string& path, const MacSlotInput& input,
                     MacSlotOutput& out, std::map<UeId, double>& served_by_ue);

  CarrierGrid grid_;
  MacConfig config_;
  RngStream access_rng_;
  RngStream backoff_rng_;
  PlanNode plan_;
  bool has_plan_ = false;
  std::uint64_t epoch_index_ = 0;
  std::map<UeId, double> pf_average_;
  std::map<FlowId, std::uint64_t> backoff_until_;
  std::map<std::string, SemiPersistentScheduler> sps_;
};

}  // namespace hrrm::mac
