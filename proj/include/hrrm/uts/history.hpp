#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "hrrm/uts/types.hpp"

namespace hrrm::uts {

/// A cell a UE started or stopped using because of an applied action.
struct AttachmentChange {
  std::uint64_t epoch = 0;
  UeId ue;
  CellId cell;
  bool gained = false;
  ActionKind cause = ActionKind::handover;
};

/// Cell changes implied by applying `action` to a UE currently served by `serving`.
std::vector<AttachmentChange> changes_of(const SteeringAction& action, CellId serving,
                                         std::uint64_t epoch);

/// Shared UTS memory: time-to-trigger counters and the attachment changes the
/// hysteresis filter looks back on. Features themselves stay stateless.
class SteeringHistory {
 public:
  /// Advances the trigger counter of every candidate seen this epoch (a
  /// candidate missing for an epoch starts over) and returns those whose
  /// condition has now held for `time_to_trigger` consecutive epochs.
  std::vector<SteeringAction> confirm(const std::vector<SteeringAction>& candidates,
                                      std::uint64_t epoch, std::uint64_t time_to_trigger);

  /// True when the action undoes a change made within `window` epochs: moving
  /// or adding a UE back to a cell it left, or releasing a cell it gained.
  bool is_reversal(const SteeringAction& action, std::uint64_t epoch,
                   std::uint64_t window) const;

  /// Records an applied action; clears the UE's trigger counters.
  void record(const SteeringAction& action, CellId serving_before, std::uint64_t epoch);

  const std::vector<AttachmentChange>& changes() const noexcept { return changes_; }
  std::uint64_t handovers() const noexcept { return handovers_; }

 private:
  struct Trigger {
    std::uint64_t last_epoch = 0;
    std::uint64_t count = 0;
  };
  using TriggerKey = std::tuple<UeId, std::string, ActionKind, std::vector<CellId>>;

  std::map<TriggerKey, Trigger> triggers_;
  std::vector<AttachmentChange> changes_;
  std::uint64_t handovers_ = 0;
};

}  // namespace hrrm::uts
