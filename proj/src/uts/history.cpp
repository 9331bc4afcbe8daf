#include "hrrm/uts/history.hpp"

#include <algorithm>

namespace hrrm::uts {

std::vector<AttachmentChange> changes_of(const SteeringAction& action, CellId serving,
                                         std::uint64_t epoch) {
  std::vector<AttachmentChange> out;
  const CellId target = action.target();
  switch (action.kind) {
    case ActionKind::handover:
    case ActionKind::offload:
      if (target != serving) {
        out.push_back({epoch, action.ue, serving, false, action.kind});
        out.push_back({epoch, action.ue, target, true, action.kind});
      }
      break;
    case ActionKind::add_secondary_cell:
    case ActionKind::configure_dc:
      out.push_back({epoch, action.ue, target, true, action.kind});
      break;
    case ActionKind::release_secondary_cell:
    case ActionKind::release_leg:
      out.push_back({epoch, action.ue, target, false, action.kind});
      break;
  }
  return out;
}

std::vector<SteeringAction> SteeringHistory::confirm(const std::vector<SteeringAction>& candidates,
                                                     std::uint64_t epoch,
                                                     std::uint64_t time_to_trigger) {
  std::map<TriggerKey, Trigger> next;
  std::vector<SteeringAction> out;
  for (const auto& a : candidates) {
    const TriggerKey key{a.ue, a.feature_id, a.kind, a.targets};
    if (next.contains(key)) continue;
    Trigger t{epoch, 1};
    auto it = triggers_.find(key);
    if (it != triggers_.end() && it->second.last_epoch + 1 == epoch) t.count = it->second.count + 1;
    next[key] = t;
    if (t.count >= time_to_trigger) out.push_back(a);
  }
  triggers_ = std::move(next);
  return out;
}

bool SteeringHistory::is_reversal(const SteeringAction& action, std::uint64_t epoch,
                                  std::uint64_t window) const {
  const bool releases = action.kind == ActionKind::release_secondary_cell ||
                        action.kind == ActionKind::release_leg;
  const CellId cell = action.target();
  return std::any_of(changes_.begin(), changes_.end(), [&](const AttachmentChange& c) {
    if (c.ue != action.ue || c.cell != cell || epoch < c.epoch || epoch - c.epoch > window) {
      return false;
    }
    return releases ? c.gained : !c.gained;
  });
}

void SteeringHistory::record(const SteeringAction& action, CellId serving_before,
                             std::uint64_t epoch) {
  auto changes = changes_of(action, serving_before, epoch);
  changes_.insert(changes_.end(), changes.begin(), changes.end());
  if (action.kind == ActionKind::handover && action.target() != serving_before) ++handovers_;
  std::erase_if(triggers_,
                [&](const auto& entry) { return std::get<0>(entry.first) == action.ue; });
}

}  // namespace hrrm::uts
