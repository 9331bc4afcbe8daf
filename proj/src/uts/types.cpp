#include "hrrm/uts/types.hpp"

#include <algorithm>
#include <stdexcept>

namespace hrrm::uts {

std::string_view to_string(ActionKind kind) {
  switch (kind) {
    case ActionKind::handover: return "handover";
    case ActionKind::add_secondary_cell: return "add_secondary_cell";
    case ActionKind::release_secondary_cell: return "release_secondary_cell";
    case ActionKind::configure_dc: return "configure_dc";
    case ActionKind::release_leg: return "release_leg";
    case ActionKind::offload: return "offload";
  }
  return "?";
}

std::optional<ActionKind> parse_action_kind(std::string_view text) {
  for (auto k : kAllActionKinds) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

std::string describe(const SteeringAction& action) {
  std::string out(to_string(action.kind));
  out += " ue=" + to_string(action.ue);
  if (action.kind == ActionKind::configure_dc && action.targets.size() == 2) {
    out += " mn=" + to_string(action.targets[0]) + " sn=" + to_string(action.targets[1]);
  } else {
    for (const auto& t : action.targets) out += " cell=" + to_string(t);
  }
  out += " by=" + action.feature_id;
  return out;
}

double CellContext::share_of(double bits) const {
  return epoch_capacity_bits > 0.0 ? bits / epoch_capacity_bits : 0.0;
}

std::optional<double> UeContext::signal_to(CellId cell) const {
  for (const auto& [c, m] : signals) {
    if (c == cell) return m.value();
  }
  return std::nullopt;
}

bool UeContext::uses(CellId cell) const {
  return serving == cell || std::find(secondaries.begin(), secondaries.end(), cell) !=
                                secondaries.end();
}

const CellContext* UtsContext::find_cell(CellId cell) const {
  for (const auto& c : cells) {
    if (c.cell == cell) return &c;
  }
  return nullptr;
}

std::optional<std::size_t> MnoStrategy::rank_of(std::string_view feature_id) const {
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    if (ranking[i] == feature_id) return i;
  }
  return std::nullopt;
}

const FeatureThresholds& MnoStrategy::thresholds_for(const std::string& feature_id) const {
  static const FeatureThresholds kEmpty;
  auto it = thresholds.find(feature_id);
  return it == thresholds.end() ? kEmpty : it->second;
}

void MnoStrategy::validate() const {
  std::set<std::string> seen;
  for (const auto& f : ranking) {
    if (!seen.insert(f).second) {
      throw std::invalid_argument("feature '" + f + "' ranked twice");
    }
  }
  if (time_to_trigger == 0) throw std::invalid_argument("time_to_trigger must be >= 1");
}

double threshold(const FeatureThresholds& th, const std::string& name, double fallback) {
  auto it = th.find(name);
  return it == th.end() ? fallback : it->second;
}

}  // namespace hrrm::uts
