#include "hrrm/abstraction/registry.hpp"

#include <algorithm>
#include <stdexcept>

#include "hrrm/core/error.hpp"

namespace hrrm {

std::string_view to_string(FeatureLocation location) {
  switch (location) {
    case FeatureLocation::above_uts: return "above_uts";
    case FeatureLocation::below_uts: return "below_uts";
    case FeatureLocation::rrm_low: return "rrm_low";
    case FeatureLocation::rrm_high: return "rrm_high";
    case FeatureLocation::son: return "son";
  }
  return "?";
}

std::optional<FeatureLocation> parse_feature_location(std::string_view text) {
  for (auto loc : {FeatureLocation::above_uts, FeatureLocation::below_uts,
                   FeatureLocation::rrm_low, FeatureLocation::rrm_high, FeatureLocation::son}) {
    if (to_string(loc) == text) return loc;
  }
  return std::nullopt;
}

bool FeatureRecord::emits(std::string_view action) const {
  return std::find(outputs.begin(), outputs.end(), action) != outputs.end();
}

bool FeatureRecord::fits(std::string_view scenario_tag) const {
  return std::any_of(scenarios.begin(), scenarios.end(),
                     [&](const std::string& s) { return s == scenario_tag || s == "any"; });
}

void PluginRegistry::register_plugin(FeatureRecord record) {
  if (record.feature_id.empty()) throw InvalidRecordError("feature_id must not be empty");
  if (find(record.feature_id) != nullptr) throw DuplicateIdError(record.feature_id);
  auto require = [&](const std::vector<std::string>& field, const char* name) {
    if (field.empty()) {
      throw InvalidRecordError("feature '" + record.feature_id + "': " + name +
                               " must not be empty");
    }
  };
  require(record.inputs, "inputs");
  require(record.outputs, "outputs");
  require(record.interacts_with, "interacts_with");
  require(record.scenarios, "scenarios");
  records_.push_back(std::move(record));
}

const FeatureRecord* PluginRegistry::find(std::string_view feature_id) const {
  for (const auto& r : records_) {
    if (r.feature_id == feature_id) return &r;
  }
  return nullptr;
}

std::vector<const FeatureRecord*> PluginRegistry::by_location(FeatureLocation location) const {
  std::vector<const FeatureRecord*> out;
  for (const auto& r : records_) {
    if (r.location == location) out.push_back(&r);
  }
  return out;
}

std::vector<const FeatureRecord*> PluginRegistry::by_scenario(std::string_view scenario_tag) const {
  std::vector<const FeatureRecord*> out;
  for (const auto& r : records_) {
    if (r.fits(scenario_tag)) out.push_back(&r);
  }
  return out;
}

InteractionLookup PluginRegistry::interactions(std::string_view feature_id) const {
  const FeatureRecord* record = find(feature_id);
  if (record == nullptr) throw std::out_of_range("unknown feature '" + std::string(feature_id) + "'");
  InteractionLookup lookup;
  for (const auto& other : record->interacts_with) {
    if (const FeatureRecord* r = find(other)) {
      lookup.resolved.push_back(r);
    } else {
      lookup.unresolved.push_back(other);
    }
  }
  return lookup;
}

}  // namespace hrrm
