#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hrrm {

/// Where a feature sits in the management hierarchy.
enum class FeatureLocation { above_uts, below_uts, rrm_low, rrm_high, son };

std::string_view to_string(FeatureLocation location);
std::optional<FeatureLocation> parse_feature_location(std::string_view text);

/// Registration record answering the four plugin questions: what the feature
/// consumes and emits, where it belongs, what it interacts with, and which
/// scenarios it fits.
struct FeatureRecord {
  std::string feature_id;
  FeatureLocation location = FeatureLocation::below_uts;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<std::string> interacts_with;
  std::vector<std::string> scenarios;

  bool emits(std::string_view action) const;
  /// True when the record lists `tag` or the wildcard scenario "any".
  bool fits(std::string_view scenario_tag) const;

  friend bool operator==(const FeatureRecord&, const FeatureRecord&) = default;
};

struct InteractionLookup {
  std::vector<const FeatureRecord*> resolved;
  std::vector<std::string> unresolved;
};

/// Feature records in registration order. Interaction references are resolved
/// lazily, so a record may name a feature registered later (or never).
class PluginRegistry {
 public:
  /// Throws DuplicateIdError for a known id and InvalidRecordError when an
  /// id is empty or any of inputs/outputs/interacts_with/scenarios is empty.
  void register_plugin(FeatureRecord record);

  const FeatureRecord* find(std::string_view feature_id) const;
  std::vector<const FeatureRecord*> by_location(FeatureLocation location) const;
  std::vector<const FeatureRecord*> by_scenario(std::string_view scenario_tag) const;
  /// Throws std::out_of_range for an unknown id.
  InteractionLookup interactions(std::string_view feature_id) const;

  const std::vector<FeatureRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }

 private:
  std::vector<FeatureRecord> records_;
};

}  // namespace hrrm
