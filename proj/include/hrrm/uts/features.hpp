#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hrrm/abstraction/registry.hpp"
#include "hrrm/uts/types.hpp"

namespace hrrm::uts {

/// A feature's decision logic: a pure function of the context, its own record
/// and its thresholds from the strategy.
using Evaluator = std::function<std::vector<SteeringAction>(
    const UtsContext&, const FeatureRecord&, const FeatureThresholds&)>;

/// Feature records plus the evaluators behind them. Adding a feature needs
/// nothing beyond a record and an evaluator.
class FeatureCatalog {
 public:
  /// Catalog holding the load-balancing, carrier-aggregation and
  /// dual-connectivity features.
  static FeatureCatalog with_builtin_features();

  /// Registers the record (see PluginRegistry::register_plugin) with its evaluator.
  void add(FeatureRecord record, Evaluator evaluator);

  const PluginRegistry& registry() const noexcept { return registry_; }
  const Evaluator* evaluator(const std::string& feature_id) const;

 private:
  PluginRegistry registry_;
  std::map<std::string, Evaluator> evaluators_;
};

/// Candidates of every below_uts feature fitting the strategy's scenario, in
/// registration order. Each action is stamped with its issuer's id. Throws
/// UndeclaredActionError when a kind is missing from the issuer's outputs.
std::vector<SteeringAction> evaluate_features(const UtsContext& ctx, const FeatureCatalog& catalog,
                                              const MnoStrategy& strategy);

/// Load-balancing handover. While a cell's load is above `high_load`, its UEs
/// (by id) move to the least-loaded neighbour below `low_load` whose signal is
/// at least `min_signal_db`, as long as the projected source load stays at or
/// above the projected target load.
std::vector<SteeringAction> evaluate_load_balancing(const UtsContext& ctx, const FeatureRecord&,
                                                    const FeatureThresholds& th);

/// Carrier aggregation. A broadband UE below its target rate adds the least
/// loaded co-sited cell accepting secondaries (load below `max_load`, signal
/// at least `min_signal_db`); a secondary whose load exceeds `release_load` is
/// released.
std::vector<SteeringAction> evaluate_carrier_aggregation(const UtsContext& ctx,
                                                         const FeatureRecord&,
                                                         const FeatureThresholds& th);

/// Dual connectivity and offload. A dual-connectivity capable UE without
/// secondaries that misses its target rate (or carries reliability traffic)
/// gets a second leg at another site on the least-loaded cell able to carry a
/// split bearer with load below `max_load`. A UE without the capability whose
/// serving load exceeds `offload_load` is offloaded to the least-loaded other
/// cell below `max_load`, unless the move would leave the target busier than
/// the source. Loads are projected as actions accumulate. Candidate cells need
/// `min_signal_db`.
std::vector<SteeringAction> evaluate_dual_connectivity(const UtsContext& ctx,
                                                       const FeatureRecord&,
                                                       const FeatureThresholds& th);

FeatureRecord load_balancing_record();
FeatureRecord carrier_aggregation_record();
FeatureRecord dual_connectivity_record();

}  // namespace hrrm::uts
