#include "hrrm/uts/features.hpp"

#include <algorithm>

#include "hrrm/core/error.hpp"

namespace hrrm::uts {

void FeatureCatalog::add(FeatureRecord record, Evaluator evaluator) {
  const std::string id = record.feature_id;
  registry_.register_plugin(std::move(record));
  evaluators_[id] = std::move(evaluator);
}

const Evaluator* FeatureCatalog::evaluator(const std::string& feature_id) const {
  auto it = evaluators_.find(feature_id);
  return it == evaluators_.end() ? nullptr : &it->second;
}

FeatureRecord load_balancing_record() {
  return {"mlb",
          FeatureLocation::below_uts,
          {"load_fraction", "signal_db", "offered_bits"},
          {"handover"},
          {"ca", "dc"},
          {"any"}};
}

FeatureRecord carrier_aggregation_record() {
  return {"ca",
          FeatureLocation::below_uts,
          {"load_fraction", "signal_db", "rate_deficit", "site"},
          {"add_secondary_cell", "release_secondary_cell"},
          {"mlb", "dc"},
          {"any"}};
}

FeatureRecord dual_connectivity_record() {
  return {"dc",
          FeatureLocation::below_uts,
          {"load_fraction", "signal_db", "rate_deficit", "site", "dc_capable"},
          {"configure_dc", "offload"},
          {"mlb", "ca"},
          {"any"}};
}

FeatureCatalog FeatureCatalog::with_builtin_features() {
  FeatureCatalog catalog;
  catalog.add(load_balancing_record(), evaluate_load_balancing);
  catalog.add(carrier_aggregation_record(), evaluate_carrier_aggregation);
  catalog.add(dual_connectivity_record(), evaluate_dual_connectivity);
  return catalog;
}

std::vector<SteeringAction> evaluate_features(const UtsContext& ctx, const FeatureCatalog& catalog,
                                              const MnoStrategy& strategy) {
  std::vector<SteeringAction> out;
  for (const auto& record : catalog.registry().records()) {
    if (record.location != FeatureLocation::below_uts || !record.fits(ctx.scenario)) continue;
    const Evaluator* eval = catalog.evaluator(record.feature_id);
    if (eval == nullptr) continue;
    for (auto action : (*eval)(ctx, record, strategy.thresholds_for(record.feature_id))) {
      if (!record.emits(to_string(action.kind))) {
        throw UndeclaredActionError(record.feature_id, std::string(to_string(action.kind)));
      }
      action.feature_id = record.feature_id;
      out.push_back(std::move(action));
    }
  }
  return out;
}

namespace {

bool broadband(const UeContext& ue) {
  return ue.services.contains(TrafficClass::embb) ||
         ue.services.contains(TrafficClass::legacy_mbb);
}

/// Least-loaded cell passing `ok`, lower id on ties.
template <class Pred>
const CellContext* least_loaded(const UtsContext& ctx, Pred ok) {
  const CellContext* best = nullptr;
  for (const auto& c : ctx.cells) {
    if (!ok(c)) continue;
    if (best == nullptr || c.load.value() < best->load.value()) best = &c;
  }
  return best;
}

}  // namespace

std::vector<SteeringAction> evaluate_load_balancing(const UtsContext& ctx, const FeatureRecord&,
                                                    const FeatureThresholds& th) {
  const double high = threshold(th, "high_load", 0.6);
  const double low = threshold(th, "low_load", 0.5);
  const double min_signal = threshold(th, "min_signal_db", 20.0);

  std::map<CellId, double> projected;
  for (const auto& c : ctx.cells) projected[c.cell] = c.load.value();

  std::vector<const CellContext*> sources;
  for (const auto& c : ctx.cells) {
    if (c.load.value() > high) sources.push_back(&c);
  }
  std::stable_sort(sources.begin(), sources.end(), [](const auto* a, const auto* b) {
    return a->load.value() > b->load.value();
  });

  std::vector<SteeringAction> out;
  for (const CellContext* src : sources) {
    for (const auto& ue : ctx.ues) {
      if (projected[src->cell] <= high) break;
      if (ue.serving != src->cell) continue;
      const double leave = src->share_of(ue.offered_bits);
      if (leave <= 0.0) continue;
      const CellContext* best = nullptr;
      for (const auto& c : ctx.cells) {
        if (c.cell == src->cell || projected[c.cell] >= low) continue;
        const auto signal = ue.signal_to(c.cell);
        if (!signal || *signal < min_signal) continue;
        if (best == nullptr || projected[c.cell] < projected[best->cell]) best = &c;
      }
      if (best == nullptr) continue;
      const double join = best->share_of(ue.offered_bits);
      if (projected[src->cell] - leave < projected[best->cell] + join) continue;
      projected[src->cell] -= leave;
      projected[best->cell] += join;
      out.push_back({ActionKind::handover, ue.ue, {best->cell}, {}});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.ue < b.ue; });
  return out;
}

std::vector<SteeringAction> evaluate_carrier_aggregation(const UtsContext& ctx,
                                                         const FeatureRecord&,
                                                         const FeatureThresholds& th) {
  const double max_load = threshold(th, "max_load", 0.6);
  const double min_signal = threshold(th, "min_signal_db", 20.0);
  const double release_load = threshold(th, "release_load", 0.95);

  std::vector<SteeringAction> out;
  for (const auto& ue : ctx.ues) {
    bool released = false;
    for (CellId s : ue.secondaries) {
      const CellContext* c = ctx.find_cell(s);
      if (c != nullptr && c->load.value() > release_load) {
        out.push_back({ActionKind::release_secondary_cell, ue.ue, {s}, {}});
        released = true;
        break;
      }
    }
    if (released || !broadband(ue) || !ue.has_deficit()) continue;
    const CellContext* serving = ctx.find_cell(ue.serving);
    if (serving == nullptr) continue;
    const CellContext* pick = least_loaded(ctx, [&](const CellContext& c) {
      const auto signal = ue.signal_to(c.cell);
      return !ue.uses(c.cell) && c.site == serving->site && c.descriptor.supports_secondary &&
             c.load.value() < max_load && signal && *signal >= min_signal;
    });
    if (pick != nullptr) out.push_back({ActionKind::add_secondary_cell, ue.ue, {pick->cell}, {}});
  }
  return out;
}

std::vector<SteeringAction> evaluate_dual_connectivity(const UtsContext& ctx,
                                                       const FeatureRecord&,
                                                       const FeatureThresholds& th) {
  const double max_load = threshold(th, "max_load", 0.5);
  const double min_signal = threshold(th, "min_signal_db", 20.0);
  const double offload_load = threshold(th, "offload_load", 0.8);

  std::map<CellId, double> projected;
  for (const auto& c : ctx.cells) projected[c.cell] = c.load.value();

  std::vector<SteeringAction> out;
  for (const auto& ue : ctx.ues) {
    if (!ue.secondaries.empty()) continue;
    const CellContext* serving = ctx.find_cell(ue.serving);
    if (serving == nullptr) continue;
    auto reachable = [&](const CellContext& c) {
      const auto signal = ue.signal_to(c.cell);
      return c.cell != ue.serving && projected[c.cell] < max_load && signal &&
             *signal >= min_signal;
    };
    if (ue.dc_capable) {
      const bool wants = ue.services.contains(TrafficClass::urllc) ||
                         (broadband(ue) && ue.has_deficit());
      if (!wants) continue;
      const CellContext* pick = least_loaded(ctx, [&](const CellContext& c) {
        return reachable(c) && c.site != serving->site && c.descriptor.supports_duplication;
      });
      if (pick != nullptr) {
        out.push_back({ActionKind::configure_dc, ue.ue, {ue.serving, pick->cell}, {}});
      }
    } else if (projected[serving->cell] > offload_load) {
      const CellContext* pick = nullptr;
      for (const auto& c : ctx.cells) {
        if (!reachable(c)) continue;
        if (pick == nullptr || projected[c.cell] < projected[pick->cell]) pick = &c;
      }
      if (pick == nullptr) continue;
      const double leave = serving->share_of(ue.offered_bits);
      const double join = pick->share_of(ue.offered_bits);
      if (projected[serving->cell] - leave < projected[pick->cell] + join) continue;
      projected[serving->cell] -= leave;
      projected[pick->cell] += join;
      out.push_back({ActionKind::offload, ue.ue, {pick->cell}, {}});
    }
  }
  return out;
}

}  // namespace hrrm::uts
