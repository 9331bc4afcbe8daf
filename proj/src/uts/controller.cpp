#include "hrrm/uts/controller.hpp"

#include <algorithm>
#include <stdexcept>

#include "hrrm/core/error.hpp"

namespace hrrm::uts {

std::vector<CellId> UeState::leg_cells() const {
  std::vector<CellId> out{serving};
  out.insert(out.end(), secondaries.begin(), secondaries.end());
  return out;
}

namespace {

pdcp::FlowMode mode_for(const NetworkState& state, TrafficClass service, std::size_t legs) {
  auto it = state.service_modes.find(service);
  pdcp::FlowMode mode = it == state.service_modes.end() ? pdcp::FlowMode::aggregate : it->second;
  if (mode == pdcp::FlowMode::duplicate && legs < 2) mode = pdcp::FlowMode::aggregate;
  return mode;
}

std::string join_cells(const std::vector<CellId>& cells) {
  std::string out;
  for (const auto& c : cells) {
    if (!out.empty()) out += ',';
    out += to_string(c);
  }
  return out;
}

/// Rebuilds a flow on the UE's current legs, keeping queues of legs that stay.
pdcp::FlowState rebuild_flow(const NetworkState& state, const UeState& ue,
                             const pdcp::FlowState* previous, FlowId flow,
                             TrafficClass service) {
  std::vector<pdcp::Leg> legs;
  for (CellId c : ue.leg_cells()) {
    pdcp::Leg leg = pdcp::make_leg(c, state.cells.at(c).descriptor);
    if (previous != nullptr) {
      if (const pdcp::Leg* old = previous->find_leg(c)) leg.queue_bits = old->queue_bits;
    }
    legs.push_back(leg);
  }
  const auto mode = mode_for(state, service, legs.size());
  pdcp::FlowState next = pdcp::configure_legs(flow, std::move(legs), mode, service);
  if (previous != nullptr) next.next_sn = previous->next_sn;
  return next;
}

void reconfigure(NetworkState& state, UeState& ue, std::vector<UtsEvent>& events) {
  for (auto& [id, flow] : ue.flows) {
    flow = rebuild_flow(state, ue, &flow, id, flow.service);
    events.push_back({ue.id, "reconfigure",
                      "flow=" + to_string(id) + " mode=" + std::string(pdcp::to_string(flow.mode)) +
                          " legs=" + join_cells(ue.leg_cells())});
  }
}

bool contains(const std::vector<CellId>& cells, CellId c) {
  return std::find(cells.begin(), cells.end(), c) != cells.end();
}

/// Reason the action cannot be applied, or empty when it can.
std::string precheck(const NetworkState& state, const SteeringAction& a) {
  if (!state.ues.contains(a.ue)) return "unknown ue " + to_string(a.ue);
  if (a.targets.empty()) return "action without target";
  for (CellId c : a.targets) {
    if (!state.cells.contains(c)) return "unknown target cell " + to_string(c);
  }
  const UeState& ue = state.ues.at(a.ue);
  const CellId t = a.target();
  switch (a.kind) {
    case ActionKind::handover:
    case ActionKind::offload:
      if (t == ue.serving) return "cell " + to_string(t) + " already serving";
      break;
    case ActionKind::configure_dc:
      if (a.targets.size() != 2 || a.targets[0] != ue.serving) {
        return "master must be the serving cell";
      }
      [[fallthrough]];
    case ActionKind::add_secondary_cell:
      if (t == ue.serving || contains(ue.secondaries, t)) {
        return "cell " + to_string(t) + " already in use";
      }
      break;
    case ActionKind::release_secondary_cell:
    case ActionKind::release_leg:
      if (!contains(ue.secondaries, t)) return "cell " + to_string(t) + " is not a secondary";
      break;
  }
  return {};
}

}  // namespace

void NetworkState::add_flow(UeId ue, FlowId flow, TrafficClass service) {
  UeState& u = ues.at(ue);
  u.flows[flow] = rebuild_flow(*this, u, nullptr, flow, service);
}

UtsContext collect_context(const NetworkState& state, std::uint64_t epoch,
                           const CommonUnitTranslator& translator) {
  UtsContext ctx;
  ctx.epoch_index = epoch;
  ctx.scenario = state.scenario;
  for (const auto& [id, cell] : state.cells) {
    CellContext c;
    c.cell = id;
    c.site = cell.site;
    c.load = translator.translate(cell.load);
    c.descriptor = cell.descriptor;
    c.descriptor.current_load = c.load.value();
    c.epoch_capacity_bits = cell.epoch_capacity_bits;
    ctx.cells.push_back(std::move(c));
  }
  for (const auto& [id, ue] : state.ues) {
    UeContext u;
    u.ue = id;
    u.serving = ue.serving;
    u.secondaries = ue.secondaries;
    for (const auto& [cell, raw] : ue.measurements) u.signals.emplace_back(cell, translator.translate(raw));
    for (const auto& [fid, flow] : ue.flows) u.services.insert(flow.service);
    u.dc_capable = ue.dc_capable;
    u.offered_bits = ue.offered_bits;
    u.achieved_bps = ue.achieved_bps;
    u.target_bps = ue.target_bps;
    ctx.ues.push_back(std::move(u));
  }
  return ctx;
}

std::vector<SteeringAction> resolve_conflicts(const std::vector<SteeringAction>& candidates,
                                              const MnoStrategy& strategy,
                                              const SteeringHistory& history,
                                              std::uint64_t epoch) {
  std::map<UeId, std::pair<std::size_t, const SteeringAction*>> best;
  for (const auto& a : candidates) {
    const auto rank = strategy.rank_of(a.feature_id);
    if (!rank) throw UnrankedFeatureError(a.feature_id);
    if (history.is_reversal(a, epoch, strategy.hysteresis_epochs)) continue;
    auto it = best.find(a.ue);
    if (it == best.end()) {
      best.emplace(a.ue, std::pair{*rank, &a});
      continue;
    }
    const auto& [cur_rank, cur] = it->second;
    const auto key = [](std::size_t r, const SteeringAction& s) {
      return std::tuple(r, static_cast<int>(s.kind), s.targets);
    };
    if (key(*rank, a) < key(cur_rank, *cur)) it->second = {*rank, &a};
  }
  std::vector<SteeringAction> out;
  out.reserve(best.size());
  for (const auto& [ue, entry] : best) out.push_back(*entry.second);
  return out;
}

ApplyResult apply_actions(NetworkState& state, const std::vector<SteeringAction>& actions) {
  ApplyResult result;
  auto& events = result.events;
  for (const auto& a : actions) {
    if (const std::string reason = precheck(state, a); !reason.empty()) {
      events.push_back({a.ue, "error", describe(a) + " skipped: " + reason});
      continue;
    }
    UeState& ue = state.ues.at(a.ue);
    const CellId before = ue.serving;
    const CellId t = a.target();
    events.push_back({a.ue, "action", describe(a)});
    switch (a.kind) {
      case ActionKind::handover:
      case ActionKind::offload:
        for (CellId s : ue.secondaries) events.push_back({a.ue, "release_leg", "cell=" + to_string(s)});
        events.push_back({a.ue, "release_leg", "cell=" + to_string(ue.serving)});
        events.push_back({a.ue, "add_leg", "cell=" + to_string(t)});
        ue.secondaries.clear();
        ue.serving = t;
        break;
      case ActionKind::add_secondary_cell:
      case ActionKind::configure_dc:
        events.push_back({a.ue, "add_leg", "cell=" + to_string(t)});
        ue.secondaries.push_back(t);
        break;
      case ActionKind::release_secondary_cell:
      case ActionKind::release_leg:
        events.push_back({a.ue, "release_leg", "cell=" + to_string(t)});
        std::erase(ue.secondaries, t);
        break;
    }
    reconfigure(state, ue, events);
    result.applied.push_back({a, before});
  }
  return result;
}

UtsController::UtsController(FeatureCatalog catalog, MnoStrategy strategy,
                             CommonUnitTranslator translator)
    : catalog_(std::move(catalog)),
      strategy_(std::move(strategy)),
      translator_(std::move(translator)) {
  strategy_.validate();
}

UtsEpochResult UtsController::run_epoch(NetworkState& state) {
  UtsEpochResult r;
  r.epoch = ++epoch_;
  r.context = collect_context(state, r.epoch, translator_);
  r.candidates = evaluate_features(r.context, catalog_, strategy_);
  r.confirmed = history_.confirm(r.candidates, r.epoch, strategy_.time_to_trigger);
  r.resolved = resolve_conflicts(r.confirmed, strategy_, history_, r.epoch);
  r.applied = apply_actions(state, r.resolved);
  for (const auto& a : r.applied.applied) history_.record(a.action, a.serving_before, r.epoch);
  return r;
}

}  // namespace hrrm::uts
