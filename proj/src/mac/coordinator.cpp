#include "hrrm/mac/coordinator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hrrm/core/error.hpp"

namespace hrrm::mac {

std::string_view to_string(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::dynamic: return "dynamic";
    case SchedulerKind::semi_persistent: return "semi_persistent";
    case SchedulerKind::one_shot: return "one_shot";
  }
  return "?";
}

std::optional<SchedulerKind> parse_scheduler_kind(std::string_view text) {
  for (auto k : {SchedulerKind::dynamic, SchedulerKind::semi_persistent, SchedulerKind::one_shot}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

std::string_view to_string(PartitionBy by) {
  return by == PartitionBy::slice ? "slice" : "traffic_class";
}

std::optional<PartitionBy> parse_partition_by(std::string_view text) {
  if (text == "traffic_class") return PartitionBy::traffic_class;
  if (text == "slice") return PartitionBy::slice;
  return std::nullopt;
}

std::map<TrafficClass, SchedulerKind> default_class_schedulers() {
  return {{TrafficClass::embb, SchedulerKind::dynamic},
          {TrafficClass::mmtc, SchedulerKind::one_shot},
          {TrafficClass::urllc, SchedulerKind::semi_persistent},
          {TrafficClass::legacy_mbb, SchedulerKind::dynamic}};
}

std::optional<int> assign_portion(const std::set<std::string>& capabilities,
                                  const std::vector<PortionSpec>& portions) {
  if (portions.empty()) return 0;
  std::optional<int> best;
  for (std::size_t i = 0; i < portions.size(); ++i) {
    const auto& p = portions[i];
    if (!p.required_capability.empty() && !capabilities.contains(p.required_capability)) continue;
    if (!best || p.waveform_eff > portions[static_cast<std::size_t>(*best)].waveform_eff) {
      best = static_cast<int>(i);
    }
  }
  return best;
}

namespace {

const std::string kDefaultSlice = "default";

std::string plan_details(const std::vector<PlanNode>& nodes) {
  std::string out;
  for (const auto& n : nodes) {
    if (!out.empty()) out += ' ';
    out += to_string(n.key) + "=" + to_string(n.interval);
  }
  return out;
}

double per_prb(const MacUeView& ue, int portion) {
  const auto idx = static_cast<std::size_t>(portion);
  return idx < ue.per_prb_bits.size() ? ue.per_prb_bits[idx] : 0.0;
}

}  // namespace

MacCoordinator::MacCoordinator(CarrierGrid grid, MacConfig config, std::uint64_t seed,
                               std::uint64_t substream)
    : grid_(grid),
      config_(std::move(config)),
      access_rng_(seed, RngSubsystem::access, substream),
      backoff_rng_(seed, RngSubsystem::backoff, substream) {
  if (config_.epoch_slots < 1) throw std::invalid_argument("mac epoch must be >= 1 slot");
  if (config_.access_cost_prbs < 1) throw std::invalid_argument("access cost must be >= 1 PRB");
  if (config_.portions.size() == 1) {
    throw std::invalid_argument("a shared carrier needs at least two portions");
  }
}

PartitionKey MacCoordinator::leaf_key(const MacFlowView& flow) const {
  if (config_.partition_by == PartitionBy::slice && flow.cls != TrafficClass::mmtc) {
    return PartitionKey::slice(flow.slice.empty() ? kDefaultSlice : flow.slice);
  }
  return PartitionKey::of(flow.cls);
}

SchedulerKind MacCoordinator::leaf_scheduler(const PartitionKey& key) const {
  if (key.kind == PartitionKey::Kind::slice) return SchedulerKind::dynamic;
  const auto cls = parse_traffic_class(key.label);
  if (!cls) return SchedulerKind::dynamic;
  auto it = config_.class_schedulers.find(*cls);
  return it == config_.class_schedulers.end() ? SchedulerKind::dynamic : it->second;
}

DemandVector MacCoordinator::leaf_demands(const Subset& subset, int portion, std::uint64_t slot,
                                          std::map<PartitionKey, int>& floors,
                                          std::set<PartitionKey>& active) const {
  // Layout order: semi-persistent leaves, then contention access, then dynamic.
  std::vector<PartitionKey> order;
  const std::vector<SchedulerKind> kinds = {SchedulerKind::semi_persistent,
                                            SchedulerKind::one_shot, SchedulerKind::dynamic};
  std::set<PartitionKey> slice_keys;
  if (config_.partition_by == PartitionBy::slice) {
    for (const auto* f : subset.flows) {
      if (f->cls != TrafficClass::mmtc) slice_keys.insert(leaf_key(*f));
    }
  }
  for (SchedulerKind kind : kinds) {
    for (TrafficClass cls : kAllTrafficClasses) {
      const PartitionKey key = PartitionKey::of(cls);
      if (config_.partition_by == PartitionBy::slice && cls != TrafficClass::mmtc) continue;
      if (leaf_scheduler(key) == kind) order.push_back(key);
    }
    if (kind == SchedulerKind::dynamic) {
      for (const auto& k : slice_keys) order.push_back(k);
    }
  }

  std::map<PartitionKey, std::vector<const MacFlowView*>> by_key;
  for (const auto* f : subset.flows) by_key[leaf_key(*f)].push_back(f);
  std::map<UeId, const MacUeView*> ue_of;
  for (const auto* u : subset.ues) ue_of[u->ue] = u;

  DemandVector demands;
  for (const auto& key : order) {
    const auto& flows = by_key[key];
    const SchedulerKind kind = leaf_scheduler(key);
    if (!flows.empty() || kind == SchedulerKind::one_shot) active.insert(key);

    std::int64_t demand = 0;
    if (kind == SchedulerKind::semi_persistent) {
      int reservation = 0;
      for (const auto* f : flows) reservation += std::max(f->sps_prbs, 0);
      demand = reservation;
      if (reservation > 0) floors[key] = reservation;
    } else {
      std::vector<FlowBacklog> queues;
      std::set<UeId> pending;
      std::map<TrafficClass, std::pair<double, int>> rate_sum;
      for (const auto* f : flows) {
        auto ue = ue_of.find(f->ue);
        if (ue == ue_of.end() || f->backlog_bits <= 0.0) continue;
        if (kind == SchedulerKind::one_shot) {
          auto b = backoff_until_.find(f->flow);
          if (b == backoff_until_.end() || b->second <= slot) pending.insert(f->ue);
          continue;
        }
        // Slices aggregate their classes under one dynamic key.
        const TrafficClass cls =
            key.kind == PartitionKey::Kind::slice ? TrafficClass::embb : f->cls;
        queues.push_back({f->flow, cls, f->backlog_bits});
        auto& [sum, count] = rate_sum[cls];
        sum += per_prb(*ue->second, portion);
        ++count;
      }
      std::map<TrafficClass, double> rates;
      for (const auto& [cls, acc] : rate_sum) rates[cls] = acc.first / acc.second;
      const DemandVector est = estimate_demands(queues, static_cast<int>(pending.size()), grid_,
                                                rates, config_.access_cost_prbs);
      demand = std::min<std::int64_t>(est.total(), grid_.prbs_per_slot());
    }
    demands.add(key, demand);
  }
  return demands;
}

int MacCoordinator::floor_sum(const Subset& subset, int portion, std::uint64_t slot) const {
  std::map<PartitionKey, int> floors;
  std::set<PartitionKey> active;
  leaf_demands(subset, portion, slot, floors, active);
  int sum = 0;
  for (const auto& key : active) {
    auto it = floors.find(key);
    sum += std::max(config_.min_guarantee, it == floors.end() ? 0 : it->second);
  }
  return sum;
}

std::vector<PlanNode> MacCoordinator::build_leaves(PrbInterval interval, int portion,
                                                   const Subset& subset, std::uint64_t slot,
                                                   std::vector<MacEvent>& events,
                                                   const std::string& scope) {
  Subset working = subset;
  std::map<PartitionKey, int> floors;
  std::set<PartitionKey> active;
  DemandVector demands = leaf_demands(working, portion, slot, floors, active);

  auto required = [&] {
    int sum = 0;
    for (const auto& key : active) {
      auto it = floors.find(key);
      sum += std::max(config_.min_guarantee, it == floors.end() ? 0 : it->second);
    }
    return sum;
  };
  // Drop semi-persistent reservations, newest flow first, until the floors fit.
  while (required() > interval.size()) {
    const MacFlowView* victim = nullptr;
    for (const auto* f : working.flows) {
      if (leaf_scheduler(leaf_key(*f)) != SchedulerKind::semi_persistent) continue;
      if (victim == nullptr || victim->flow < f->flow) victim = f;
    }
    if (victim == nullptr) break;
    events.push_back({"reconfig_required", "flow=" + to_string(victim->flow) +
                                               (scope.empty() ? "" : " portion=" + scope)});
    std::erase(working.flows, victim);
    floors.clear();
    active.clear();
    demands = leaf_demands(working, portion, slot, floors, active);
  }

  PartitionPlan plan = partition_resources(demands, interval.size(), config_.min_guarantee,
                                           active, floors, interval.begin);
  plan.epoch_index = epoch_index_;

  std::vector<PlanNode> leaves;
  for (const auto& entry : plan.entries) {
    PlanNode leaf;
    leaf.key = entry.key;
    leaf.interval = entry.interval;
    leaf.scheduler = leaf_scheduler(entry.key);
    leaf.portion = portion;
    const std::string path = scope.empty() ? to_string(entry.key) : scope + "/" + to_string(entry.key);
    std::vector<SpsFlow> sps_flows;
    for (const auto* f : working.flows) {
      if (leaf_key(*f) != entry.key) continue;
      if (leaf.scheduler == SchedulerKind::semi_persistent) {
        sps_flows.push_back({f->flow, f->ue, f->sps_period_slots, f->sps_prbs, f->sps_start_slot});
      }
    }
    std::sort(sps_flows.begin(), sps_flows.end(),
              [](const SpsFlow& a, const SpsFlow& b) { return a.flow < b.flow; });
    if (leaf.scheduler == SchedulerKind::semi_persistent) {
      sps_[path] = SemiPersistentScheduler(std::move(sps_flows));
    }
    leaves.push_back(std::move(leaf));
  }
  events.push_back({"partition", (scope.empty() ? "" : "portion=" + scope + " ") +
                                     plan_details(leaves)});
  return leaves;
}

void MacCoordinator::refresh_plan(const MacSlotInput& input, std::vector<MacEvent>& events) {
  epoch_index_ = input.slot / static_cast<std::uint64_t>(config_.epoch_slots);
  sps_.clear();

  PlanNode root;
  root.key = PartitionKey::portion("carrier");
  root.interval = grid_.all_prbs();

  const auto& portions = config_.portions;
  if (portions.size() < 2) {
    Subset all;
    for (const auto& u : input.ues) all.ues.push_back(&u);
    for (const auto& f : input.flows) all.flows.push_back(&f);
    root.children = build_leaves(root.interval, 0, all, input.slot, events, "");
  } else {
    std::vector<Subset> subsets(portions.size());
    std::map<UeId, int> portion_of;
    for (const auto& u : input.ues) {
      if (auto p = assign_portion(u.capabilities, portions)) {
        subsets[static_cast<std::size_t>(*p)].ues.push_back(&u);
        portion_of[u.ue] = *p;
      }
    }
    for (const auto& f : input.flows) {
      if (auto it = portion_of.find(f.ue); it != portion_of.end()) {
        subsets[static_cast<std::size_t>(it->second)].flows.push_back(&f);
      }
    }

    std::vector<std::int64_t> demand(portions.size());
    std::vector<int> need(portions.size());
    for (std::size_t p = 0; p < portions.size(); ++p) {
      std::map<PartitionKey, int> floors;
      std::set<PartitionKey> active;
      demand[p] = leaf_demands(subsets[p], static_cast<int>(p), input.slot, floors, active).total();
      need[p] = floor_sum(subsets[p], static_cast<int>(p), input.slot);
    }
    std::vector<int> sizes = split_portions(demand, grid_.prbs_per_slot());

    // Each portion must still hold its own guarantees.
    for (std::size_t p = 0; p < portions.size(); ++p) {
      while (sizes[p] < need[p]) {
        std::size_t donor = portions.size();
        for (std::size_t q = 0; q < portions.size(); ++q) {
          if (q == p || sizes[q] <= need[q]) continue;
          if (donor == portions.size() || sizes[q] - need[q] > sizes[donor] - need[donor]) donor = q;
        }
        if (donor == portions.size()) {
          int total_need = 0;
          for (int n : need) total_need += n;
          throw InsufficientResourcesError(grid_.prbs_per_slot(), total_need);
        }
        --sizes[donor];
        ++sizes[p];
      }
    }

    int cursor = 0;
    std::string split_details;
    for (std::size_t p = 0; p < portions.size(); ++p) {
      PlanNode node;
      node.key = PartitionKey::portion(portions[p].label);
      node.interval = {cursor, cursor + sizes[p]};
      node.portion = static_cast<int>(p);
      cursor += sizes[p];
      if (!split_details.empty()) split_details += ' ';
      split_details += portions[p].label + "=" + to_string(node.interval);
      root.children.push_back(std::move(node));
    }
    events.push_back({"dss_split", split_details});
    for (auto& node : root.children) {
      node.children = build_leaves(node.interval, node.portion,
                                   subsets[static_cast<std::size_t>(node.portion)], input.slot,
                                   events, portions[static_cast<std::size_t>(node.portion)].label);
    }
  }
  plan_ = std::move(root);
  has_plan_ = true;
}

void MacCoordinator::schedule_leaf(const PlanNode& leaf, const std::string& path,
                                   const MacSlotInput& input, MacSlotOutput& out,
                                   std::map<UeId, double>& served_by_ue) {
  std::map<UeId, const MacUeView*> ue_of;
  for (const auto& u : input.ues) ue_of[u.ue] = &u;

  std::vector<const MacFlowView*> flows;
  for (const auto& f : input.flows) {
    if (leaf_key(f) != leaf.key || !ue_of.contains(f.ue)) continue;
    if (!config_.portions.empty()) {
      auto p = assign_portion(ue_of[f.ue]->capabilities, config_.portions);
      if (!p || *p != leaf.portion) continue;
    }
    flows.push_back(&f);
  }
  std::sort(flows.begin(), flows.end(),
            [](const MacFlowView* a, const MacFlowView* b) { return a->flow < b->flow; });

  int granted = 0;
  auto serve = [&](const MacFlowView& f, double bits) {
    if (bits <= 0.0) return;
    out.served.push_back({f.flow, bits});
    served_by_ue[f.ue] += bits;
  };

  switch (*leaf.scheduler) {
    case SchedulerKind::dynamic: {
      std::map<UeId, PfUser> users;
      for (const auto* f : flows) {
        if (f->backlog_bits <= 0.0) continue;
        PfUser& u = users[f->ue];
        u.ue = f->ue;
        u.backlog_bits += f->backlog_bits;
        u.inst_rate = per_prb(*ue_of[f->ue], leaf.portion);
        auto avg = pf_average_.find(f->ue);
        u.avg_rate = avg == pf_average_.end() ? kPfInitialAverage : avg->second;
      }
      std::vector<PfUser> list;
      for (const auto& [id, u] : users) list.push_back(u);
      const auto assignments = schedule_dynamic(leaf.interval, list);

      std::map<UeId, double> bits_of;
      for (std::size_t i = 0; i < assignments.size();) {
        std::size_t j = i;
        while (j + 1 < assignments.size() && assignments[j + 1].ue == assignments[i].ue &&
               assignments[j + 1].prb == assignments[j].prb + 1) {
          ++j;
        }
        grant_block(out.allocation, {assignments[i].prb, assignments[j].prb + 1},
                    assignments[i].ue, "dynamic", grid_.prbs_per_slot());
        for (std::size_t k = i; k <= j; ++k) bits_of[assignments[k].ue] += assignments[k].bits;
        granted += static_cast<int>(j - i + 1);
        i = j + 1;
      }
      for (const auto* f : flows) {
        double& left = bits_of[f->ue];
        const double take = std::min(left, f->backlog_bits);
        left -= take;
        serve(*f, take);
      }
      break;
    }
    case SchedulerKind::semi_persistent: {
      auto sched = sps_.find(path);
      if (sched == sps_.end()) break;
      for (const auto& g : sched->second.grants(leaf.interval, input.slot)) {
        grant_block(out.allocation, g.prbs, g.ue, "semi_persistent", grid_.prbs_per_slot());
        granted += g.prbs.size();
        for (const auto* f : flows) {
          if (f->flow != g.flow) continue;
          const double capacity =
              static_cast<double>(g.prbs.size()) * per_prb(*ue_of[f->ue], leaf.portion);
          serve(*f, std::min(capacity, f->backlog_bits));
        }
      }
      break;
    }
    case SchedulerKind::one_shot: {
      std::vector<Contender> contenders;
      std::vector<const MacFlowView*> contender_flow;
      std::set<UeId> seen;
      std::vector<const MacFlowView*> ready;
      for (const auto* f : flows) {
        if (f->backlog_bits <= 0.0) continue;
        auto b = backoff_until_.find(f->flow);
        if (b != backoff_until_.end() && b->second > input.slot) continue;
        ready.push_back(f);
      }
      std::sort(ready.begin(), ready.end(), [](const auto* a, const auto* b) {
        return a->ue != b->ue ? a->ue < b->ue : a->flow < b->flow;
      });
      for (const auto* f : ready) {
        if (!seen.insert(f->ue).second) continue;
        contenders.push_back({f->ue, std::min(f->head_bits, f->backlog_bits)});
        contender_flow.push_back(f);
      }
      if (contenders.empty()) break;
      const int cost = config_.access_cost_prbs;
      const int m = access_opportunities(leaf.interval, cost);
      const auto outcomes = schedule_one_shot(contenders, m, access_rng_);
      for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const auto& o = outcomes[i];
        const MacFlowView& f = *contender_flow[i];
        AccessOutcome reported = o;
        if (o.result == AccessResult::success) {
          const PrbInterval prbs{leaf.interval.begin + o.resource * cost,
                                 leaf.interval.begin + (o.resource + 1) * cost};
          grant_block(out.allocation, prbs, o.ue, "one_shot", grid_.prbs_per_slot());
          granted += cost;
          const double capacity = static_cast<double>(cost) * per_prb(*ue_of[o.ue], leaf.portion);
          reported.payload_bits = std::min(o.payload_bits, capacity);
          serve(f, reported.payload_bits);
          backoff_until_.erase(f.flow);
        } else if (o.result == AccessResult::collision) {
          const int wait = backoff_rng_.uniform_int(config_.backoff_min_epochs,
                                                    config_.backoff_max_epochs);
          backoff_until_[f.flow] =
              input.slot + static_cast<std::uint64_t>(wait) *
                               static_cast<std::uint64_t>(config_.epoch_slots);
        }
        out.access.emplace_back(f.flow, reported);
      }
      break;
    }
  }
  out.leaf_granted[path] += granted;
  out.leaf_assigned[path] += leaf.interval.size();
}

MacSlotOutput MacCoordinator::run_mac_epoch(const MacSlotInput& input) {
  MacSlotOutput out;
  out.allocation.slot_index = input.slot;
  if (!has_plan_ || input.slot % static_cast<std::uint64_t>(config_.epoch_slots) == 0) {
    refresh_plan(input, out.events);
    out.plan_refreshed = true;
  }

  std::map<UeId, double> served_by_ue;
  auto visit = [&](auto&& self, const PlanNode& node, const std::string& scope) -> void {
    for (const auto& child : node.children) {
      const std::string path =
          scope.empty() ? to_string(child.key) : scope + "/" + to_string(child.key);
      if (child.is_leaf() && child.scheduler) {
        schedule_leaf(child, path, input, out, served_by_ue);
      } else {
        self(self, child, child.key.label);
      }
    }
  };
  visit(visit, plan_, "");

  for (const auto& u : input.ues) {
    double& avg = pf_average_.try_emplace(u.ue, kPfInitialAverage).first->second;
    auto it = served_by_ue.find(u.ue);
    const double served = it == served_by_ue.end() ? 0.0 : it->second;
    avg = (1.0 - config_.pf_ewma) * avg + config_.pf_ewma * served;
  }

  std::map<FlowId, double> served_of;
  for (const auto& s : out.served) served_of[s.flow] += s.bits;
  for (const auto& f : input.flows) {
    ClassFeedback& fb = out.feedback[f.cls];
    const double served = served_of.contains(f.flow) ? served_of[f.flow] : 0.0;
    fb.served_bits += served;
    fb.unserved_backlog_bits += std::max(f.backlog_bits - served, 0.0);
  }
  return out;
}

}  // namespace hrrm::mac
