#include "hrrm/sim/world.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hrrm/abstraction/common_unit.hpp"
#include "hrrm/abstraction/descriptor.hpp"
#include "hrrm/abstraction/link.hpp"
#include "hrrm/core/error.hpp"
#include "hrrm/core/metrics.hpp"
#include "hrrm/core/rng.hpp"

namespace hrrm::sim {

namespace {

/// Key domain for PHY loss draws, disjoint from the subsystem streams.
constexpr std::uint64_t kPhyLossDomain = 5;

uts::FeatureCatalog catalog_for(const std::vector<std::string>& features) {
  uts::FeatureCatalog catalog;
  for (const auto& f : features) {
    if (f == "mlb") catalog.add(uts::load_balancing_record(), uts::evaluate_load_balancing);
    if (f == "ca") catalog.add(uts::carrier_aggregation_record(), uts::evaluate_carrier_aggregation);
    if (f == "dc") catalog.add(uts::dual_connectivity_record(), uts::evaluate_dual_connectivity);
  }
  return catalog;
}

std::string join_cells(const std::vector<CellId>& cells, char sep) {
  std::string out;
  for (const auto& c : cells) {
    if (!out.empty()) out += sep;
    out += to_string(c);
  }
  return out;
}

}  // namespace

World::World(scenario::ScenarioConfig config, std::uint64_t seed)
    : config_(std::move(config)), seed_(seed) {
  scenario::fill_defaults(config_);
  scenario::validate(config_);

  const auto& ch = config_.channel;
  channel_ = {ch.fading_scale,   ch.interference_margin_db, ch.macro_exponent,
              ch.small_exponent, ch.min_distance_m,         ch.seed.value_or(seed)};

  int finest = 0;
  for (const auto& c : config_.cells) finest = std::max(finest, c.numerology);
  slot_seconds_ = 1e-3 / static_cast<double>(1 << finest);

  net_.scenario = config_.tag;
  net_.service_modes = config_.pdcp.service_modes;
  lb_ = {config_.pdcp.leave_above, config_.pdcp.join_below};

  const double uts_epoch = static_cast<double>(config_.uts.epoch_slots);
  for (const auto& cc : config_.cells) {
    CellRuntime rt(cc, scenario::cell_of(cc));
    rt.cell.validate();
    rt.descriptor = describe_cell(rt.cell, 0.0);
    rt.stride = std::uint64_t{1} << (finest - cc.numerology);

    mac::MacConfig mc;
    mc.epoch_slots = config_.mac.epoch_slots;
    mc.min_guarantee = config_.mac.min_guarantee;
    mc.access_cost_prbs = config_.mac.access_cost_prbs;
    mc.pf_ewma = config_.mac.pf_ewma;
    mc.backoff_min_epochs = config_.mac.backoff_min_epochs;
    mc.backoff_max_epochs = config_.mac.backoff_max_epochs;
    mc.partition_by = config_.mac.partition_by;
    mc.class_schedulers = config_.mac.class_schedulers;
    mc.portions = cc.portions;
    rt.mac = std::make_unique<mac::MacCoordinator>(rt.cell.grid, mc, seed, cc.id.value);

    uts::CellState cs;
    cs.id = cc.id;
    cs.site = cc.site;
    cs.descriptor = rt.descriptor;
    cs.epoch_capacity_bits =
        rt.descriptor.capacity_score * uts_epoch / static_cast<double>(rt.stride);
    net_.cells.emplace(cc.id, cs);
    cells_.emplace(cc.id, std::move(rt));
  }

  for (const auto& uc : config_.ues) {
    uts::UeState ue;
    ue.id = uc.id;
    if (uc.serving) {
      ue.serving = *uc.serving;
    } else {
      double best = -INFINITY;
      for (const auto& [id, rt] : cells_) {
        const double rx = received_power_dbm(channel_, rt.cell, uc.position);
        if (rx > best) {
          best = rx;
          ue.serving = id;
        }
      }
    }
    ue.secondaries = uc.secondaries;
    ue.dc_capable = uc.capabilities.contains(std::string(kDualConnectivityFlag));
    ue.target_bps = uc.target_bps;
    net_.ues.emplace(uc.id, ue);
  }

  for (const auto& fc : config_.flows) {
    FlowRuntime fr;
    fr.config = fc;
    fr.generator = std::make_unique<TrafficGenerator>(fc.generator, seed, fc.id);
    fr.rx.t_reorder = config_.pdcp.t_reorder_slots;
    net_.add_flow(fc.ue, fc.id, fc.cls);
    flows_.emplace(fc.id, std::move(fr));
  }

  if (config_.uts.enabled) {
    uts::MnoStrategy strategy;
    strategy.scenario = config_.tag;
    strategy.ranking = config_.uts.ranking;
    strategy.thresholds = config_.uts.thresholds;
    strategy.hysteresis_epochs = config_.uts.hysteresis_epochs;
    strategy.time_to_trigger = config_.uts.time_to_trigger;
    uts_ = std::make_unique<uts::UtsController>(catalog_for(config_.uts.features), strategy);
  }
}

World::~World() = default;

Position World::ue_position(UeId ue, std::uint64_t clock) const {
  const auto* uc = config_.find_ue(ue);
  const double t = static_cast<double>(clock) * slot_seconds_;
  return {uc->position.x + uc->velocity.x * t, uc->position.y + uc->velocity.y * t};
}

void World::log(const std::string& subsystem, const std::string& kind,
                const std::string& details) {
  events_.push_back({clock_, subsystem, kind, details});
}

double World::flow_backlog_bits(FlowId flow) const {
  double sum = 0.0;
  for (const auto& [id, cell] : cells_) {
    auto it = cell.queues.find(flow);
    if (it == cell.queues.end()) continue;
    for (const auto& q : it->second) sum += q.remaining;
  }
  return sum;
}

const pdcp::ReceiverState& World::receiver(FlowId flow) const { return flows_.at(flow).rx; }

const std::vector<std::uint32_t>& World::delivered_sns(FlowId flow) const {
  return flows_.at(flow).delivered_sns;
}

void World::close_window() {
  const double seconds = static_cast<double>(clock_ - window_start_) * slot_seconds_;
  for (auto& [id, fr] : flows_) {
    const auto& ue = net_.ues.at(fr.config.ue);
    const auto& state = ue.flows.at(id);
    MetricsRow row;
    row.epoch = window_index_;
    row.end_slot = clock_;
    row.flow = id;
    row.ue = fr.config.ue;
    row.cls = fr.config.cls;
    row.mode = std::string(pdcp::to_string(state.mode));
    row.legs = join_cells(ue.leg_cells(), ';');
    row.arrived_bits = fr.window_arrived;
    row.delivered_bits = fr.window_delivered;
    row.throughput_bps = seconds > 0.0 ? fr.window_delivered / seconds : 0.0;
    row.sdus_delivered = fr.window_sdus;
    row.sdus_lost = fr.rx.lost - fr.window_lost_base;
    rows_.push_back(row);

    fr.window_arrived = 0.0;
    fr.window_delivered = 0.0;
    fr.window_sdus = 0;
    fr.window_lost_base = fr.rx.lost;
  }
  ++window_index_;
  window_start_ = clock_;
}

void World::run_uts() {
  const double epoch_seconds = static_cast<double>(config_.uts.epoch_slots) * slot_seconds_;
  for (auto& [id, cs] : net_.cells) {
    cs.load = {"queue_occupancy", cells_.at(id).routed_epoch_bits, cs.epoch_capacity_bits};
  }
  for (auto& [id, ue] : net_.ues) {
    const Position pos = ue_position(id, clock_);
    ue.measurements.clear();
    for (const auto& [cid, rt] : cells_) {
      ue.measurements[cid] = {"rsrp_dbm", received_power_dbm(channel_, rt.cell, pos), std::nullopt};
    }
    ue.offered_bits = ue_window_arrived_[id];
    ue.achieved_bps = ue_window_delivered_[id] / epoch_seconds;
  }

  const auto result = uts_->run_epoch(net_);
  for (const auto& ev : result.applied.events) {
    log("uts", ev.kind, "ue=" + to_string(ev.ue) + " " + ev.details);
  }
  steering_actions_ += result.applied.applied.size();
  for (const auto& a : result.applied.applied) {
    for (auto& [fid, fr] : flows_) {
      if (fr.config.ue == a.action.ue) fr.legs_used.clear();
    }
  }
  forward_released_queues();
}

void World::forward_released_queues() {
  for (auto& [cid, cell] : cells_) {
    for (auto& [fid, queue] : cell.queues) {
      if (queue.empty()) continue;
      const auto& state = net_.ues.at(flows_.at(fid).config.ue).flows.at(fid);
      if (state.find_leg(cid) != nullptr) continue;
      const CellId to = state.legs.front().cell;
      log("pdcp", "forward",
          "flow=" + to_string(fid) + " from=" + to_string(cid) + " to=" + to_string(to) +
              " pdus=" + std::to_string(queue.size()));
      auto& dest = cells_.at(to).queues[fid];
      dest.insert(dest.end(), queue.begin(), queue.end());
      queue.clear();
    }
  }
}

void World::route(FlowId flow, const std::vector<Arrival>& arrivals) {
  FlowRuntime& fr = flows_.at(flow);
  pdcp::FlowState& state = net_.ues.at(fr.config.ue).flows.at(flow);

  std::vector<pdcp::LegStatus> status;
  for (const auto& leg : state.legs) {
    double queued = 0.0;
    const auto& queues = cells_.at(leg.cell).queues;
    if (auto it = queues.find(flow); it != queues.end()) {
      for (const auto& q : it->second) queued += q.remaining;
    }
    status.push_back({queued, to_common_unit(net_.cells.at(leg.cell).load).value()});
  }
  pdcp::refresh_legs(state, status);

  const std::uint64_t epoch = clock_ / config_.uts.epoch_slots;
  for (const auto& a : arrivals) {
    for (const auto& t : pdcp::route_packet(state, a.bits, epoch, lb_)) {
      CellRuntime& cell = cells_.at(t.cell);
      cell.queues[flow].push_back({{t.sn, t.bits, a.created_slot}, t.bits});
      cell.routed_epoch_bits += t.bits;
      fr.leg_bits[t.cell] += t.bits;
      if (fr.legs_used.insert(t.cell).second) {
        log("pdcp", "route",
            "flow=" + to_string(flow) + " sn=" + std::to_string(t.sn) + " cell=" +
                to_string(t.cell) + " mode=" + std::string(pdcp::to_string(state.mode)));
      }
    }
  }
}

void World::run_cell(CellRuntime& cell, std::vector<Completed>& completed) {
  const CellId cid = cell.cell.id;
  const auto& grid = cell.cell.grid;
  mac::MacSlotInput in;
  in.slot = clock_ / cell.stride;

  for (const auto& [uid, ue] : net_.ues) {
    const auto legs = ue.leg_cells();
    if (std::find(legs.begin(), legs.end(), cid) == legs.end()) continue;
    const double sinr = channel_sinr(channel_, uid, ue_position(uid, clock_), cell.cell, clock_);
    mac::MacUeView view;
    view.ue = uid;
    view.capabilities = config_.find_ue(uid)->capabilities;
    if (cell.config.portions.empty()) {
      view.per_prb_bits.push_back(bits_per_prb(sinr, cell.cell.waveform_eff, grid));
    } else {
      for (const auto& p : cell.config.portions) {
        view.per_prb_bits.push_back(bits_per_prb(sinr, p.waveform_eff, grid));
      }
    }
    in.ues.push_back(std::move(view));

    for (const auto& [fid, state] : ue.flows) {
      if (state.find_leg(cid) == nullptr) continue;
      const auto& fc = flows_.at(fid).config;
      mac::MacFlowView fv;
      fv.flow = fid;
      fv.ue = uid;
      fv.cls = fc.cls;
      fv.slice = fc.slice;
      const auto& queue = cell.queues[fid];
      for (const auto& q : queue) fv.backlog_bits += q.remaining;
      fv.head_bits = queue.empty() ? 0.0 : queue.front().remaining;
      fv.sps_period_slots = fc.sps_period_slots;
      fv.sps_prbs = fc.sps_prbs;
      in.flows.push_back(fv);
    }
  }

  const mac::MacSlotOutput out = cell.mac->run_mac_epoch(in);
  const auto violations = validate_allocation_map(out.allocation, grid);
  if (!violations.empty()) {
    throw std::logic_error("cell " + to_string(cid) + " slot " + std::to_string(in.slot) +
                           ": allocation violation at PRB " +
                           std::to_string(violations.front().prb));
  }
  if (observer_) observer_({clock_, cid, in.slot, &grid, &out, &cell.mac->plan()});

  const std::string prefix = "cell=" + to_string(cid);
  for (const auto& ev : out.events) log("mac", ev.kind, prefix + " " + ev.details);
  for (const auto& [fid, o] : out.access) {
    if (o.result == mac::AccessResult::deferred) {
      ++access_.deferred;
    } else {
      ++access_.attempts;
      if (o.result == mac::AccessResult::success) ++access_.successes;
      if (o.result == mac::AccessResult::collision) ++access_.collisions;
    }
    log("rach", std::string(mac::to_string(o.result)),
        prefix + " flow=" + to_string(fid) + " ue=" + to_string(o.ue) +
            " resource=" + std::to_string(o.resource));
  }
  for (const auto& [path, n] : out.leaf_granted) leaf_granted_[to_string(cid) + "/" + path] += n;
  for (const auto& [path, n] : out.leaf_assigned) leaf_assigned_[to_string(cid) + "/" + path] += n;

  for (const auto& s : out.served) {
    auto& queue = cell.queues[s.flow];
    double bits = s.bits;
    double drained = 0.0;
    while (bits > 0.0 && !queue.empty()) {
      QueuedPdu& head = queue.front();
      const double take = std::min(head.remaining, bits);
      head.remaining -= take;
      bits -= take;
      drained += take;
      if (head.remaining <= 0.0) {
        completed.push_back({cid, s.flow, head});
        queue.pop_front();
      }
    }
    cell.served_bits += drained;
    flows_.at(s.flow).served_bits += drained;
  }
}

void World::deliver(const Completed& c) {
  FlowRuntime& fr = flows_.at(c.flow);
  const double p = cells_.at(c.cell).config.drop_probability;
  if (p > 0.0 &&
      counter_uniform(channel_.seed, kPhyLossDomain, c.flow.value, c.pdu.pdu.sn, c.cell.value) < p) {
    return;
  }
  const auto pdus = pdcp::reorder_deliver(fr.rx, c.pdu.pdu, clock_);
  for (const auto& d : pdus) {
    fr.delivered_bits += d.bits;
    fr.window_delivered += d.bits;
    ++fr.window_sdus;
    ue_window_delivered_[fr.config.ue] += d.bits;
    delivered_total_ += d.bits;
    fr.delivered_sns.push_back(d.sn);
    const std::uint64_t latency = clock_ + 1 - d.created_slot;
    fr.latencies_slots.push_back(static_cast<double>(latency));
    if (fr.config.generator.kind == scenario::GeneratorKind::periodic_deadline &&
        latency > fr.config.generator.deadline_slots) {
      ++fr.deadline_misses;
    }
  }
}

void World::step_slot() {
  const std::uint64_t uts_epoch = config_.uts.epoch_slots;

  std::map<FlowId, std::vector<Arrival>> arrived;
  for (auto& [fid, fr] : flows_) {
    auto a = fr.generator->arrivals(clock_, flow_backlog_bits(fid));
    if (a.empty()) continue;
    for (const auto& x : a) {
      fr.arrived_bits += x.bits;
      fr.window_arrived += x.bits;
      ue_window_arrived_[fr.config.ue] += x.bits;
    }
    fr.sdus_arrived += a.size();
    arrived.emplace(fid, std::move(a));
  }

  if (clock_ > 0 && clock_ % uts_epoch == 0) {
    close_window();
    if (uts_) run_uts();
    for (auto& [cid, cell] : cells_) cell.routed_epoch_bits = 0.0;
    ue_window_arrived_.clear();
    ue_window_delivered_.clear();
  }

  for (const auto& [fid, a] : arrived) route(fid, a);

  std::vector<Completed> completed;
  for (auto& [cid, cell] : cells_) {
    if (clock_ % cell.stride == 0) run_cell(cell, completed);
  }

  for (const auto& c : completed) deliver(c);
  for (auto& [fid, fr] : flows_) {
    for (const auto& pdu : pdcp::expire_reorder_timer(fr.rx, clock_)) {
      fr.delivered_bits += pdu.bits;
      fr.window_delivered += pdu.bits;
      ++fr.window_sdus;
      ue_window_delivered_[fr.config.ue] += pdu.bits;
      delivered_total_ += pdu.bits;
      fr.delivered_sns.push_back(pdu.sn);
      fr.latencies_slots.push_back(static_cast<double>(clock_ + 1 - pdu.created_slot));
    }
  }
  ++clock_;
}

void World::run() {
  while (clock_ < config_.sim.horizon_slots) step_slot();
  if (!closed_ && clock_ > window_start_) close_window();
  closed_ = true;
}

MetricsReport World::report() const {
  MetricsReport r;
  r.name = config_.name;
  r.seed = seed_;
  r.slots = clock_;
  r.slot_seconds = slot_seconds_;
  const double seconds = static_cast<double>(clock_) * slot_seconds_;

  std::map<TrafficClass, std::vector<double>> by_class;
  for (const auto& [fid, fr] : flows_) {
    FlowReport f;
    f.flow = fid;
    f.ue = fr.config.ue;
    f.cls = fr.config.cls;
    f.mode = std::string(pdcp::to_string(net_.ues.at(fr.config.ue).flows.at(fid).mode));
    f.arrived_bits = fr.arrived_bits;
    f.served_bits = fr.served_bits;
    f.delivered_bits = fr.delivered_bits;
    f.throughput_bps = seconds > 0.0 ? fr.delivered_bits / seconds : 0.0;
    if (!fr.latencies_slots.empty()) {
      const double to_ms = slot_seconds_ * 1e3;
      f.latency_p50_ms = percentile(fr.latencies_slots, 50.0) * to_ms;
      f.latency_p95_ms = percentile(fr.latencies_slots, 95.0) * to_ms;
      f.latency_p99_ms = percentile(fr.latencies_slots, 99.0) * to_ms;
    }
    f.sdus_arrived = fr.sdus_arrived;
    f.sdus_delivered = fr.delivered_sns.size();
    f.sdus_lost = fr.rx.lost;
    f.duplicates_discarded = fr.rx.duplicates;
    f.deadline_misses = fr.deadline_misses;
    double total = 0.0;
    for (const auto& [c, b] : fr.leg_bits) total += b;
    for (const auto& [c, b] : fr.leg_bits) f.leg_split[c] = total > 0.0 ? b / total : 0.0;
    by_class[f.cls].push_back(f.throughput_bps);
    r.flows.push_back(std::move(f));
  }
  for (const auto& [cls, values] : by_class) {
    try {
      r.fairness[cls] = compute_fairness(values);
    } catch (const DegenerateInputError&) {
      r.fairness[cls] = std::nullopt;
    }
  }

  r.access = access_;
  r.access.success_rate =
      access_.attempts > 0
          ? static_cast<double>(access_.successes) / static_cast<double>(access_.attempts)
          : 0.0;
  for (const auto& [key, assigned] : leaf_assigned_) {
    auto it = leaf_granted_.find(key);
    r.partition_utilization[key] = assigned > 0.0 && it != leaf_granted_.end() ? it->second / assigned : 0.0;
  }
  for (const auto& [cid, cell] : cells_) r.cell_served_bits[cid] = cell.served_bits;
  if (uts_) {
    r.uts_epochs = uts_->epochs_run();
    r.handovers = uts_->history().handovers();
    r.ping_pongs = count_ping_pongs(uts_->history().changes(), config_.uts.hysteresis_epochs);
  }
  r.steering_actions = steering_actions_;
  r.total_delivered_bits = delivered_total_;
  return r;
}

SimulationResult simulate(const scenario::ScenarioConfig& config, std::uint64_t seed,
                          const SlotObserver& observer) {
  World world(config, seed);
  if (observer) world.set_observer(observer);
  world.run();
  return {world.report(), world.metric_rows(), world.events()};
}

MetricsReport run_scenario(const scenario::ScenarioConfig& config, std::uint64_t seed) {
  return simulate(config, seed).report;
}

}  // namespace hrrm::sim
