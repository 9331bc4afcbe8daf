#include <cmath>

#include "doctest.h"
#include "hrrm/core/metrics.hpp"
#include "hrrm/scenario/config.hpp"
#include "hrrm/sim/channel.hpp"
#include "hrrm/sim/traffic.hpp"
#include "hrrm/sim/world.hpp"

using namespace hrrm;
using namespace hrrm::sim;
using hrrm::scenario::GeneratorKind;

namespace {

scenario::ScenarioConfig one_cell(GeneratorKind kind, std::uint64_t horizon = 400) {
  scenario::ScenarioConfig c;
  c.name = "unit";
  scenario::CellConfig cell;
  cell.id = CellId(1);
  cell.prbs = 25;
  c.cells.push_back(cell);
  scenario::UeConfig ue;
  ue.id = UeId(1);
  ue.position = {120.0, 0.0};
  ue.capabilities = {"nr"};
  c.ues.push_back(ue);
  scenario::FlowConfig flow;
  flow.id = FlowId(1);
  flow.ue = UeId(1);
  flow.generator.kind = kind;
  flow.generator.rate_per_slot = 0.5;
  c.flows.push_back(flow);
  c.sim.horizon_slots = horizon;
  scenario::fill_defaults(c);
  return c;
}

Cell macro_at_origin() {
  Cell c{CellId(1), "nr", CarrierGrid(3.5e9, 50, 0, 180e3), {0.0, 0.0}, 43.0};
  return c;
}

}  // namespace

TEST_CASE("pathloss grows by ten times the exponent per decade") {
  ChannelModel m;
  const Cell cell = macro_at_origin();
  CHECK(pathloss_db(m, cell, 200.0) - pathloss_db(m, cell, 100.0) ==
        doctest::Approx(35.0 * std::log10(2.0)));
  CHECK(pathloss_db(m, cell, 200.0) - pathloss_db(m, cell, 100.0) ==
        doctest::Approx(10.54).epsilon(1e-3));
  CHECK(pathloss_db(m, cell, 0.1) == doctest::Approx(pathloss_db(m, cell, 1.0)));
  Cell small = cell;
  small.cell_class = CellClass::small;
  CHECK(pathloss_db(m, small, 1000.0) - pathloss_db(m, small, 100.0) == doctest::Approx(22.0));
}

TEST_CASE("sinr without fading is the same every slot") {
  ChannelModel m;
  m.fading_scale = 0.0;
  const Cell cell = macro_at_origin();
  const double s0 = channel_sinr(m, UeId(1), {100.0, 0.0}, cell, 0);
  for (std::uint64_t slot : {1u, 17u, 9999u}) {
    CHECK(channel_sinr(m, UeId(1), {100.0, 0.0}, cell, slot) == s0);
  }
  CHECK(s0 == doctest::Approx(received_power_dbm(m, cell, {100.0, 0.0}) - noise_floor_dbm(cell) -
                              m.interference_margin_db));
}

TEST_CASE("fading is keyed by seed, ue, cell and slot") {
  ChannelModel m;
  m.seed = 9;
  const Cell cell = macro_at_origin();
  CHECK(fading_db(m, UeId(1), CellId(1), 5) == fading_db(m, UeId(1), CellId(1), 5));
  CHECK(fading_db(m, UeId(1), CellId(1), 5) != fading_db(m, UeId(1), CellId(1), 6));
  CHECK(fading_db(m, UeId(1), CellId(1), 5) != fading_db(m, UeId(2), CellId(1), 5));
  ChannelModel other = m;
  other.seed = 10;
  CHECK(fading_db(m, UeId(1), CellId(1), 5) != fading_db(other, UeId(1), CellId(1), 5));
  // Mean power of unit-mean exponential fading is 1 (0 dB in the linear domain).
  double sum = 0.0;
  const int n = 20000;
  for (int s = 0; s < n; ++s) sum += std::pow(10.0, fading_db(m, UeId(1), CellId(1), s) / 10.0);
  CHECK(sum / n == doctest::Approx(1.0).epsilon(0.05));
  (void)cell;
}

TEST_CASE("poisson arrivals match their rate") {
  scenario::GeneratorConfig g;
  g.kind = GeneratorKind::poisson_sporadic;
  g.rate_per_slot = 0.01;
  TrafficGenerator gen(g, 4, FlowId(1));
  std::uint64_t count = 0;
  for (std::uint64_t s = 0; s < 100000; ++s) count += gen_traffic(gen, s, 0.0).size();
  CHECK(std::abs(static_cast<double>(count) - 1000.0) <= 3.0 * std::sqrt(1000.0));
}

TEST_CASE("periodic arrivals carry deadlines") {
  scenario::GeneratorConfig g;
  g.kind = GeneratorKind::periodic_deadline;
  g.period_slots = 10;
  g.deadline_slots = 4;
  TrafficGenerator gen(g, 1, FlowId(1));
  std::vector<std::uint64_t> at;
  for (std::uint64_t s = 0; s < 25; ++s) {
    for (const auto& a : gen.arrivals(s, 0.0)) {
      at.push_back(s);
      CHECK(a.deadline_slot == s + 4);
    }
  }
  CHECK(at == std::vector<std::uint64_t>{0, 10, 20});
}

TEST_CASE("full buffer keeps the backlog topped up") {
  scenario::GeneratorConfig g;
  g.kind = GeneratorKind::full_buffer;
  g.buffer_bits = 50000;
  g.packet_bits = 12000;
  TrafficGenerator gen(g, 1, FlowId(1));
  double bits = 0.0;
  for (const auto& a : gen.arrivals(0, 0.0)) bits += a.bits;
  CHECK(bits >= 50000.0);
  CHECK(bits < 50000.0 + 12000.0);
  CHECK(gen.arrivals(1, 60000.0).empty());
  g.buffer_bits = 0.0;
  TrafficGenerator empty_target(g, 1, FlowId(1));
  CHECK(empty_target.arrivals(0, 0.0).size() == 1);
}

TEST_CASE("the clock advances one tick per step") {
  World w(one_cell(GeneratorKind::full_buffer), 3);
  CHECK(w.clock() == 0);
  w.step_slot();
  w.step_slot();
  CHECK(w.clock() == 2);
  CHECK(w.slot_seconds() == doctest::Approx(1e-3));
}

TEST_CASE("delivered bits never decrease") {
  World w(one_cell(GeneratorKind::poisson_sporadic), 3);
  double last = 0.0;
  for (int i = 0; i < 400; ++i) {
    w.step_slot();
    CHECK(w.delivered_bits_total() >= last);
    last = w.delivered_bits_total();
  }
  CHECK(last > 0.0);
}

TEST_CASE("steering only happens on epoch boundaries") {
  auto cfg = one_cell(GeneratorKind::full_buffer, 1000);
  scenario::CellConfig second = cfg.cells.front();
  second.id = CellId(2);
  second.position = {200.0, 0.0};
  cfg.cells.push_back(second);
  cfg.ues.front().capabilities.insert("dc");
  cfg.ues.front().target_bps = 1e9;
  cfg.uts.epoch_slots = 100;
  scenario::fill_defaults(cfg);
  const auto result = simulate(cfg, 5);
  bool any = false;
  for (const auto& e : result.events) {
    if (e.subsystem != "uts") continue;
    any = true;
    CHECK(e.slot > 0);
    CHECK(e.slot % 100 == 0);
  }
  CHECK(any);
  CHECK(result.report.uts_epochs == 9);
}

TEST_CASE("an empty network runs to the horizon") {
  scenario::ScenarioConfig cfg;
  cfg.sim.horizon_slots = 50;
  const auto r = simulate(cfg, 1);
  CHECK(r.report.slots == 50);
  CHECK(r.report.flows.empty());
  CHECK(r.report.total_delivered_bits == 0.0);
  CHECK(r.rows.empty());
}

TEST_CASE("served bits are arrivals minus what is still queued") {
  auto cfg = one_cell(GeneratorKind::poisson_sporadic, 700);
  World w(cfg, 8);
  w.run();
  const auto report = w.report();
  REQUIRE(report.flows.size() == 1);
  const auto& f = report.flows.front();
  CHECK(f.arrived_bits == doctest::Approx(f.served_bits + w.flow_backlog_bits(FlowId(1))));
  CHECK(f.delivered_bits <= f.served_bits + 1e-9);
  CHECK(report.cell_served_bits.at(CellId(1)) == doctest::Approx(f.served_bits));
  CHECK(f.sdus_lost == 0);
  const auto& sns = w.delivered_sns(FlowId(1));
  CHECK(std::is_sorted(sns.begin(), sns.end()));
}

TEST_CASE("latency percentiles are ordered") {
  const auto r = simulate(one_cell(GeneratorKind::poisson_sporadic, 2000), 4);
  const auto& f = r.report.flows.front();
  REQUIRE(f.latency_p50_ms.has_value());
  CHECK(*f.latency_p50_ms <= *f.latency_p95_ms);
  CHECK(*f.latency_p95_ms <= *f.latency_p99_ms);
  CHECK(*f.latency_p50_ms >= 1.0);
}

TEST_CASE("periodic flows are scheduled whatever the fading draw") {
  auto cfg = one_cell(GeneratorKind::periodic_deadline, 600);
  cfg.flows.front().cls = TrafficClass::urllc;
  cfg.flows.front().generator.packet_bits = 800;
  cfg.uts.enabled = false;
  auto other = cfg;
  cfg.channel.seed = 1;
  other.channel.seed = 2;
  const auto a = simulate(cfg, 6).report.flows.front();
  const auto b = simulate(other, 6).report.flows.front();
  CHECK(a.sdus_delivered == b.sdus_delivered);
  CHECK(a.deadline_misses == 0);
}

TEST_CASE("duplicated flows take the faster copy") {
  auto cfg = one_cell(GeneratorKind::periodic_deadline, 2000);
  scenario::CellConfig second = cfg.cells.front();
  second.id = CellId(2);
  second.site = "";
  cfg.cells.push_back(second);
  cfg.cells[0].drop_probability = 0.2;
  cfg.cells[1].drop_probability = 0.2;
  cfg.ues.front().serving = CellId(1);
  cfg.ues.front().secondaries = {CellId(2)};
  cfg.flows.front().cls = TrafficClass::urllc;
  cfg.flows.front().generator.packet_bits = 800;
  cfg.flows.front().generator.period_slots = 2;
  cfg.uts.enabled = false;
  scenario::fill_defaults(cfg);
  const auto r = simulate(cfg, 12).report;
  const auto& f = r.flows.front();
  CHECK(f.mode == "duplicate");
  CHECK(f.leg_split.size() == 2);
  // Both copies are lost with probability 0.04.
  const double loss = static_cast<double>(f.sdus_lost) / static_cast<double>(f.sdus_arrived);
  CHECK(loss < 0.1);
  CHECK(f.duplicates_discarded > 0);
  CHECK(r.cell_served_bits.at(CellId(1)) + r.cell_served_bits.at(CellId(2)) >
        f.delivered_bits);
}

TEST_CASE("ping pong counting") {
  using uts::ActionKind;
  std::vector<uts::AttachmentChange> ch{
      {1, UeId(1), CellId(1), false, ActionKind::handover},
      {1, UeId(1), CellId(2), true, ActionKind::handover},
      {3, UeId(1), CellId(2), false, ActionKind::handover},
      {3, UeId(1), CellId(1), true, ActionKind::handover},
      {30, UeId(1), CellId(1), false, ActionKind::handover},
      {30, UeId(1), CellId(2), true, ActionKind::handover},
  };
  CHECK(count_ping_pongs(ch, 10) == 1);
  CHECK(count_ping_pongs(ch, 30) == 2);
}
