#include <algorithm>
#include <random>

#include "doctest.h"
#include "hrrm/core/error.hpp"
#include "hrrm/pdcp/flow.hpp"
#include "hrrm/pdcp/receiver.hpp"

using namespace hrrm;
using namespace hrrm::pdcp;

namespace {

Leg leg(std::uint32_t cell, double capacity) {
  CapabilityDescriptor d;
  d.descriptor_id = cell;
  d.capacity_score = capacity;
  return make_leg(CellId(cell), d);
}

std::vector<std::uint32_t> sns(const std::vector<Pdu>& pdus) {
  std::vector<std::uint32_t> out;
  for (const auto& p : pdus) out.push_back(p.sn);
  return out;
}

}  // namespace

TEST_CASE("mode text") {
  for (auto m : {FlowMode::aggregate, FlowMode::load_balance, FlowMode::duplicate}) {
    CHECK(parse_flow_mode(to_string(m)) == m);
  }
  const auto modes = default_service_modes();
  CHECK(modes.at(TrafficClass::urllc) == FlowMode::duplicate);
  CHECK(modes.at(TrafficClass::embb) == FlowMode::aggregate);
  CHECK(modes.at(TrafficClass::legacy_mbb) == FlowMode::load_balance);
}

TEST_CASE("configure_legs") {
  CHECK_THROWS_AS(configure_legs(FlowId(1), {leg(1, 100)}, FlowMode::duplicate, TrafficClass::urllc),
                  ModeArityError);
  CHECK_THROWS_AS(configure_legs(FlowId(1), {}, FlowMode::aggregate, TrafficClass::embb),
                  NoLegsError);
  auto agg = configure_legs(FlowId(1), {leg(1, 100), leg(2, 100)}, FlowMode::aggregate,
                            TrafficClass::embb);
  CHECK(agg.next_sn == 0);
  CHECK(agg.active_leg == 0);
  auto dup = configure_legs(FlowId(2), {leg(1, 100), leg(2, 100)}, FlowMode::duplicate,
                            TrafficClass::urllc);
  CHECK(dup.mode == FlowMode::duplicate);
  CHECK(dup.legs.size() == 2);
}

TEST_CASE("aggregate routes to the smallest delay estimate") {
  auto s = configure_legs(FlowId(1), {leg(1, 100), leg(2, 100)}, FlowMode::aggregate,
                          TrafficClass::embb);
  std::vector<LegStatus> status{{500.0, 0.1}, {100.0, 0.1}};
  refresh_legs(s, status);
  CHECK(s.legs[0].delay_estimate == doctest::Approx(5.0));
  CHECK(s.legs[1].delay_estimate == doctest::Approx(1.0));
  const auto t = route_packet(s, 50.0, 0);
  REQUIRE(t.size() == 1);
  CHECK(t[0].cell == CellId(2));
  CHECK(t[0].sn == 0);
  CHECK(s.next_sn == 1);
  CHECK(s.legs[1].queue_bits == doctest::Approx(150.0));

  std::vector<LegStatus> wrong{{0.0, 0.0}};
  CHECK_THROWS_AS(refresh_legs(s, wrong), std::invalid_argument);
}

TEST_CASE("aggregate spreads traffic in proportion to leg capacity") {
  auto s = configure_legs(FlowId(1), {leg(1, 100), leg(2, 300)}, FlowMode::aggregate,
                          TrafficClass::embb);
  int on_second = 0;
  for (int i = 0; i < 400; ++i) on_second += route_packet(s, 10.0, 0)[0].cell == CellId(2);
  CHECK(on_second == doctest::Approx(300).epsilon(0.02));
}

TEST_CASE("load balance stays on one leg below the thresholds") {
  auto s = configure_legs(FlowId(1), {leg(1, 100), leg(2, 100)}, FlowMode::load_balance,
                          TrafficClass::legacy_mbb);
  std::vector<LegStatus> status{{0.0, 0.6}, {0.0, 0.1}};
  refresh_legs(s, status);
  for (std::uint64_t epoch = 0; epoch < 20; ++epoch) {
    for (int i = 0; i < 10; ++i) CHECK(route_packet(s, 10.0, epoch)[0].cell == CellId(1));
  }
}

TEST_CASE("load balance switches at most once per epoch") {
  auto s = configure_legs(FlowId(1), {leg(1, 100), leg(2, 100)}, FlowMode::load_balance,
                          TrafficClass::legacy_mbb);
  std::vector<LegStatus> hot_first{{0.0, 0.9}, {0.0, 0.1}};
  refresh_legs(s, hot_first);
  CHECK(route_packet(s, 10.0, 3)[0].cell == CellId(2));
  // Both legs now look overloaded-then-idle the other way round; the switch
  // already happened this epoch, so the flow stays.
  std::vector<LegStatus> hot_second{{0.0, 0.1}, {0.0, 0.9}};
  refresh_legs(s, hot_second);
  CHECK(route_packet(s, 10.0, 3)[0].cell == CellId(2));
  CHECK(route_packet(s, 10.0, 4)[0].cell == CellId(1));

  std::vector<LegStatus> both_hot{{0.0, 0.9}, {0.0, 0.7}};
  refresh_legs(s, both_hot);
  CHECK(route_packet(s, 10.0, 9)[0].cell == CellId(1));
}

TEST_CASE("duplicate sends one copy per leg with a shared SN") {
  auto s = configure_legs(FlowId(1), {leg(1, 100), leg(2, 100), leg(3, 50)}, FlowMode::duplicate,
                          TrafficClass::urllc);
  for (std::uint32_t k = 0; k < 5; ++k) {
    const auto t = route_packet(s, 10.0, 0);
    REQUIRE(t.size() == 3);
    for (const auto& x : t) CHECK(x.sn == k);
  }
}

TEST_CASE("routing conserves SDUs in every mode") {
  std::mt19937_64 gen(2);
  for (auto mode : {FlowMode::aggregate, FlowMode::load_balance, FlowMode::duplicate}) {
    auto s = configure_legs(FlowId(1), {leg(1, 80), leg(2, 120)}, mode, TrafficClass::embb);
    for (int i = 0; i < 500; ++i) {
      std::vector<LegStatus> status{{static_cast<double>(gen() % 1000), (gen() % 100) / 100.0},
                                    {static_cast<double>(gen() % 1000), (gen() % 100) / 100.0}};
      refresh_legs(s, status);
      const auto before = s.next_sn;
      const auto t = route_packet(s, 100.0, static_cast<std::uint64_t>(i / 7));
      CHECK(s.next_sn == before + 1);
      CHECK(t.size() == (mode == FlowMode::duplicate ? 2u : 1u));
      for (const auto& x : t) CHECK(x.sn == before);
    }
  }
}

TEST_CASE("routing reads only the leg record") {
  // A third kind of leg, described like any other, routes without changes.
  auto s = configure_legs(FlowId(1), {leg(1, 100), leg(7, 1000)}, FlowMode::aggregate,
                          TrafficClass::embb);
  s.legs[1].descriptor.coverage_class = CoverageClass::local;
  s.legs[1].descriptor.latency_class = LatencyClass::low;
  std::vector<LegStatus> status{{1000.0, 0.5}, {1000.0, 0.5}};
  refresh_legs(s, status);
  CHECK(route_packet(s, 10.0, 0)[0].cell == CellId(7));
}

TEST_CASE("receiver examples") {
  ReceiverState rx;
  rx.expected_sn = 1;
  CHECK(sns(reorder_deliver(rx, {1, 8, 0}, 0)) == std::vector<std::uint32_t>{1});
  CHECK(reorder_deliver(rx, {3, 8, 0}, 1).empty());
  CHECK(rx.timer_started == 1u);
  CHECK(sns(reorder_deliver(rx, {2, 8, 0}, 2)) == std::vector<std::uint32_t>{2, 3});
  CHECK_FALSE(rx.timer_started.has_value());

  CHECK(reorder_deliver(rx, {2, 8, 0}, 3).empty());
  CHECK(rx.duplicates == 1);
  CHECK(rx.delivered == 3);
}

TEST_CASE("reorder timer declares the gap lost") {
  ReceiverState rx;
  rx.t_reorder = 50;
  for (std::uint32_t sn = 0; sn < 4; ++sn) reorder_deliver(rx, {sn, 1, 0}, 0);
  CHECK(reorder_deliver(rx, {5, 1, 0}, 10).empty());
  CHECK(reorder_deliver(rx, {6, 1, 0}, 11).empty());
  CHECK(expire_reorder_timer(rx, 59).empty());
  CHECK(sns(expire_reorder_timer(rx, 60)) == std::vector<std::uint32_t>{5, 6});
  CHECK(rx.lost == 1);
  CHECK(rx.expected_sn == 7);
  // A late copy of the lost SN is discarded.
  CHECK(reorder_deliver(rx, {4, 1, 0}, 61).empty());
  CHECK(rx.delivered == 6);
}

TEST_CASE("a second gap restarts the timer") {
  ReceiverState rx;
  rx.t_reorder = 5;
  reorder_deliver(rx, {2, 1, 0}, 0);
  reorder_deliver(rx, {4, 1, 0}, 1);
  CHECK(sns(expire_reorder_timer(rx, 5)) == std::vector<std::uint32_t>{2});
  CHECK(rx.lost == 2);
  CHECK(rx.timer_started == 5u);
  CHECK(sns(expire_reorder_timer(rx, 10)) == std::vector<std::uint32_t>{4});
  CHECK(rx.lost == 3);
  CHECK_FALSE(rx.timer_started.has_value());
}

TEST_CASE("receiver output is increasing and duplicate free under shuffles") {
  std::mt19937_64 gen(19);
  for (int round = 0; round < 300; ++round) {
    std::vector<std::uint32_t> arrivals;
    for (std::uint32_t sn = 0; sn < 60; ++sn) {
      if (gen() % 10 != 0) arrivals.push_back(sn);
      if (gen() % 4 == 0) arrivals.push_back(sn);
    }
    // Local shuffles keep arrivals roughly in order.
    for (std::size_t i = 0; i + 3 < arrivals.size(); i += 2) {
      std::shuffle(arrivals.begin() + static_cast<long>(i), arrivals.begin() + static_cast<long>(i + 3), gen);
    }
    ReceiverState rx;
    rx.t_reorder = 1 + gen() % 8;
    std::vector<std::uint32_t> out;
    std::uint64_t now = 0;
    for (auto sn : arrivals) {
      for (const auto& p : reorder_deliver(rx, {sn, 1, 0}, now)) out.push_back(p.sn);
      for (const auto& p : expire_reorder_timer(rx, now)) out.push_back(p.sn);
      ++now;
    }
    for (int k = 0; k < 20; ++k, ++now) {
      for (const auto& p : expire_reorder_timer(rx, now)) out.push_back(p.sn);
    }
    for (std::size_t i = 1; i < out.size(); ++i) CHECK(out[i - 1] < out[i]);
    CHECK(rx.delivered == out.size());
  }
}
