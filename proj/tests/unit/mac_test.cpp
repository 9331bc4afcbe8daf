#include <random>

#include "doctest.h"
#include "hrrm/core/error.hpp"
#include "hrrm/mac/coordinator.hpp"
#include "oracles/oracles.hpp"

using namespace hrrm;
using namespace hrrm::mac;

namespace {

const CarrierGrid kGrid(3.5e9, 50, 0, 180e3);

DemandVector three(std::int64_t a, std::int64_t b, std::int64_t c) {
  return {{PartitionKey::of(TrafficClass::embb), a},
          {PartitionKey::of(TrafficClass::mmtc), b},
          {PartitionKey::of(TrafficClass::urllc), c}};
}

std::set<PartitionKey> all_keys(const DemandVector& d) {
  std::set<PartitionKey> out;
  for (const auto& [k, v] : d.entries()) out.insert(k);
  return out;
}

MacUeView ue_view(std::uint32_t id, double bits, std::set<std::string> caps = {"nr"}) {
  return {UeId(id), std::move(caps), {bits}};
}

MacFlowView flow_view(std::uint32_t id, std::uint32_t ue, TrafficClass cls, double backlog) {
  MacFlowView f;
  f.flow = FlowId(id);
  f.ue = UeId(ue);
  f.cls = cls;
  f.slice = "default";
  f.backlog_bits = backlog;
  f.head_bits = std::min(backlog, 256.0);
  return f;
}

}  // namespace

TEST_CASE("demand estimation") {
  std::map<TrafficClass, double> rates{{TrafficClass::embb, 180.0}};
  auto empty = estimate_demands({}, 0, kGrid, rates);
  CHECK(empty.all_zero());

  std::vector<FlowBacklog> q{{FlowId(1), TrafficClass::embb, 1000.0},
                             {FlowId(2), TrafficClass::embb, 800.0}};
  CHECK(estimate_demands(q, 0, kGrid, rates).demand(PartitionKey::of(TrafficClass::embb)) == 10);

  CHECK(estimate_demands({}, 5, kGrid, rates, 1).demand(PartitionKey::of(TrafficClass::mmtc)) == 5);
  CHECK(estimate_demands({}, 5, kGrid, rates, 3).demand(PartitionKey::of(TrafficClass::mmtc)) == 15);

  std::vector<FlowBacklog> huge{{FlowId(1), TrafficClass::embb, 1e9}};
  CHECK(estimate_demands(huge, 0, kGrid, rates).demand(PartitionKey::of(TrafficClass::embb)) == 50);
  std::vector<FlowBacklog> unknown_rate{{FlowId(1), TrafficClass::legacy_mbb, 10.0}};
  CHECK(estimate_demands(unknown_rate, 0, kGrid, rates)
            .demand(PartitionKey::of(TrafficClass::legacy_mbb)) == 50);
  CHECK_THROWS_AS(DemandVector().add(PartitionKey::slice("a"), -1), std::invalid_argument);
}

TEST_CASE("partition examples") {
  auto fits = three(30, 10, 10);
  CHECK(partition_resources(fits, 50, 1, all_keys(fits)).sizes() == std::vector<int>{30, 10, 10});

  auto over = three(60, 20, 20);
  CHECK(partition_resources(over, 50, 1, all_keys(over)).sizes() == std::vector<int>{30, 10, 10});

  auto sparse = three(0, 0, 10);
  const auto plan = partition_resources(sparse, 50, 1, all_keys(sparse));
  CHECK(plan.sizes() == std::vector<int>{1, 1, 10});
  CHECK(plan.assigned_prbs() == 12);
  CHECK(plan.well_formed({0, 50}));

  CHECK_THROWS_AS(partition_resources(three(1, 1, 1), 2, 1, all_keys(three(1, 1, 1))),
                  InsufficientResourcesError);
}

TEST_CASE("partition keeps inactive keys at zero and lays out from the offset") {
  auto d = three(0, 4, 4);
  std::set<PartitionKey> active{PartitionKey::of(TrafficClass::mmtc),
                                PartitionKey::of(TrafficClass::urllc)};
  const auto plan = partition_resources(d, 20, 1, active, {}, 10);
  CHECK(plan.sizes() == std::vector<int>{0, 4, 4});
  CHECK(plan.entries[1].interval == PrbInterval{10, 14});
  CHECK(plan.entries[2].interval == PrbInterval{14, 18});
}

TEST_CASE("partition honours raised floors") {
  auto d = three(40, 40, 2);
  std::map<PartitionKey, int> floors{{PartitionKey::of(TrafficClass::urllc), 6}};
  const auto plan = partition_resources(d, 30, 1, all_keys(d), floors);
  CHECK(plan.sizes()[2] >= 6);
  CHECK(plan.assigned_prbs() == 30);
}

TEST_CASE("partition matches the apportionment oracle on random demands") {
  std::mt19937_64 gen(21);
  for (int round = 0; round < 2000; ++round) {
    const int n = 1 + static_cast<int>(gen() % 5);
    const int total = 1 + static_cast<int>(gen() % 120);
    const int min_g = static_cast<int>(gen() % 3);
    DemandVector d;
    std::set<PartitionKey> active;
    std::vector<std::int64_t> demand, floor;
    for (int i = 0; i < n; ++i) {
      const auto key = PartitionKey::slice("s" + std::to_string(i));
      const std::int64_t v = static_cast<std::int64_t>(gen() % 80);
      d.add(key, v);
      demand.push_back(v);
      const bool on = gen() % 4 != 0;
      if (on) active.insert(key);
      floor.push_back(on ? min_g : 0);
    }
    std::vector<int> expected;
    bool insufficient = false;
    try {
      expected = oracle::partition_sizes(demand, floor, total);
    } catch (const std::length_error&) {
      insufficient = true;
    }
    if (insufficient) {
      CHECK_THROWS_AS(partition_resources(d, total, min_g, active), InsufficientResourcesError);
      continue;
    }
    const auto plan = partition_resources(d, total, min_g, active);
    REQUIRE(plan.sizes() == expected);
    CHECK(plan.assigned_prbs() <= total);
    CHECK(plan.well_formed({0, total}));
  }
}

TEST_CASE("largest remainder against the oracle") {
  std::mt19937_64 gen(8);
  for (int round = 0; round < 3000; ++round) {
    std::vector<std::int64_t> w(1 + gen() % 7);
    for (auto& x : w) x = static_cast<std::int64_t>(gen() % 50);
    const int seats = static_cast<int>(gen() % 200);
    REQUIRE(largest_remainder(w, seats) == oracle::hamilton(w, seats));
  }
}

TEST_CASE("dss split examples") {
  CHECK(dss_split(0, 40, 100) == std::pair{0, 100});
  CHECK(dss_split(30, 30, 100) == std::pair{50, 50});
  CHECK(dss_split(20, 60, 100) == std::pair{25, 75});
  CHECK(dss_split(1, 1000, 10) == std::pair{1, 9});
  CHECK(dss_split(0, 0, 9) == std::pair{5, 4});
  CHECK_THROWS_AS(dss_split(1, 1, 1), InsufficientResourcesError);
}

TEST_CASE("split portions always sums to the total") {
  std::mt19937_64 gen(4);
  for (int round = 0; round < 2000; ++round) {
    std::vector<std::int64_t> d(2 + gen() % 3);
    for (auto& x : d) x = gen() % 3 == 0 ? 0 : static_cast<std::int64_t>(gen() % 100);
    const int total = static_cast<int>(d.size()) + static_cast<int>(gen() % 100);
    const auto parts = split_portions(d, total);
    int sum = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      sum += parts[i];
      if (d[i] > 0) CHECK(parts[i] >= 1);
      bool any = false;
      for (auto x : d) any |= x > 0;
      if (any && d[i] == 0) CHECK(parts[i] == 0);
    }
    CHECK(sum == total);
  }
}

TEST_CASE("proportional fair examples") {
  std::vector<PfUser> two{{UeId(1), 1e6, 2.0, 1.0}, {UeId(2), 1e6, 1.0, 1.0}};
  auto a = schedule_dynamic({0, 1}, two);
  REQUIRE(a.size() == 1);
  CHECK(a[0].ue == UeId(1));

  std::vector<PfUser> tie{{UeId(4), 1e6, 3.0, 1.0}, {UeId(2), 1e6, 3.0, 1.0}};
  CHECK(schedule_dynamic({0, 1}, tie)[0].ue == UeId(2));

  std::vector<PfUser> idle{{UeId(1), 0.0, 1e9, 1.0}, {UeId(2), 10.0, 1.0, 1.0}};
  for (const auto& g : schedule_dynamic({0, 20}, idle)) CHECK(g.ue == UeId(2));

  CHECK(schedule_dynamic({5, 5}, two).empty());
}

TEST_CASE("proportional fair keeps grants inside the partition and wastes none") {
  std::mt19937_64 gen(31);
  for (int round = 0; round < 500; ++round) {
    std::vector<PfUser> users;
    const int n = 1 + static_cast<int>(gen() % 5);
    double total_backlog = 0.0;
    for (int i = 0; i < n; ++i) {
      const double b = static_cast<double>(gen() % 3000);
      users.push_back({UeId(static_cast<std::uint32_t>(i)), b,
                       1.0 + static_cast<double>(gen() % 400), 1.0 + static_cast<double>(gen() % 50)});
      total_backlog += b;
    }
    const int begin = static_cast<int>(gen() % 20);
    const int end = begin + static_cast<int>(gen() % 30);
    const auto grants = schedule_dynamic({begin, end}, users);
    for (const auto& g : grants) {
      CHECK(g.prb >= begin);
      CHECK(g.prb < end);
    }
    // Work conservation: PRBs stay idle only once every queue is covered.
    if (static_cast<int>(grants.size()) < end - begin) {
      for (const auto& u : users) {
        double got = 0.0;
        for (const auto& g : grants) {
          if (g.ue == u.ue) got += u.inst_rate;
        }
        CHECK(got >= u.backlog_bits);
      }
    }
    double bits = 0.0;
    for (const auto& g : grants) bits += g.bits;
    CHECK(bits <= total_backlog + 1e-9);
  }
}

TEST_CASE("proportional fair matches the per-PRB argmax oracle") {
  std::mt19937_64 gen(77);
  for (int round = 0; round < 1000; ++round) {
    std::vector<oracle::PfCase> cases;
    std::vector<PfUser> users;
    for (std::uint32_t i = 0; i < 3; ++i) {
      oracle::PfCase c{i + 1, static_cast<std::int64_t>(gen() % 6) * 100,
                       1 + static_cast<std::int64_t>(gen() % 9) * 50,
                       1 + static_cast<std::int64_t>(gen() % 5)};
      cases.push_back(c);
      users.push_back({UeId(c.ue), static_cast<double>(c.backlog), static_cast<double>(c.rate),
                       static_cast<double>(c.avg)});
    }
    const auto got = schedule_dynamic({0, 5}, users);
    const auto want = oracle::pf_argmax(0, 5, cases);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].prb == want[i].first);
      CHECK(got[i].ue.value == want[i].second);
    }
  }
}

TEST_CASE("proportional fair averages follow the EWMA") {
  std::vector<PfUser> users{{UeId(1), 1e6, 100.0, 1.0}, {UeId(2), 1e6, 50.0, 1.0}};
  const auto a = schedule_dynamic({0, 3}, users);
  update_pf_averages(users, a, 0.01);
  CHECK(users[0].avg_rate == doctest::Approx(0.99 + 0.01 * 300.0));
  CHECK(users[1].avg_rate == doctest::Approx(0.99));
}

TEST_CASE("semi-persistent examples") {
  std::vector<SpsFlow> one{{FlowId(1), UeId(1), 10, 2, 0}};
  const auto g0 = schedule_semi_persistent({0, 10}, one, 0);
  REQUIRE(g0.size() == 1);
  CHECK(schedule_semi_persistent({0, 10}, one, 10) == g0);
  CHECK(schedule_semi_persistent({0, 10}, one, 20) == g0);
  CHECK(schedule_semi_persistent({0, 10}, one, 5).empty());

  CHECK_THROWS_AS(schedule_semi_persistent({0, 1}, one, 0), ReconfigRequiredError);

  std::vector<SpsFlow> pair{{FlowId(1), UeId(1), 5, 1, 0}, {FlowId(2), UeId(2), 10, 1, 0}};
  const auto g = schedule_semi_persistent({3, 10}, pair, 0);
  REQUIRE(g.size() == 2);
  CHECK(g[0].prbs == PrbInterval{3, 4});
  CHECK(g[1].prbs == PrbInterval{4, 5});
}

TEST_CASE("one-shot access examples") {
  RngStream rng(1, RngSubsystem::access);
  std::vector<Contender> solo{{UeId(1), 100.0}};
  auto o = schedule_one_shot(solo, 4, rng);
  CHECK(o[0].result == AccessResult::success);
  CHECK(o[0].payload_bits == 100.0);

  std::vector<Contender> five;
  for (std::uint32_t i = 0; i < 5; ++i) five.push_back({UeId(i), 10.0});
  for (const auto& x : schedule_one_shot(five, 1, rng)) {
    CHECK(x.result == AccessResult::collision);
    CHECK(x.payload_bits == 0.0);
  }
  for (const auto& x : schedule_one_shot(five, 0, rng)) CHECK(x.result == AccessResult::deferred);

  // Two contenders on four resources: 12 of the 16 pick pairs are distinct.
  const auto [wins, total] = oracle::enumerate_success(2, 4);
  CHECK(wins * 4 == total * 3);
  CHECK(access_opportunities({0, 7}, 2) == 3);
}

TEST_CASE("one-shot classification agrees with exhaustive enumeration") {
  for (int n = 1; n <= 3; ++n) {
    for (int m = 1; m <= 4; ++m) {
      std::vector<Contender> cs;
      for (int i = 0; i < n; ++i) cs.push_back({UeId(static_cast<std::uint32_t>(i)), 8.0});
      std::int64_t outcomes = 1;
      for (int i = 0; i < n; ++i) outcomes *= m;
      for (std::int64_t code = 0; code < outcomes; ++code) {
        std::vector<int> picks;
        std::int64_t c = code;
        for (int i = 0; i < n; ++i) {
          picks.push_back(static_cast<int>(c % m));
          c /= m;
        }
        const auto got = classify_picks(cs, picks);
        const auto want = oracle::classify(picks);
        for (int i = 0; i < n; ++i) {
          CHECK(got[i].resource == picks[i]);
          CHECK((got[i].result == AccessResult::success) ==
                (want[i] == oracle::Access::success));
        }
      }
    }
  }
}

TEST_CASE("portion assignment prefers the most efficient supported portion") {
  std::vector<PortionSpec> p{{"lte", "lte", 0.7}, {"nr", "nr", 0.8}};
  CHECK(assign_portion({"lte"}, p) == 0);
  CHECK(assign_portion({"nr"}, p) == 1);
  CHECK(assign_portion({"lte", "nr"}, p) == 1);
  CHECK_FALSE(assign_portion({"wifi"}, p).has_value());
  CHECK(assign_portion({"wifi"}, {}) == 0);
}

TEST_CASE("coordinator with broadband flows only") {
  MacCoordinator mac(kGrid, MacConfig{}, 1, 0);
  MacSlotInput in;
  in.ues = {ue_view(1, 300.0), ue_view(2, 200.0)};
  in.flows = {flow_view(1, 1, TrafficClass::embb, 1e6), flow_view(2, 2, TrafficClass::embb, 1e6)};
  const auto out = mac.run_mac_epoch(in);
  CHECK(out.plan_refreshed);
  CHECK(validate_allocation_map(out.allocation, kGrid).empty());

  int embb = 0, mmtc = 0, others = 0;
  for (const auto& leaf : mac.plan().children) {
    if (leaf.key == PartitionKey::of(TrafficClass::embb)) embb = leaf.interval.size();
    else if (leaf.key == PartitionKey::of(TrafficClass::mmtc)) mmtc = leaf.interval.size();
    else others += leaf.interval.size();
  }
  CHECK(mmtc == 1);
  CHECK(others == 0);
  CHECK(embb == 49);
  CHECK(out.allocation.grants.size() == 49);
  CHECK(out.feedback.at(TrafficClass::embb).served_bits > 0.0);
}

TEST_CASE("coordinator without users keeps the access partition") {
  MacCoordinator mac(kGrid, MacConfig{}, 1, 0);
  const auto out = mac.run_mac_epoch({});
  CHECK(out.allocation.grants.empty());
  int mmtc = 0;
  for (const auto& leaf : mac.plan().children) {
    if (leaf.key == PartitionKey::of(TrafficClass::mmtc)) mmtc = leaf.interval.size();
  }
  CHECK(mmtc >= MacConfig{}.min_guarantee);
}

TEST_CASE("coordinator refreshes the plan once per epoch") {
  MacConfig cfg;
  cfg.epoch_slots = 10;
  MacCoordinator mac(kGrid, cfg, 1, 0);
  MacSlotInput in;
  in.ues = {ue_view(1, 300.0)};
  in.flows = {flow_view(1, 1, TrafficClass::embb, 1e6)};
  for (std::uint64_t s = 0; s < 30; ++s) {
    in.slot = s;
    CHECK(mac.run_mac_epoch(in).plan_refreshed == (s % 10 == 0));
  }
}

TEST_CASE("shared carrier nests class partitions inside portions") {
  MacConfig cfg;
  cfg.portions = {{"lte", "lte", 0.7}, {"nr", "nr", 0.8}};
  MacCoordinator mac(kGrid, cfg, 1, 0);
  MacSlotInput in;
  in.ues = {MacUeView{UeId(1), {"lte"}, {200.0, 0.0}}, MacUeView{UeId(2), {"nr"}, {0.0, 250.0}}};
  in.flows = {flow_view(1, 1, TrafficClass::legacy_mbb, 1e6),
              flow_view(2, 2, TrafficClass::embb, 1e6)};
  const auto out = mac.run_mac_epoch(in);
  CHECK(validate_allocation_map(out.allocation, kGrid).empty());

  const auto& root = mac.plan();
  REQUIRE(root.children.size() == 2);
  CHECK(root.children[0].key == PartitionKey::portion("lte"));
  CHECK(root.children[1].key == PartitionKey::portion("nr"));
  CHECK(root.children[0].interval.size() + root.children[1].interval.size() == 50);
  for (const auto& portion : root.children) {
    CHECK_FALSE(portion.children.empty());
    for (const auto& leaf : portion.children) {
      CHECK(leaf.key.kind == PartitionKey::Kind::traffic_class);
      CHECK(portion.interval.contains(leaf.interval));
    }
  }
  bool split_event = false;
  for (const auto& e : out.events) split_event |= e.kind == "dss_split";
  CHECK(split_event);

  for (const auto& g : out.allocation.grants) {
    const auto& portion = root.children[g.owner == UeId(1) ? 0 : 1];
    CHECK(portion.interval.contains(g.prb));
  }
}

TEST_CASE("slice partitioning puts each slice in its own leaf") {
  MacConfig cfg;
  cfg.partition_by = PartitionBy::slice;
  MacCoordinator mac(kGrid, cfg, 1, 0);
  MacSlotInput in;
  in.ues = {ue_view(1, 300.0), ue_view(2, 300.0)};
  auto gold = flow_view(1, 1, TrafficClass::embb, 1e6);
  gold.slice = "gold";
  auto bronze = flow_view(2, 2, TrafficClass::embb, 1e6);
  bronze.slice = "bronze";
  in.flows = {gold, bronze};
  const auto out = mac.run_mac_epoch(in);
  std::set<std::string> labels;
  for (const auto& leaf : mac.plan().children) {
    if (leaf.key.kind == PartitionKey::Kind::slice) labels.insert(leaf.key.label);
  }
  CHECK(labels == std::set<std::string>{"bronze", "gold"});
  for (const auto& g : out.allocation.grants) {
    for (const auto& leaf : mac.plan().children) {
      if (leaf.key == PartitionKey::slice(g.owner == UeId(1) ? "gold" : "bronze")) {
        CHECK(leaf.interval.contains(g.prb));
      }
    }
  }
}

TEST_CASE("semi-persistent reservations that no longer fit are dropped with an event") {
  const CarrierGrid tiny(3.5e9, 4, 0, 180e3);
  MacCoordinator mac(tiny, MacConfig{}, 1, 0);
  MacSlotInput in;
  in.ues = {ue_view(1, 100.0), ue_view(2, 100.0)};
  auto a = flow_view(1, 1, TrafficClass::urllc, 500.0);
  a.sps_prbs = 2;
  auto b = flow_view(2, 2, TrafficClass::urllc, 500.0);
  b.sps_prbs = 2;
  in.flows = {a, b};
  const auto out = mac.run_mac_epoch(in);
  bool reconfig = false;
  for (const auto& e : out.events) reconfig |= e.kind == "reconfig_required";
  CHECK(reconfig);
  CHECK(validate_allocation_map(out.allocation, tiny).empty());
}

TEST_CASE("collided contenders back off for whole epochs") {
  MacConfig cfg;
  cfg.min_guarantee = 1;
  MacCoordinator mac(kGrid, cfg, 9, 0);
  MacSlotInput in;
  for (std::uint32_t i = 1; i <= 6; ++i) {
    in.ues.push_back(ue_view(i, 100.0));
    in.flows.push_back(flow_view(i, i, TrafficClass::mmtc, 256.0));
  }
  in.flows.push_back(flow_view(99, 1, TrafficClass::embb, 1e6));
  auto out = mac.run_mac_epoch(in);
  std::set<FlowId> collided;
  for (const auto& [flow, o] : out.access) {
    if (o.result == AccessResult::collision) collided.insert(flow);
  }
  for (std::uint64_t s = 1; s < 10; ++s) {
    in.slot = s;
    out = mac.run_mac_epoch(in);
    for (const auto& [flow, o] : out.access) CHECK_FALSE(collided.contains(flow));
  }
}
