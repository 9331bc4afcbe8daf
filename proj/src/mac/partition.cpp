#include "hrrm/mac/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "hrrm/core/error.hpp"

namespace hrrm::mac {

namespace {
__extension__ typedef __int128 wide_int;
}

PartitionKey PartitionKey::of(TrafficClass cls) {
  return {Kind::traffic_class, std::string(to_string(cls))};
}

PartitionKey PartitionKey::portion(std::string label) { return {Kind::portion, std::move(label)}; }

PartitionKey PartitionKey::slice(std::string label) { return {Kind::slice, std::move(label)}; }

std::string to_string(const PartitionKey& key) {
  switch (key.kind) {
    case PartitionKey::Kind::portion: return "portion:" + key.label;
    case PartitionKey::Kind::slice: return "slice:" + key.label;
    case PartitionKey::Kind::traffic_class: return key.label;
  }
  return key.label;
}

DemandVector::DemandVector(
    std::initializer_list<std::pair<PartitionKey, std::int64_t>> entries) {
  for (const auto& [key, prbs] : entries) add(key, prbs);
}

void DemandVector::add(const PartitionKey& key, std::int64_t prbs) {
  if (prbs < 0) throw std::invalid_argument("demand must be >= 0");
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v += prbs;
      return;
    }
  }
  entries_.emplace_back(key, prbs);
}

std::int64_t DemandVector::demand(const PartitionKey& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  return 0;
}

std::int64_t DemandVector::total() const {
  std::int64_t sum = 0;
  for (const auto& entry : entries_) sum += entry.second;
  return sum;
}

const PartitionEntry* PartitionPlan::find(const PartitionKey& key) const {
  for (const auto& e : entries) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

int PartitionPlan::assigned_prbs() const {
  int sum = 0;
  for (const auto& e : entries) sum += e.interval.size();
  return sum;
}

std::vector<int> PartitionPlan::sizes() const {
  std::vector<int> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.interval.size());
  return out;
}

bool PartitionPlan::well_formed(PrbInterval bounds) const {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const PrbInterval a = entries[i].interval;
    if (!bounds.contains(a)) return false;
    for (std::size_t j = i + 1; j < entries.size(); ++j) {
      const PrbInterval b = entries[j].interval;
      if (!a.empty() && !b.empty() && a.begin < b.end && b.begin < a.end) return false;
    }
  }
  return true;
}

DemandVector estimate_demands(std::span<const FlowBacklog> queues, int pending_access,
                              const CarrierGrid& grid,
                              const std::map<TrafficClass, double>& per_prb_rate,
                              int access_cost_prbs) {
  const std::int64_t cap = grid.prbs_per_slot();
  std::map<TrafficClass, double> backlog;
  for (const auto& q : queues) {
    if (q.cls == TrafficClass::mmtc) continue;
    backlog[q.cls] += std::max(q.backlog_bits, 0.0);
  }

  DemandVector demands;
  for (TrafficClass cls : kAllTrafficClasses) {
    std::int64_t prbs = 0;
    if (cls == TrafficClass::mmtc) {
      prbs = static_cast<std::int64_t>(std::max(pending_access, 0)) * access_cost_prbs;
    } else if (auto it = backlog.find(cls); it != backlog.end() && it->second > 0.0) {
      auto rate = per_prb_rate.find(cls);
      if (rate == per_prb_rate.end() || !(rate->second > 0.0)) {
        prbs = cap;
      } else {
        const double need = std::ceil(it->second / rate->second);
        prbs = need >= static_cast<double>(cap) ? cap : static_cast<std::int64_t>(need);
      }
    }
    demands.add(PartitionKey::of(cls), std::min(prbs, cap));
  }
  return demands;
}

std::vector<int> largest_remainder(std::span<const std::int64_t> weights, int seats) {
  std::vector<int> out(weights.size(), 0);
  if (seats < 0) throw std::invalid_argument("seats must be >= 0");
  wide_int total = 0;
  for (auto w : weights) {
    if (w < 0) throw std::invalid_argument("weights must be >= 0");
    total += w;
  }
  if (total == 0 || seats == 0) return out;

  std::vector<wide_int> remainder(weights.size());
  int given = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const wide_int scaled = static_cast<wide_int>(weights[i]) * seats;
    out[i] = static_cast<int>(scaled / total);
    remainder[i] = scaled % total;
    given += out[i];
  }
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; given < seats; ++k, ++given) ++out[order[k]];
  return out;
}

PartitionPlan partition_resources(const DemandVector& demands, int total, int min_guarantee,
                                  const std::set<PartitionKey>& active_keys,
                                  const std::map<PartitionKey, int>& floors, int offset) {
  if (total < 0 || min_guarantee < 0) throw std::invalid_argument("negative PRB count");
  const auto& entries = demands.entries();
  const std::size_t n = entries.size();

  std::vector<std::int64_t> floor_of(n, 0);
  std::int64_t floor_sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const PartitionKey& key = entries[i].first;
    if (!active_keys.contains(key)) continue;
    std::int64_t f = min_guarantee;
    if (auto it = floors.find(key); it != floors.end()) f = std::max<std::int64_t>(f, it->second);
    floor_of[i] = f;
    floor_sum += f;
  }
  // Active keys missing from the demand vector still count against the guarantee.
  for (const auto& key : active_keys) {
    if (std::none_of(entries.begin(), entries.end(),
                     [&](const auto& e) { return e.first == key; })) {
      throw std::invalid_argument("active key " + to_string(key) + " has no demand entry");
    }
  }
  if (floor_sum > total) throw InsufficientResourcesError(total, static_cast<int>(floor_sum));

  std::vector<std::int64_t> wanted(n);
  std::int64_t wanted_sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    wanted[i] = std::max(entries[i].second, floor_of[i]);
    wanted_sum += wanted[i];
  }

  std::vector<int> size(n);
  if (wanted_sum <= total) {
    for (std::size_t i = 0; i < n; ++i) size[i] = static_cast<int>(wanted[i]);
  } else {
    std::vector<std::int64_t> excess(n);
    for (std::size_t i = 0; i < n; ++i) excess[i] = wanted[i] - floor_of[i];
    const auto share = largest_remainder(excess, total - static_cast<int>(floor_sum));
    for (std::size_t i = 0; i < n; ++i) size[i] = static_cast<int>(floor_of[i]) + share[i];
  }

  PartitionPlan plan;
  int cursor = offset;
  for (std::size_t i = 0; i < n; ++i) {
    plan.entries.push_back({entries[i].first, {cursor, cursor + size[i]}});
    cursor += size[i];
  }
  return plan;
}

std::vector<int> split_portions(std::span<const std::int64_t> demands, int total) {
  if (total < 0) throw std::invalid_argument("total must be >= 0");
  const auto positive = std::count_if(demands.begin(), demands.end(),
                                      [](std::int64_t d) { return d > 0; });
  if (positive > total) {
    throw InsufficientResourcesError(total, static_cast<int>(positive));
  }
  std::vector<int> out;
  if (positive == 0) {
    std::vector<std::int64_t> even(demands.size(), 1);
    return largest_remainder(even, total);
  }
  out = largest_remainder(demands, total);
  for (std::size_t i = 0; i < demands.size(); ++i) {
    if (demands[i] > 0 && out[i] == 0) {
      auto donor = std::max_element(out.begin(), out.end());
      --*donor;
      ++out[i];
    }
  }
  return out;
}

std::pair<int, int> dss_split(std::int64_t lte_demand, std::int64_t nr_demand, int total) {
  const std::int64_t demands[] = {lte_demand, nr_demand};
  const auto parts = split_portions(demands, total);
  return {parts[0], parts[1]};
}

}  // namespace hrrm::mac
