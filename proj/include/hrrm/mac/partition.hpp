#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hrrm/core/grid.hpp"
#include "hrrm/core/ids.hpp"
#include "hrrm/core/network.hpp"

namespace hrrm::mac {

/// Label of one partition. The coordinator compares keys but never interprets
/// the label text.
struct PartitionKey {
  enum class Kind { portion, slice, traffic_class };
  Kind kind = Kind::traffic_class;
  std::string label;

  static PartitionKey of(TrafficClass cls);
  static PartitionKey portion(std::string label);
  static PartitionKey slice(std::string label);

  friend auto operator<=>(const PartitionKey&, const PartitionKey&) = default;
};

std::string to_string(const PartitionKey& key);

/// Per-key demand in PRB-equivalents per slot, in caller order.
class DemandVector {
 public:
  DemandVector() = default;
  DemandVector(std::initializer_list<std::pair<PartitionKey, std::int64_t>> entries);

  /// Adds to an existing key or appends a new one. Throws std::invalid_argument on a negative value.
  void add(const PartitionKey& key, std::int64_t prbs);
  std::int64_t demand(const PartitionKey& key) const;
  std::int64_t total() const;
  const std::vector<std::pair<PartitionKey, std::int64_t>>& entries() const noexcept {
    return entries_;
  }
  bool all_zero() const { return total() == 0; }

 private:
  std::vector<std::pair<PartitionKey, std::int64_t>> entries_;
};

struct PartitionEntry {
  PartitionKey key;
  PrbInterval interval;
  friend bool operator==(const PartitionEntry&, const PartitionEntry&) = default;
};

struct PartitionPlan {
  std::uint64_t epoch_index = 0;
  std::vector<PartitionEntry> entries;

  const PartitionEntry* find(const PartitionKey& key) const;
  int assigned_prbs() const;
  std::vector<int> sizes() const;
  /// Pairwise disjoint and inside `bounds`.
  bool well_formed(PrbInterval bounds) const;
};

struct FlowBacklog {
  FlowId flow;
  TrafficClass cls = TrafficClass::embb;
  double backlog_bits = 0.0;
};

/// Collective demand per traffic class: ceil(sum of backlog / per-PRB rate estimate),
/// capped at the grid size; mMTC demand is pending_access * access_cost_prbs.
/// Classes without a positive rate estimate but with backlog demand the whole grid.
DemandVector estimate_demands(std::span<const FlowBacklog> queues, int pending_access,
                              const CarrierGrid& grid,
                              const std::map<TrafficClass, double>& per_prb_rate,
                              int access_cost_prbs = 1);

/// Hamilton apportionment of `seats` proportional to `weights`: floors first,
/// remaining seats by largest remainder, ties to the lower index. All-zero
/// weights yield all zeros.
std::vector<int> largest_remainder(std::span<const std::int64_t> weights, int seats);

/// Divides `total` PRBs among the demand keys and lays them out contiguously
/// from `offset` in demand order. Every active key first gets its floor
/// (min_guarantee, raised by `floors` where given). When the floored demands
/// fit, each key gets exactly that and the rest stays unassigned; otherwise the
/// PRBs left after floors are split by largest remainder in proportion to each
/// key's demand above its floor. Throws InsufficientResourcesError when the
/// floors alone exceed `total`.
PartitionPlan partition_resources(const DemandVector& demands, int total, int min_guarantee,
                                  const std::set<PartitionKey>& active_keys,
                                  const std::map<PartitionKey, int>& floors = {},
                                  int offset = 0);

/// Proportional split of `total` among sharing radio portions. Portions sum to
/// `total` exactly; a zero-demand portion gets 0 unless every demand is zero,
/// in which case the split is even; a positive-demand portion gets at least 1.
std::vector<int> split_portions(std::span<const std::int64_t> demands, int total);

/// Two-portion form used for dynamic spectrum sharing.
std::pair<int, int> dss_split(std::int64_t lte_demand, std::int64_t nr_demand, int total);

}  // namespace hrrm::mac
