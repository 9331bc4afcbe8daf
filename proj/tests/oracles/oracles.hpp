#pragma once

// Reference implementations written independently of the library code paths
// they check. They favour enumeration and exact integer arithmetic over speed.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracle {

using i64 = std::int64_t;

/// Hamilton apportionment by enumeration: tries every set of indices that
/// could receive the leftover seats and keeps the unique set whose members all
/// beat the non-members (larger exact remainder, lower index on ties).
inline std::vector<int> hamilton(const std::vector<i64>& weights, int seats) {
  const std::size_t n = weights.size();
  std::vector<int> out(n, 0);
  i64 total = 0;
  for (i64 w : weights) total += w;
  if (total == 0 || seats == 0) return out;

  std::vector<i64> rem(n);
  int given = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const __int128 scaled = static_cast<__int128>(weights[i]) * seats;
    out[i] = static_cast<int>(scaled / total);
    rem[i] = static_cast<i64>(scaled % total);
    given += out[i];
  }
  const int leftover = seats - given;
  if (n > 20) throw std::invalid_argument("oracle enumerates subsets; keep n small");

  auto beats = [&](std::size_t a, std::size_t b) {
    return rem[a] > rem[b] || (rem[a] == rem[b] && a < b);
  };
  std::optional<std::uint32_t> chosen;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != leftover) continue;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (!(mask >> i & 1u)) continue;
      for (std::size_t j = 0; j < n && ok; ++j) {
        if (mask >> j & 1u) continue;
        if (!beats(i, j)) ok = false;
      }
    }
    if (ok) {
      if (chosen) throw std::logic_error("hamilton oracle: two winning seat sets");
      chosen = mask;
    }
  }
  if (!chosen) throw std::logic_error("hamilton oracle: no winning seat set");
  for (std::size_t i = 0; i < n; ++i) out[i] += static_cast<int>(*chosen >> i & 1u);
  return out;
}

/// Partition sizes for demands with per-key floors (0 for inactive keys).
/// Throws std::length_error when the floors alone exceed `total`.
inline std::vector<int> partition_sizes(const std::vector<i64>& demand,
                                        const std::vector<i64>& floor, int total) {
  i64 floor_sum = 0;
  for (i64 f : floor) floor_sum += f;
  if (floor_sum > total) throw std::length_error("floors exceed total");
  std::vector<i64> want(demand.size());
  i64 want_sum = 0;
  for (std::size_t i = 0; i < demand.size(); ++i) {
    want[i] = std::max(demand[i], floor[i]);
    want_sum += want[i];
  }
  std::vector<int> out(demand.size());
  if (want_sum <= total) {
    for (std::size_t i = 0; i < demand.size(); ++i) out[i] = static_cast<int>(want[i]);
    return out;
  }
  std::vector<i64> above(demand.size());
  for (std::size_t i = 0; i < demand.size(); ++i) above[i] = want[i] - floor[i];
  const auto extra = hamilton(above, total - static_cast<int>(floor_sum));
  for (std::size_t i = 0; i < demand.size(); ++i) out[i] = static_cast<int>(floor[i]) + extra[i];
  return out;
}

/// Two-way carrier split: proportional, a zero side gets nothing, a positive
/// side at least one PRB, an all-zero demand splits evenly.
inline std::pair<int, int> two_way_split(i64 a, i64 b, int total) {
  if (a == 0 && b == 0) {
    auto even = hamilton({1, 1}, total);
    return {even[0], even[1]};
  }
  auto parts = hamilton({a, b}, total);
  if (a > 0 && parts[0] == 0) {
    --parts[1];
    ++parts[0];
  }
  if (b > 0 && parts[1] == 0) {
    --parts[0];
    ++parts[1];
  }
  return {parts[0], parts[1]};
}

struct PfCase {
  std::uint32_t ue;
  i64 backlog;
  i64 rate;  // bits per PRB
  i64 avg;   // average rate, > 0
};

/// PRB -> user by exhaustive comparison of rate/avg with cross multiplication.
/// A user stays eligible while its granted bits are below its backlog.
/// Returns (prb, ue) pairs in PRB order.
inline std::vector<std::pair<int, std::uint32_t>> pf_argmax(int begin, int end,
                                                            const std::vector<PfCase>& users) {
  std::vector<i64> granted(users.size(), 0);
  std::vector<std::pair<int, std::uint32_t>> out;
  for (int prb = begin; prb < end; ++prb) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < users.size(); ++i) {
      if (granted[i] >= users[i].backlog) continue;
      bool wins = true;
      for (std::size_t j = 0; j < users.size(); ++j) {
        if (j == i || granted[j] >= users[j].backlog) continue;
        const i64 lhs = users[i].rate * users[j].avg;
        const i64 rhs = users[j].rate * users[i].avg;
        if (lhs < rhs || (lhs == rhs && users[j].ue < users[i].ue)) wins = false;
      }
      if (wins) best = i;
    }
    if (!best) break;
    granted[*best] += users[*best].rate;
    out.emplace_back(prb, users[*best].ue);
  }
  return out;
}

enum class Access { success, collision };

/// Outcome per contender from counting how many picked the same resource.
inline std::vector<Access> classify(const std::vector<int>& picks) {
  std::map<int, int> count;
  for (int p : picks) ++count[p];
  std::vector<Access> out;
  for (int p : picks) out.push_back(count[p] == 1 ? Access::success : Access::collision);
  return out;
}

/// Exact per-contender success probability for n contenders over m resources,
/// as (successes, total outcomes) over all m^n pick vectors.
inline std::pair<i64, i64> enumerate_success(int n, int m) {
  i64 total = 1;
  for (int i = 0; i < n; ++i) total *= m;
  i64 successes = 0;
  std::vector<int> picks(static_cast<std::size_t>(n), 0);
  for (i64 code = 0; code < total; ++code) {
    i64 c = code;
    for (auto& p : picks) {
      p = static_cast<int>(c % m);
      c /= m;
    }
    if (classify(picks)[0] == Access::success) ++successes;
  }
  return {successes, total};
}

}  // namespace oracle
