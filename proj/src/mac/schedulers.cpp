#include "hrrm/mac/schedulers.hpp"

#include <algorithm>
#include <map>

#include "hrrm/core/error.hpp"

namespace hrrm::mac {

std::vector<PrbAssignment> schedule_dynamic(PrbInterval partition, std::span<const PfUser> users) {
  std::vector<PrbAssignment> out;
  std::vector<double> remaining(users.size());
  for (std::size_t i = 0; i < users.size(); ++i) remaining[i] = users[i].backlog_bits;

  for (int prb = partition.begin; prb < partition.end; ++prb) {
    std::size_t best = users.size();
    double best_metric = 0.0;
    for (std::size_t i = 0; i < users.size(); ++i) {
      if (remaining[i] <= 0.0) continue;
      const double metric = users[i].inst_rate / users[i].avg_rate;
      const bool better = best == users.size() || metric > best_metric ||
                          (metric == best_metric && users[i].ue < users[best].ue);
      if (better) {
        best = i;
        best_metric = metric;
      }
    }
    if (best == users.size()) break;
    const double bits = std::min(users[best].inst_rate, remaining[best]);
    remaining[best] -= users[best].inst_rate;
    out.push_back({prb, users[best].ue, bits});
  }
  return out;
}

void update_pf_averages(std::span<PfUser> users, std::span<const PrbAssignment> assignments,
                        double alpha) {
  for (auto& u : users) {
    double served = 0.0;
    for (const auto& a : assignments) {
      if (a.ue == u.ue) served += a.bits;
    }
    u.avg_rate = (1.0 - alpha) * u.avg_rate + alpha * served;
  }
}

SemiPersistentScheduler::SemiPersistentScheduler(std::vector<SpsFlow> flows)
    : flows_(std::move(flows)) {
  offsets_.reserve(flows_.size());
  for (const auto& f : flows_) {
    offsets_.push_back(reserved_);
    reserved_ += std::max(f.prbs_needed, 0);
  }
}

std::vector<SpsGrant> SemiPersistentScheduler::grants(PrbInterval partition,
                                                      std::uint64_t slot) const {
  std::vector<SpsGrant> out;
  for (std::size_t i = 0; i < flows_.size(); ++i) {
    const SpsFlow& f = flows_[i];
    const int begin = partition.begin + offsets_[i];
    const int end = begin + f.prbs_needed;
    if (end > partition.end) throw ReconfigRequiredError(f.flow);
    if (slot < f.start_slot) continue;
    const auto period = static_cast<std::uint64_t>(std::max(f.period_slots, 1));
    if ((slot - f.start_slot) % period != 0) continue;
    out.push_back({f.flow, f.ue, {begin, end}});
  }
  return out;
}

std::vector<SpsGrant> schedule_semi_persistent(PrbInterval partition,
                                               std::span<const SpsFlow> flows,
                                               std::uint64_t slot) {
  return SemiPersistentScheduler({flows.begin(), flows.end()}).grants(partition, slot);
}

std::string_view to_string(AccessResult result) {
  switch (result) {
    case AccessResult::success: return "success";
    case AccessResult::collision: return "collision";
    case AccessResult::deferred: return "deferred";
  }
  return "?";
}

int access_opportunities(PrbInterval partition, int access_cost_prbs) {
  if (access_cost_prbs <= 0) return 0;
  return partition.size() / access_cost_prbs;
}

std::vector<AccessOutcome> classify_picks(std::span<const Contender> contenders,
                                          std::span<const int> picks) {
  std::map<int, int> sharers;
  for (int r : picks) ++sharers[r];
  std::vector<AccessOutcome> out;
  out.reserve(contenders.size());
  for (std::size_t i = 0; i < contenders.size(); ++i) {
    const int r = picks[i];
    if (sharers[r] == 1) {
      out.push_back({contenders[i].ue, AccessResult::success, r, contenders[i].payload_bits});
    } else {
      out.push_back({contenders[i].ue, AccessResult::collision, r, 0.0});
    }
  }
  return out;
}

std::vector<AccessOutcome> schedule_one_shot(std::span<const Contender> contenders,
                                             int opportunities, RngStream& rng) {
  if (opportunities <= 0) {
    std::vector<AccessOutcome> out;
    for (const auto& c : contenders) out.push_back({c.ue, AccessResult::deferred, -1, 0.0});
    return out;
  }
  std::vector<int> picks;
  picks.reserve(contenders.size());
  for (std::size_t i = 0; i < contenders.size(); ++i) {
    picks.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(opportunities))));
  }
  return classify_picks(contenders, picks);
}

}  // namespace hrrm::mac
