#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "hrrm/core/grid.hpp"
#include "hrrm/core/ids.hpp"
#include "hrrm/core/rng.hpp"

namespace hrrm::mac {

// ---------------------------------------------------------------------------
// Dynamic, channel-adaptive scheduling (proportional fair)
// ---------------------------------------------------------------------------

inline constexpr double kPfEwmaAlpha = 0.01;
inline constexpr double kPfInitialAverage = 1.0;

struct PfUser {
  UeId ue;
  double backlog_bits = 0.0;
  /// Bits one PRB carries for this user in the current slot.
  double inst_rate = 0.0;
  /// EWMA of served bits per slot.
  double avg_rate = kPfInitialAverage;
};

struct PrbAssignment {
  int prb = 0;
  UeId ue;
  double bits = 0.0;
  friend bool operator==(const PrbAssignment&, const PrbAssignment&) = default;
};

/// Grants each PRB of `partition` to the backlogged user maximising
/// inst_rate / avg_rate (lowest id on ties). A user drops out once the PRBs it
/// was given cover its backlog, so no PRB goes to an empty queue.
std::vector<PrbAssignment> schedule_dynamic(PrbInterval partition, std::span<const PfUser> users);

/// avg <- (1 - alpha) * avg + alpha * served, for every listed user.
void update_pf_averages(std::span<PfUser> users, std::span<const PrbAssignment> assignments,
                        double alpha = kPfEwmaAlpha);

// ---------------------------------------------------------------------------
// Semi-persistent scheduling
// ---------------------------------------------------------------------------

struct SpsFlow {
  FlowId flow;
  UeId ue;
  int period_slots = 1;
  int prbs_needed = 1;
  std::uint64_t start_slot = 0;
};

struct SpsGrant {
  FlowId flow;
  UeId ue;
  PrbInterval prbs;
  friend bool operator==(const SpsGrant&, const SpsGrant&) = default;
};

/// Fixed PRB columns per flow, placed first-fit (in configuration order) when
/// configured. Grants repeat at slots congruent to start_slot modulo the
/// period and never look at the channel.
class SemiPersistentScheduler {
 public:
  SemiPersistentScheduler() = default;
  explicit SemiPersistentScheduler(std::vector<SpsFlow> flows);

  /// Total PRB columns reserved.
  int reserved_prbs() const noexcept { return reserved_; }
  const std::vector<SpsFlow>& flows() const noexcept { return flows_; }
  /// Column offset of each flow relative to the partition start.
  const std::vector<int>& offsets() const noexcept { return offsets_; }

  /// Throws ReconfigRequiredError for the first flow whose columns fall outside `partition`.
  std::vector<SpsGrant> grants(PrbInterval partition, std::uint64_t slot) const;

 private:
  std::vector<SpsFlow> flows_;
  std::vector<int> offsets_;
  int reserved_ = 0;
};

std::vector<SpsGrant> schedule_semi_persistent(PrbInterval partition,
                                               std::span<const SpsFlow> flows,
                                               std::uint64_t slot);

// ---------------------------------------------------------------------------
// One-shot contention access
// ---------------------------------------------------------------------------

enum class AccessResult { success, collision, deferred };

std::string_view to_string(AccessResult result);

struct Contender {
  UeId ue;
  double payload_bits = 0.0;
};

struct AccessOutcome {
  UeId ue;
  AccessResult result = AccessResult::deferred;
  /// Chosen resource, -1 when deferred.
  int resource = -1;
  /// Bits delivered; non-zero only on success.
  double payload_bits = 0.0;
  friend bool operator==(const AccessOutcome&, const AccessOutcome&) = default;
};

/// floor(partition size / access cost).
int access_opportunities(PrbInterval partition, int access_cost_prbs);

/// Pure classification of given picks: a resource picked once succeeds, a
/// resource picked more than once collides for every sharer.
std::vector<AccessOutcome> classify_picks(std::span<const Contender> contenders,
                                          std::span<const int> picks);

/// Each contender picks a resource uniformly from `opportunities`; with no
/// opportunities every contender is deferred.
std::vector<AccessOutcome> schedule_one_shot(std::span<const Contender> contenders,
                                             int opportunities, RngStream& rng);

}  // namespace hrrm::mac
