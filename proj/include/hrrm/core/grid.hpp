#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hrrm/core/ids.hpp"

namespace hrrm {

/// Half-open PRB interval [begin, end).
struct PrbInterval {
  int begin = 0;
  int end = 0;

  int size() const noexcept { return end > begin ? end - begin : 0; }
  bool empty() const noexcept { return size() == 0; }
  bool contains(int prb) const noexcept { return prb >= begin && prb < end; }
  bool contains(PrbInterval other) const noexcept {
    return other.empty() || (other.begin >= begin && other.end <= end);
  }
  friend bool operator==(PrbInterval, PrbInterval) = default;
};

std::string to_string(PrbInterval interval);

/// Physical resource plane of one carrier: PRBs per slot and slot timing.
class CarrierGrid {
 public:
  static constexpr double kMinCarrierHz = 450e6;
  static constexpr double kMaxCarrierHz = 52.6e9;
  static constexpr int kMaxNumerology = 4;

  /// Throws std::invalid_argument when a field is outside its documented range.
  CarrierGrid(double carrier_hz, int prbs_per_slot, int numerology, double prb_bandwidth_hz);

  /// 12 subcarriers at 15 kHz * 2^numerology.
  static double nominal_prb_bandwidth_hz(int numerology);

  double carrier_hz() const noexcept { return carrier_hz_; }
  int prbs_per_slot() const noexcept { return prbs_per_slot_; }
  int numerology() const noexcept { return numerology_; }
  double prb_bandwidth_hz() const noexcept { return prb_bandwidth_hz_; }

  /// 1 ms / 2^numerology.
  double slot_seconds() const noexcept;
  /// Slots in a 10 ms radio frame.
  int slots_per_frame() const noexcept { return 10 << numerology_; }
  PrbInterval all_prbs() const noexcept { return {0, prbs_per_slot_}; }

  friend bool operator==(const CarrierGrid&, const CarrierGrid&) = default;

 private:
  double carrier_hz_;
  int prbs_per_slot_;
  int numerology_;
  double prb_bandwidth_hz_;
};

struct Grant {
  int prb = 0;
  UeId owner;
  std::string purpose;

  friend bool operator==(const Grant&, const Grant&) = default;
};

/// Exclusive PRB grants of one slot.
struct AllocationMap {
  std::uint64_t slot_index = 0;
  std::vector<Grant> grants;

  friend bool operator==(const AllocationMap&, const AllocationMap&) = default;
};

struct AllocationViolation {
  enum class Kind { overlap, out_of_range };
  Kind kind;
  int prb;

  friend bool operator==(const AllocationViolation&, const AllocationViolation&) = default;
};

/// Grants every PRB in `range` to `owner`. Throws OutOfRangeError or
/// OverlapError (lowest offending PRB) and leaves nothing granted on failure.
AllocationMap allocate_block(AllocationMap map, PrbInterval range, UeId owner,
                             const std::string& purpose, const CarrierGrid& grid);

/// In-place variant with the same all-or-nothing behaviour.
void grant_block(AllocationMap& map, PrbInterval range, UeId owner, const std::string& purpose,
                 int prbs_per_slot);

/// Every exclusivity and range violation, sorted by PRB; empty means valid.
std::vector<AllocationViolation> validate_allocation_map(const AllocationMap& map,
                                                         const CarrierGrid& grid);

}  // namespace hrrm
