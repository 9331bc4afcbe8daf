#include "hrrm/core/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hrrm/core/error.hpp"

namespace hrrm {

std::string to_string(PrbInterval interval) {
  return "[" + std::to_string(interval.begin) + "," + std::to_string(interval.end) + ")";
}

CarrierGrid::CarrierGrid(double carrier_hz, int prbs_per_slot, int numerology,
                         double prb_bandwidth_hz)
    : carrier_hz_(carrier_hz),
      prbs_per_slot_(prbs_per_slot),
      numerology_(numerology),
      prb_bandwidth_hz_(prb_bandwidth_hz) {
  if (!(carrier_hz >= kMinCarrierHz && carrier_hz <= kMaxCarrierHz)) {
    throw std::invalid_argument("carrier_hz must be within [450 MHz, 52.6 GHz]");
  }
  if (prbs_per_slot < 1) {
    throw std::invalid_argument("prbs_per_slot must be at least 1");
  }
  if (numerology < 0 || numerology > kMaxNumerology) {
    throw std::invalid_argument("numerology must be within 0..4");
  }
  if (!(prb_bandwidth_hz > 0.0) || !std::isfinite(prb_bandwidth_hz)) {
    throw std::invalid_argument("prb_bandwidth_hz must be positive");
  }
}

double CarrierGrid::nominal_prb_bandwidth_hz(int numerology) {
  return 12.0 * 15e3 * static_cast<double>(1 << numerology);
}

double CarrierGrid::slot_seconds() const noexcept {
  return 1e-3 / static_cast<double>(1 << numerology_);
}

void grant_block(AllocationMap& map, PrbInterval range, UeId owner, const std::string& purpose,
                 int prbs_per_slot) {
  if (range.empty()) return;
  if (range.begin < 0) throw OutOfRangeError(range.begin);
  if (range.end > prbs_per_slot) throw OutOfRangeError(std::max(range.begin, prbs_per_slot));

  int first_overlap = range.end;
  for (const Grant& g : map.grants) {
    if (range.contains(g.prb)) first_overlap = std::min(first_overlap, g.prb);
  }
  if (first_overlap != range.end) throw OverlapError(first_overlap);

  map.grants.reserve(map.grants.size() + static_cast<std::size_t>(range.size()));
  for (int prb = range.begin; prb < range.end; ++prb) {
    map.grants.push_back(Grant{prb, owner, purpose});
  }
}

AllocationMap allocate_block(AllocationMap map, PrbInterval range, UeId owner,
                             const std::string& purpose, const CarrierGrid& grid) {
  grant_block(map, range, owner, purpose, grid.prbs_per_slot());
  return map;
}

std::vector<AllocationViolation> validate_allocation_map(const AllocationMap& map,
                                                         const CarrierGrid& grid) {
  std::vector<AllocationViolation> violations;
  std::vector<int> seen(static_cast<std::size_t>(grid.prbs_per_slot()), 0);
  for (const Grant& g : map.grants) {
    if (g.prb < 0 || g.prb >= grid.prbs_per_slot()) {
      violations.push_back({AllocationViolation::Kind::out_of_range, g.prb});
      continue;
    }
    if (seen[static_cast<std::size_t>(g.prb)]++ > 0) {
      violations.push_back({AllocationViolation::Kind::overlap, g.prb});
    }
  }
  std::stable_sort(violations.begin(), violations.end(),
                   [](const auto& a, const auto& b) { return a.prb < b.prb; });
  return violations;
}

}  // namespace hrrm
