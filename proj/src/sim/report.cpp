#include "hrrm/sim/report.hpp"

namespace hrrm::sim {

std::uint64_t count_ping_pongs(const std::vector<uts::AttachmentChange>& changes,
                               std::uint64_t window) {
  std::uint64_t count = 0;
  for (std::size_t i = 0; i < changes.size(); ++i) {
    const auto& gain = changes[i];
    if (!gain.gained) continue;
    for (std::size_t j = 0; j < i; ++j) {
      const auto& left = changes[j];
      if (!left.gained && left.ue == gain.ue && left.cell == gain.cell &&
          gain.epoch - left.epoch <= window) {
        ++count;
        break;
      }
    }
  }
  return count;
}

}  // namespace hrrm::sim
