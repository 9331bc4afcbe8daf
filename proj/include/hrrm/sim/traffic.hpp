#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hrrm/core/rng.hpp"
#include "hrrm/scenario/config.hpp"

namespace hrrm::sim {

struct Arrival {
  double bits = 0.0;
  std::uint64_t created_slot = 0;
  std::optional<std::uint64_t> deadline_slot;
};

/// Packet source of one flow with its own random stream.
class TrafficGenerator {
 public:
  TrafficGenerator(scenario::GeneratorConfig config, std::uint64_t seed, FlowId flow);

  /// Packets arriving in `slot`. full_buffer tops the backlog up to buffer_bits.
  std::vector<Arrival> arrivals(std::uint64_t slot, double backlog_bits);

  const scenario::GeneratorConfig& config() const noexcept { return config_; }

 private:
  scenario::GeneratorConfig config_;
  RngStream rng_;
};

/// One draw from `gen`; see TrafficGenerator::arrivals.
std::vector<Arrival> gen_traffic(TrafficGenerator& gen, std::uint64_t slot, double backlog_bits);

}  // namespace hrrm::sim
