#include "hrrm/sim/traffic.hpp"

namespace hrrm::sim {

using scenario::GeneratorKind;

TrafficGenerator::TrafficGenerator(scenario::GeneratorConfig config, std::uint64_t seed,
                                   FlowId flow)
    : config_(config), rng_(seed, RngSubsystem::traffic, flow.value) {}

std::vector<Arrival> TrafficGenerator::arrivals(std::uint64_t slot, double backlog_bits) {
  std::vector<Arrival> out;
  switch (config_.kind) {
    case GeneratorKind::full_buffer: {
      double backlog = backlog_bits;
      while (backlog < config_.buffer_bits || backlog <= 0.0) {
        out.push_back({config_.packet_bits, slot, std::nullopt});
        backlog += config_.packet_bits;
      }
      break;
    }
    case GeneratorKind::poisson_sporadic: {
      const std::uint64_t n = rng_.poisson(config_.rate_per_slot);
      for (std::uint64_t i = 0; i < n; ++i) out.push_back({config_.packet_bits, slot, std::nullopt});
      break;
    }
    case GeneratorKind::periodic_deadline: {
      if (slot >= config_.offset_slots && (slot - config_.offset_slots) % config_.period_slots == 0) {
        out.push_back({config_.packet_bits, slot, slot + config_.deadline_slots});
      }
      break;
    }
  }
  return out;
}

std::vector<Arrival> gen_traffic(TrafficGenerator& gen, std::uint64_t slot, double backlog_bits) {
  return gen.arrivals(slot, backlog_bits);
}

}  // namespace hrrm::sim
