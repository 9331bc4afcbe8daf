#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hrrm/sim/world.hpp"

namespace hrrm::scenario {

inline constexpr const char* kMetricsFile = "metrics.csv";
inline constexpr const char* kSummaryFile = "summary.json";
inline constexpr const char* kEventsFile = "events.log";

inline constexpr const char* kMetricsHeader =
    "epoch,end_slot,flow,ue,class,mode,legs,arrived_bits,delivered_bits,throughput_bps,"
    "sdus_delivered,sdus_lost";

std::string metrics_csv(const std::vector<sim::MetricsRow>& rows);
std::string summary_json(const sim::MetricsReport& report);
std::string events_log(const std::vector<sim::WorldEvent>& events);

/// Writes the three files into `dir` (created if needed). Each file goes to a
/// temporary name first; the final names appear only once all three are
/// written. Throws std::runtime_error on an I/O failure.
void write_outputs(const std::filesystem::path& dir, const sim::SimulationResult& result);

}  // namespace hrrm::scenario
