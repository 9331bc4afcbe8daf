#pragma once

#include <cstdint>

#include "hrrm/core/network.hpp"

namespace hrrm::sim {

struct ChannelModel {
  double fading_scale = 1.0;
  double interference_margin_db = 3.0;
  double macro_exponent = 3.5;
  double small_exponent = 2.2;
  double min_distance_m = 1.0;
  std::uint64_t seed = 0;
};

inline constexpr double kThermalNoiseDbmPerHz = -174.0;

/// Free-space loss at 1 m plus 10 * exponent * log10(d), d clamped to min_distance_m.
double pathloss_db(const ChannelModel& model, const Cell& cell, double distance_m);

/// Thermal noise over one PRB.
double noise_floor_dbm(const Cell& cell);

/// Transmit power per PRB.
double tx_power_per_prb_dbm(const Cell& cell);

/// Received power per PRB without fading; reported as RSRP.
double received_power_dbm(const ChannelModel& model, const Cell& cell, Position ue);

/// Rayleigh power fading in dB scaled by fading_scale, keyed by (ue, cell, slot).
double fading_db(const ChannelModel& model, UeId ue, CellId cell, std::uint64_t slot);

/// received power + fading - noise floor - interference margin.
double channel_sinr(const ChannelModel& model, UeId ue, Position ue_position, const Cell& cell,
                    std::uint64_t slot);

}  // namespace hrrm::sim
