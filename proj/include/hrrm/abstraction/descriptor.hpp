#pragma once

#include <cstdint>
#include <string_view>

#include "hrrm/core/network.hpp"

namespace hrrm {

enum class LatencyClass { low, normal };
enum class CoverageClass { wide, local };

std::string_view to_string(LatencyClass cls);
std::string_view to_string(CoverageClass cls);

/// What a coordinator may know about a radio resource. The record has no
/// technology or vendor field, so nothing downstream can branch on one.
struct CapabilityDescriptor {
  std::uint32_t descriptor_id = 0;
  /// Expected bits per slot over the whole carrier at the median SINR.
  double capacity_score = 0.0;
  LatencyClass latency_class = LatencyClass::normal;
  CoverageClass coverage_class = CoverageClass::local;
  bool supports_duplication = false;
  bool supports_secondary = false;
  /// Fraction in [0, 1].
  double current_load = 0.0;

  friend bool operator==(const CapabilityDescriptor&, const CapabilityDescriptor&) = default;

  /// Field-wise equality ignoring descriptor_id.
  bool same_capabilities(const CapabilityDescriptor& other) const;
};

/// SINR at which capacity_score is evaluated.
inline constexpr double kMedianSinrDb = 10.0;

/// Maps a cell's radio parameters to its descriptor:
///   capacity_score = prbs_per_slot * link_rate(10 dB, 1 PRB, waveform_eff, grid)
///   latency_class  = low when the slot is shorter than 1 ms (numerology >= 1)
///   coverage_class = wide for macro cells, local otherwise
///   supports_duplication defaults to true except for access points
///   supports_secondary defaults to true
/// Throws std::invalid_argument when load is outside [0, 1].
CapabilityDescriptor describe_cell(const Cell& cell, double load);

}  // namespace hrrm
