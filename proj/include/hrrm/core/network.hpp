#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hrrm/core/grid.hpp"
#include "hrrm/core/ids.hpp"

namespace hrrm {

enum class TrafficClass { embb, mmtc, urllc, legacy_mbb };

inline constexpr std::array<TrafficClass, 4> kAllTrafficClasses = {
    TrafficClass::embb, TrafficClass::mmtc, TrafficClass::urllc, TrafficClass::legacy_mbb};

std::string_view to_string(TrafficClass cls);
std::optional<TrafficClass> parse_traffic_class(std::string_view text);

enum class CellClass { macro, small, ap };

std::string_view to_string(CellClass cls);
std::optional<CellClass> parse_cell_class(std::string_view text);

struct Position {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(Position, Position) = default;
};

double distance(Position a, Position b);

struct Cell {
  CellId id;
  /// Technology label. Only scenario I/O reads it; coordinators never do.
  std::string rat_tag;
  CarrierGrid grid;
  Position position;
  double tx_power_dbm = 0.0;
  CellClass cell_class = CellClass::macro;
  /// Fraction of the Shannon bound the radio achieves.
  double waveform_eff = 1.0;
  std::optional<bool> supports_duplication;
  std::optional<bool> supports_secondary;

  /// Throws std::invalid_argument on a non-finite power or an efficiency outside (0, 1].
  void validate() const;
};

/// Capability flag marking a dual-connectivity capable device.
inline constexpr std::string_view kDualConnectivityFlag = "dc";

struct UserEquipment {
  UeId id;
  Position position;
  std::set<std::string> capabilities;
  std::vector<FlowId> flows;

  bool has_capability(std::string_view flag) const {
    return capabilities.find(std::string(flag)) != capabilities.end();
  }
  /// Throws std::invalid_argument when no capability flag is set.
  void validate() const;
};

}  // namespace hrrm
