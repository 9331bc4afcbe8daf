#include "hrrm/core/network.hpp"

#include <cmath>
#include <stdexcept>

namespace hrrm {

std::string_view to_string(TrafficClass cls) {
  switch (cls) {
    case TrafficClass::embb: return "embb";
    case TrafficClass::mmtc: return "mmtc";
    case TrafficClass::urllc: return "urllc";
    case TrafficClass::legacy_mbb: return "legacy_mbb";
  }
  return "?";
}

std::optional<TrafficClass> parse_traffic_class(std::string_view text) {
  for (TrafficClass cls : kAllTrafficClasses) {
    if (to_string(cls) == text) return cls;
  }
  return std::nullopt;
}

std::string_view to_string(CellClass cls) {
  switch (cls) {
    case CellClass::macro: return "macro";
    case CellClass::small: return "small";
    case CellClass::ap: return "ap";
  }
  return "?";
}

std::optional<CellClass> parse_cell_class(std::string_view text) {
  for (CellClass cls : {CellClass::macro, CellClass::small, CellClass::ap}) {
    if (to_string(cls) == text) return cls;
  }
  return std::nullopt;
}

double distance(Position a, Position b) { return std::hypot(a.x - b.x, a.y - b.y); }

void Cell::validate() const {
  if (!std::isfinite(tx_power_dbm)) {
    throw std::invalid_argument("tx_power_dbm must be finite");
  }
  if (!(waveform_eff > 0.0 && waveform_eff <= 1.0)) {
    throw std::invalid_argument("waveform_eff must be within (0, 1]");
  }
}

void UserEquipment::validate() const {
  if (capabilities.empty()) {
    throw std::invalid_argument("a UE needs at least one capability flag");
  }
}

}  // namespace hrrm
