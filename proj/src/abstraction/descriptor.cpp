#include "hrrm/abstraction/descriptor.hpp"

#include <stdexcept>

#include "hrrm/abstraction/link.hpp"

namespace hrrm {

std::string_view to_string(LatencyClass cls) {
  return cls == LatencyClass::low ? "low" : "normal";
}

std::string_view to_string(CoverageClass cls) {
  return cls == CoverageClass::wide ? "wide" : "local";
}

bool CapabilityDescriptor::same_capabilities(const CapabilityDescriptor& other) const {
  CapabilityDescriptor copy = other;
  copy.descriptor_id = descriptor_id;
  return copy == *this;
}

CapabilityDescriptor describe_cell(const Cell& cell, double load) {
  if (!(load >= 0.0 && load <= 1.0)) {
    throw std::invalid_argument("load must be within [0, 1]");
  }
  const CarrierGrid& grid = cell.grid;
  CapabilityDescriptor d;
  d.descriptor_id = cell.id.value;
  d.capacity_score = static_cast<double>(grid.prbs_per_slot()) *
                     link_rate(kMedianSinrDb, 1, cell.waveform_eff, grid);
  d.latency_class = grid.numerology() >= 1 ? LatencyClass::low : LatencyClass::normal;
  d.coverage_class =
      cell.cell_class == CellClass::macro ? CoverageClass::wide : CoverageClass::local;
  d.supports_duplication = cell.supports_duplication.value_or(cell.cell_class != CellClass::ap);
  d.supports_secondary = cell.supports_secondary.value_or(true);
  d.current_load = load;
  return d;
}

}  // namespace hrrm
