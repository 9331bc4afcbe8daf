#include "hrrm/abstraction/common_unit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hrrm/core/error.hpp"

namespace hrrm {

CommonMeasure CommonMeasure::signal_db(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("signal_db must be finite");
  return CommonMeasure(MeasureKind::signal_db, value);
}

CommonMeasure CommonMeasure::load_fraction(double value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument("load_fraction must be within [0, 1]");
  }
  return CommonMeasure(MeasureKind::load_fraction, value);
}

CommonUnitTranslator CommonUnitTranslator::with_builtin_kinds() {
  CommonUnitTranslator t;
  t.register_kind("rsrp_dbm", [](const RawMeasurement& raw) {
    return CommonMeasure::signal_db(raw.value - raw.reference.value_or(kDefaultRsrpFloorDbm));
  });
  t.register_kind("sinr_linear", [](const RawMeasurement& raw) {
    return CommonMeasure::signal_db(10.0 * std::log10(std::max(raw.value, kMinLinearSinr)));
  });
  t.register_kind("queue_occupancy", [](const RawMeasurement& raw) {
    const double capacity = raw.reference.value_or(0.0);
    if (!(capacity > 0.0)) throw std::invalid_argument("queue_occupancy needs a positive capacity");
    return CommonMeasure::load_fraction(std::clamp(raw.value / capacity, 0.0, 1.0));
  });
  return t;
}

void CommonUnitTranslator::register_kind(std::string kind, Rule rule) {
  if (rules_.contains(kind)) throw DuplicateIdError(kind);
  rules_.emplace(std::move(kind), std::move(rule));
}

bool CommonUnitTranslator::knows(std::string_view kind) const {
  return rules_.find(kind) != rules_.end();
}

CommonMeasure CommonUnitTranslator::translate(const RawMeasurement& raw) const {
  auto it = rules_.find(raw.kind);
  if (it == rules_.end()) throw UnknownKindError(raw.kind);
  return it->second(raw);
}

CommonMeasure to_common_unit(const RawMeasurement& raw) {
  static const CommonUnitTranslator builtin = CommonUnitTranslator::with_builtin_kinds();
  return builtin.translate(raw);
}

}  // namespace hrrm
