#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace hrrm {

enum class MeasureKind { signal_db, load_fraction };

/// A measurement already translated into one of the two common units.
class CommonMeasure {
 public:
  /// Throws std::invalid_argument on a non-finite dB value.
  static CommonMeasure signal_db(double value);
  /// Throws std::invalid_argument outside [0, 1].
  static CommonMeasure load_fraction(double value);

  MeasureKind kind() const noexcept { return kind_; }
  double value() const noexcept { return value_; }

  friend bool operator==(const CommonMeasure&, const CommonMeasure&) = default;

 private:
  CommonMeasure(MeasureKind kind, double value) : kind_(kind), value_(value) {}
  MeasureKind kind_;
  double value_;
};

/// Technology-specific input. `reference` is the RSRP floor for rsrp_dbm and
/// the capacity for queue_occupancy.
struct RawMeasurement {
  std::string kind;
  double value = 0.0;
  std::optional<double> reference;
};

inline constexpr double kDefaultRsrpFloorDbm = -140.0;
/// Linear SINR values are floored here before the log so zero stays finite.
inline constexpr double kMinLinearSinr = 1e-12;

/// Registry of per-kind translators into the common units. Every rule must be
/// monotone non-decreasing in the raw value.
class CommonUnitTranslator {
 public:
  using Rule = std::function<CommonMeasure(const RawMeasurement&)>;

  /// Translator preloaded with rsrp_dbm, sinr_linear and queue_occupancy.
  static CommonUnitTranslator with_builtin_kinds();

  /// Throws DuplicateIdError when the kind already has a rule.
  void register_kind(std::string kind, Rule rule);
  bool knows(std::string_view kind) const;
  /// Throws UnknownKindError for an unregistered kind.
  CommonMeasure translate(const RawMeasurement& raw) const;

 private:
  std::map<std::string, Rule, std::less<>> rules_;
};

/// Translation with the built-in kinds.
CommonMeasure to_common_unit(const RawMeasurement& raw);

}  // namespace hrrm
