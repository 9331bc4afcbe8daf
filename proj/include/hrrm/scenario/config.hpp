#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hrrm/core/ids.hpp"
#include "hrrm/core/network.hpp"
#include "hrrm/mac/coordinator.hpp"
#include "hrrm/pdcp/flow.hpp"
#include "hrrm/uts/types.hpp"

namespace hrrm::scenario {

struct CellConfig {
  CellId id;
  std::string rat_tag = "nr";
  CellClass cell_class = CellClass::macro;
  double carrier_hz = 3.5e9;
  int prbs = 50;
  int numerology = 0;
  std::optional<double> prb_bandwidth_hz;
  Position position;
  double tx_power_dbm = 43.0;
  double waveform_eff = 0.75;
  /// Cells sharing a site can aggregate carriers. Empty means a site of its own.
  std::string site;
  std::optional<bool> supports_duplication;
  std::optional<bool> supports_secondary;
  /// Probability that a fully transmitted PDU is lost on this cell.
  double drop_probability = 0.0;
  /// Two or more entries enable spectrum sharing between portions.
  std::vector<mac::PortionSpec> portions;

  friend bool operator==(const CellConfig&, const CellConfig&) = default;
};

struct UeConfig {
  UeId id;
  Position position;
  /// Metres per second, applied from slot 0.
  Position velocity;
  std::set<std::string> capabilities;
  /// Strongest cell when unset.
  std::optional<CellId> serving;
  std::vector<CellId> secondaries;
  double target_bps = 0.0;

  friend bool operator==(const UeConfig&, const UeConfig&) = default;
};

enum class GeneratorKind { full_buffer, poisson_sporadic, periodic_deadline };

std::string_view to_string(GeneratorKind kind);
std::optional<GeneratorKind> parse_generator_kind(std::string_view text);

struct GeneratorConfig {
  GeneratorKind kind = GeneratorKind::full_buffer;
  double packet_bits = 12000.0;
  /// full_buffer: backlog kept at or above this many bits.
  double buffer_bits = 200000.0;
  /// poisson_sporadic: mean packets per slot.
  double rate_per_slot = 0.01;
  /// periodic_deadline
  std::uint64_t period_slots = 10;
  std::uint64_t offset_slots = 0;
  std::uint64_t deadline_slots = 10;

  friend bool operator==(const GeneratorConfig&, const GeneratorConfig&) = default;
};

struct FlowConfig {
  FlowId id;
  UeId ue;
  TrafficClass cls = TrafficClass::embb;
  std::string slice = "default";
  GeneratorConfig generator;
  int sps_period_slots = 1;
  int sps_prbs = 1;

  friend bool operator==(const FlowConfig&, const FlowConfig&) = default;
};

struct MacSettings {
  int epoch_slots = 10;
  int min_guarantee = 1;
  int access_cost_prbs = 1;
  int backoff_min_epochs = 1;
  int backoff_max_epochs = 8;
  double pf_ewma = mac::kPfEwmaAlpha;
  mac::PartitionBy partition_by = mac::PartitionBy::traffic_class;
  std::map<TrafficClass, mac::SchedulerKind> class_schedulers = mac::default_class_schedulers();

  friend bool operator==(const MacSettings&, const MacSettings&) = default;
};

struct PdcpSettings {
  pdcp::ServiceModeMap service_modes = pdcp::default_service_modes();
  double leave_above = 0.8;
  double join_below = 0.5;
  std::uint64_t t_reorder_slots = 50;

  friend bool operator==(const PdcpSettings&, const PdcpSettings&) = default;
};

struct UtsSettings {
  bool enabled = true;
  std::uint64_t epoch_slots = 100;
  std::vector<std::string> features = {"mlb", "ca", "dc"};
  std::vector<std::string> ranking = {"mlb", "dc", "ca"};
  std::map<std::string, uts::FeatureThresholds> thresholds;
  std::uint64_t hysteresis_epochs = 10;
  std::uint64_t time_to_trigger = 2;

  friend bool operator==(const UtsSettings&, const UtsSettings&) = default;
};

struct ChannelSettings {
  /// Multiplier on the Rayleigh fading term in dB; 0 disables fading.
  double fading_scale = 1.0;
  double interference_margin_db = 3.0;
  double macro_exponent = 3.5;
  double small_exponent = 2.2;
  double min_distance_m = 1.0;
  /// Fading and PHY-loss draws use this seed; the run seed when unset.
  std::optional<std::uint64_t> seed;

  friend bool operator==(const ChannelSettings&, const ChannelSettings&) = default;
};

struct SimSettings {
  std::uint64_t horizon_slots = 1000;
  std::uint64_t seed = 1;

  friend bool operator==(const SimSettings&, const SimSettings&) = default;
};

struct ScenarioConfig {
  std::string name = "scenario";
  /// Strategy selector for scenario-specific feature sets.
  std::string tag = "default";
  std::vector<CellConfig> cells;
  std::vector<UeConfig> ues;
  std::vector<FlowConfig> flows;
  MacSettings mac;
  PdcpSettings pdcp;
  UtsSettings uts;
  ChannelSettings channel;
  SimSettings sim;

  const CellConfig* find_cell(CellId id) const;
  const UeConfig* find_ue(UeId id) const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Fills values whose default depends on other fields (empty sites). Idempotent.
void fill_defaults(ScenarioConfig& config);

/// Throws ValidationError naming the offending config path.
void validate(const ScenarioConfig& config);

/// Grid of a configured cell.
CarrierGrid grid_of(const CellConfig& cell);
Cell cell_of(const CellConfig& cell);

}  // namespace hrrm::scenario
