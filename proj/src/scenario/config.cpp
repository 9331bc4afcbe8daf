#include "hrrm/scenario/config.hpp"

#include <cmath>
#include <set>

#include "hrrm/core/error.hpp"

namespace hrrm::scenario {

std::string_view to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::full_buffer: return "full_buffer";
    case GeneratorKind::poisson_sporadic: return "poisson_sporadic";
    case GeneratorKind::periodic_deadline: return "periodic_deadline";
  }
  return "?";
}

std::optional<GeneratorKind> parse_generator_kind(std::string_view text) {
  for (auto k : {GeneratorKind::full_buffer, GeneratorKind::poisson_sporadic,
                 GeneratorKind::periodic_deadline}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

const CellConfig* ScenarioConfig::find_cell(CellId id) const {
  for (const auto& c : cells) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

const UeConfig* ScenarioConfig::find_ue(UeId id) const {
  for (const auto& u : ues) {
    if (u.id == id) return &u;
  }
  return nullptr;
}

void fill_defaults(ScenarioConfig& config) {
  for (auto& c : config.cells) {
    if (c.site.empty()) c.site = "cell-" + to_string(c.id);
  }
}

CarrierGrid grid_of(const CellConfig& cell) {
  return CarrierGrid(cell.carrier_hz, cell.prbs, cell.numerology,
                     cell.prb_bandwidth_hz.value_or(
                         CarrierGrid::nominal_prb_bandwidth_hz(cell.numerology)));
}

Cell cell_of(const CellConfig& c) {
  Cell cell{c.id, c.rat_tag, grid_of(c), c.position, c.tx_power_dbm, c.cell_class,
            c.waveform_eff, c.supports_duplication, c.supports_secondary};
  return cell;
}

namespace {

std::string at(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

void require(bool ok, const std::string& path, const std::string& reason) {
  if (!ok) throw ValidationError(path, reason);
}

bool finite(Position p) { return std::isfinite(p.x) && std::isfinite(p.y); }

bool fraction(double v) { return v >= 0.0 && v <= 1.0; }

const std::set<std::string> kKnownFeatures = {"mlb", "ca", "dc"};

void validate_cells(const ScenarioConfig& config) {
  std::set<CellId> ids;
  for (std::size_t i = 0; i < config.cells.size(); ++i) {
    const auto& c = config.cells[i];
    const std::string p = at("network.cells", i);
    require(ids.insert(c.id).second, p + ".id", "duplicate cell id " + to_string(c.id));
    require(c.carrier_hz >= CarrierGrid::kMinCarrierHz && c.carrier_hz <= CarrierGrid::kMaxCarrierHz,
            p + ".carrier_hz", "must be within [450 MHz, 52.6 GHz]");
    require(c.prbs >= 1 && c.prbs <= 1000, p + ".prbs", "must be within [1, 1000]");
    require(c.numerology >= 0 && c.numerology <= CarrierGrid::kMaxNumerology, p + ".numerology",
            "must be within [0, 4]");
    require(!c.prb_bandwidth_hz || *c.prb_bandwidth_hz > 0.0, p + ".prb_bandwidth_hz",
            "must be positive");
    require(std::isfinite(c.tx_power_dbm), p + ".tx_power_dbm", "must be finite");
    require(c.waveform_eff > 0.0 && c.waveform_eff <= 1.0, p + ".waveform_eff",
            "must be within (0, 1]");
    require(fraction(c.drop_probability), p + ".drop_probability", "must be within [0, 1]");
    require(finite(c.position), p + ".position", "must be finite");
    require(!c.rat_tag.empty(), p + ".rat_tag", "must not be empty");
    require(c.portions.size() != 1, p + ".portions", "spectrum sharing needs at least two portions");
    std::set<std::string> labels;
    for (std::size_t k = 0; k < c.portions.size(); ++k) {
      const auto& portion = c.portions[k];
      const std::string pp = at(p + ".portions", k);
      require(!portion.label.empty(), pp + ".label", "must not be empty");
      require(labels.insert(portion.label).second, pp + ".label",
              "duplicate portion '" + portion.label + "'");
      require(portion.waveform_eff > 0.0 && portion.waveform_eff <= 1.0, pp + ".waveform_eff",
              "must be within (0, 1]");
    }
  }
}

void validate_ues(const ScenarioConfig& config) {
  std::set<UeId> ids;
  for (std::size_t i = 0; i < config.ues.size(); ++i) {
    const auto& u = config.ues[i];
    const std::string p = at("ues", i);
    require(ids.insert(u.id).second, p + ".id", "duplicate ue id " + to_string(u.id));
    require(!u.capabilities.empty(), p + ".capabilities", "at least one capability required");
    require(finite(u.position), p + ".position", "must be finite");
    require(finite(u.velocity), p + ".velocity", "must be finite");
    require(!config.cells.empty(), p, "no cell to attach to");
    if (u.serving) {
      require(config.find_cell(*u.serving) != nullptr, p + ".serving",
              "unknown cell id " + to_string(*u.serving));
    }
    std::set<CellId> seen;
    for (std::size_t k = 0; k < u.secondaries.size(); ++k) {
      const CellId c = u.secondaries[k];
      const std::string sp = at(p + ".secondaries", k);
      require(config.find_cell(c) != nullptr, sp, "unknown cell id " + to_string(c));
      require(!u.serving || *u.serving != c, sp, "secondary equals serving cell");
      require(seen.insert(c).second, sp, "duplicate secondary " + to_string(c));
    }
    require(u.secondaries.empty() || u.serving, p + ".serving",
            "required when secondaries are given");
    require(u.target_bps >= 0.0, p + ".target_bps", "must be non-negative");
  }
}

void validate_flows(const ScenarioConfig& config) {
  std::set<FlowId> ids;
  for (std::size_t i = 0; i < config.flows.size(); ++i) {
    const auto& f = config.flows[i];
    const std::string p = at("traffic.flows", i);
    require(ids.insert(f.id).second, p + ".id", "duplicate flow id " + to_string(f.id));
    require(config.find_ue(f.ue) != nullptr, p + ".ue", "unknown ue id " + to_string(f.ue));
    require(!f.slice.empty(), p + ".slice", "must not be empty");
    require(f.sps_period_slots >= 1, p + ".sps_period_slots", "must be >= 1");
    require(f.sps_prbs >= 1, p + ".sps_prbs", "must be >= 1");
    const auto& g = f.generator;
    const std::string gp = p + ".generator";
    require(g.packet_bits > 0.0 && g.packet_bits == std::floor(g.packet_bits),
            gp + ".packet_bits", "must be a positive whole number");
    require(g.buffer_bits >= 0.0, gp + ".buffer_bits", "must be non-negative");
    require(g.rate_per_slot >= 0.0 && g.rate_per_slot <= 100.0, gp + ".rate_per_slot",
            "must be within [0, 100]");
    require(g.period_slots >= 1, gp + ".period_slots", "must be >= 1");
    require(g.deadline_slots >= 1, gp + ".deadline_slots", "must be >= 1");
  }
}

void validate_settings(const ScenarioConfig& config) {
  const auto& m = config.mac;
  require(m.epoch_slots >= 1, "mac.epoch_slots", "must be >= 1");
  require(m.min_guarantee >= 0, "mac.min_guarantee", "must be >= 0");
  require(m.access_cost_prbs >= 1, "mac.access_cost_prbs", "must be >= 1");
  require(m.backoff_min_epochs >= 1, "mac.backoff_min_epochs", "must be >= 1");
  require(m.backoff_max_epochs >= m.backoff_min_epochs, "mac.backoff_max_epochs",
          "must be >= backoff_min_epochs");
  require(m.pf_ewma > 0.0 && m.pf_ewma <= 1.0, "mac.pf_ewma", "must be within (0, 1]");
  for (const auto& [cls, kind] : m.class_schedulers) {
    require(kind != mac::SchedulerKind::one_shot || cls == TrafficClass::mmtc,
            "mac.class_schedulers." + std::string(to_string(cls)),
            "one_shot serves only mmtc");
  }

  const auto& d = config.pdcp;
  require(fraction(d.leave_above), "pdcp.leave_above", "must be within [0, 1]");
  require(fraction(d.join_below), "pdcp.join_below", "must be within [0, 1]");
  require(d.join_below <= d.leave_above, "pdcp.join_below", "must not exceed leave_above");
  require(d.t_reorder_slots >= 1, "pdcp.t_reorder_slots", "must be >= 1");

  const auto& u = config.uts;
  require(u.epoch_slots >= 1, "uts.epoch_slots", "must be >= 1");
  require(u.time_to_trigger >= 1, "uts.time_to_trigger", "must be >= 1");
  std::set<std::string> features;
  for (std::size_t i = 0; i < u.features.size(); ++i) {
    const auto& f = u.features[i];
    require(kKnownFeatures.contains(f), at("uts.features", i), "unknown feature '" + f + "'");
    require(features.insert(f).second, at("uts.features", i), "duplicate feature '" + f + "'");
  }
  std::set<std::string> ranked;
  for (std::size_t i = 0; i < u.ranking.size(); ++i) {
    require(ranked.insert(u.ranking[i]).second, at("uts.ranking", i),
            "feature '" + u.ranking[i] + "' ranked twice");
  }
  for (const auto& f : features) {
    require(ranked.contains(f), "uts.ranking", "feature '" + f + "' is not ranked");
  }
  for (const auto& [f, th] : u.thresholds) {
    require(kKnownFeatures.contains(f), "uts.thresholds." + f, "unknown feature");
    for (const auto& [name, value] : th) {
      require(std::isfinite(value), "uts.thresholds." + f + "." + name, "must be finite");
    }
  }

  const auto& c = config.channel;
  require(c.fading_scale >= 0.0 && std::isfinite(c.fading_scale), "channel.fading_scale",
          "must be non-negative");
  require(std::isfinite(c.interference_margin_db), "channel.interference_margin_db",
          "must be finite");
  require(c.macro_exponent > 0.0, "channel.macro_exponent", "must be positive");
  require(c.small_exponent > 0.0, "channel.small_exponent", "must be positive");
  require(c.min_distance_m > 0.0, "channel.min_distance_m", "must be positive");

  require(config.sim.horizon_slots >= 1, "sim.horizon_slots", "must be >= 1");
  require(config.sim.horizon_slots <= 10'000'000, "sim.horizon_slots", "must be <= 10000000");
}

}  // namespace

void validate(const ScenarioConfig& config) {
  validate_cells(config);
  validate_ues(config);
  validate_flows(config);
  validate_settings(config);
}

}  // namespace hrrm::scenario
