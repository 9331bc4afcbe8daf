#include "hrrm/sim/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hrrm/core/rng.hpp"

namespace hrrm::sim {

namespace {

constexpr double kSpeedOfLight = 299792458.0;

}  // namespace

double pathloss_db(const ChannelModel& model, const Cell& cell, double distance_m) {
  const double d = std::max(distance_m, model.min_distance_m);
  const double exponent =
      cell.cell_class == CellClass::macro ? model.macro_exponent : model.small_exponent;
  const double at_1m =
      20.0 * std::log10(4.0 * std::numbers::pi * cell.grid.carrier_hz() / kSpeedOfLight);
  return at_1m + 10.0 * exponent * std::log10(d);
}

double noise_floor_dbm(const Cell& cell) {
  return kThermalNoiseDbmPerHz + 10.0 * std::log10(cell.grid.prb_bandwidth_hz());
}

double tx_power_per_prb_dbm(const Cell& cell) {
  return cell.tx_power_dbm - 10.0 * std::log10(static_cast<double>(cell.grid.prbs_per_slot()));
}

double received_power_dbm(const ChannelModel& model, const Cell& cell, Position ue) {
  return tx_power_per_prb_dbm(cell) - pathloss_db(model, cell, distance(ue, cell.position));
}

double fading_db(const ChannelModel& model, UeId ue, CellId cell, std::uint64_t slot) {
  if (model.fading_scale == 0.0) return 0.0;
  const double u = counter_uniform(model.seed, static_cast<std::uint64_t>(RngSubsystem::channel),
                                   ue.value, cell.value, slot);
  return model.fading_scale * 10.0 * std::log10(-std::log(u));
}

double channel_sinr(const ChannelModel& model, UeId ue, Position ue_position, const Cell& cell,
                    std::uint64_t slot) {
  return received_power_dbm(model, cell, ue_position) + fading_db(model, ue, cell.id, slot) -
         noise_floor_dbm(cell) - model.interference_margin_db;
}

}  // namespace hrrm::sim
