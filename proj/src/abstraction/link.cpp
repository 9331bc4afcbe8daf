#include "hrrm/abstraction/link.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hrrm {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

double bits_per_prb(double sinr_db, double waveform_eff, const CarrierGrid& grid) {
  if (!(waveform_eff > 0.0 && waveform_eff <= 1.0)) {
    throw std::invalid_argument("waveform_eff must be within (0, 1]");
  }
  const double sinr = db_to_linear(std::min(sinr_db, kSinrCapDb));
  const double raw =
      grid.prb_bandwidth_hz() * grid.slot_seconds() * waveform_eff * std::log2(1.0 + sinr);
  // The epsilon absorbs representation error in values that are integral in exact arithmetic
  // (180 kHz * 1 ms = 180 bits).
  return std::floor(raw + 1e-9);
}

double link_rate(double sinr_db, int n_prbs, double waveform_eff, const CarrierGrid& grid) {
  if (n_prbs < 0) throw std::invalid_argument("n_prbs must be >= 0");
  if (n_prbs == 0) return 0.0;
  return static_cast<double>(n_prbs) * bits_per_prb(sinr_db, waveform_eff, grid);
}

}  // namespace hrrm
