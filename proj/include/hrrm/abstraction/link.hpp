#pragma once

#include "hrrm/core/grid.hpp"

namespace hrrm {

inline constexpr double kSinrCapDb = 30.0;

double db_to_linear(double db);
double linear_to_db(double linear);

/// Whole bits one PRB carries in one slot:
///   floor(prb_bandwidth * slot_seconds * waveform_eff * log2(1 + min(sinr, 30 dB)))
/// Throws std::invalid_argument when waveform_eff is outside (0, 1].
double bits_per_prb(double sinr_db, double waveform_eff, const CarrierGrid& grid);

/// SINR link abstraction: n_prbs * bits_per_prb(...). Integral per-PRB bits make
/// the rate exactly additive in n_prbs. Throws std::invalid_argument on n_prbs < 0.
double link_rate(double sinr_db, int n_prbs, double waveform_eff, const CarrierGrid& grid);

}  // namespace hrrm
