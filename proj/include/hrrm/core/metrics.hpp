#pragma once

#include <span>
#include <vector>

namespace hrrm {

/// Jain index (sum x)^2 / (n * sum x^2). Throws DegenerateInputError on an
/// empty or all-zero list, std::invalid_argument on a negative rate.
double compute_fairness(std::span<const double> throughputs);

/// Nearest-rank percentile of an unsorted sample, p in (0, 100]; 0 for an empty sample.
double percentile(std::vector<double> values, double p);

}  // namespace hrrm
