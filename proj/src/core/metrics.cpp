#include "hrrm/core/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hrrm/core/error.hpp"

namespace hrrm {

double compute_fairness(std::span<const double> throughputs) {
  if (throughputs.empty()) throw DegenerateInputError("fairness of an empty list");
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double x : throughputs) {
    if (x < 0.0 || !std::isfinite(x)) throw std::invalid_argument("throughputs must be >= 0");
    sum += x;
    sum_sq += x * x;
  }
  if (sum_sq == 0.0) throw DegenerateInputError("fairness of an all-zero list");
  return (sum * sum) / (static_cast<double>(throughputs.size()) * sum_sq);
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const auto n = values.size();
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  return values[rank - 1];
}

}  // namespace hrrm
