#pragma once

#include <cstdint>
#include <random>

namespace hrrm {

/// Subsystems that draw random numbers. Each gets an independent stream
/// family derived from the scenario seed.
enum class RngSubsystem : std::uint64_t { traffic = 1, channel = 2, access = 3, backoff = 4 };

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Stateless hash of a key tuple to a uniform value in (0, 1); used where a
/// draw must be reproducible without carrying generator state.
double counter_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c,
                       std::uint64_t d) noexcept;

/// Seeded stream over mt19937_64. Distributions are implemented here rather than
/// with <random> distributions so sequences are identical across standard libraries.
class RngStream {
 public:
  RngStream(std::uint64_t seed, RngSubsystem subsystem, std::uint64_t substream = 0);

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform01();
  /// Uniform integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n);
  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi);
  bool bernoulli(double p) { return uniform01() < p; }
  std::uint64_t poisson(double mean);

 private:
  std::mt19937_64 engine_;
};

}  // namespace hrrm
