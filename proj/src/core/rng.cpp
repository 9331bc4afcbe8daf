#include "hrrm/core/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hrrm {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double counter_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c,
                       std::uint64_t d) noexcept {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ a);
  h = mix64(h ^ b);
  h = mix64(h ^ c);
  h = mix64(h ^ d);
  // 53 high bits, shifted off zero.
  return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, RngSubsystem subsystem, std::uint64_t substream) {
  const auto sub = static_cast<std::uint64_t>(subsystem);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(sub), static_cast<std::uint32_t>(substream),
                    static_cast<std::uint32_t>(substream >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, RngSubsystem subsystem, std::uint64_t substream)
    : engine_(make_engine(seed, subsystem, substream)) {}

double RngStream::uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t RngStream::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("RngStream::below needs n > 0");
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - (max % n + 1) % n;
  std::uint64_t x = engine_();
  while (x > limit) x = engine_();
  return x % n;
}

int RngStream::uniform_int(int lo, int hi) {
  if (hi < lo) throw std::invalid_argument("RngStream::uniform_int needs lo <= hi");
  const auto span = static_cast<std::uint64_t>(static_cast<std::int64_t>(hi) - lo) + 1;
  return lo + static_cast<int>(below(span));
}

std::uint64_t RngStream::poisson(double mean) {
  if (mean <= 0.0) return 0;
  // Knuth's product method, split into chunks so exp(-mean) never underflows.
  std::uint64_t total = 0;
  while (mean > 0.0) {
    const double chunk = mean > 30.0 ? 30.0 : mean;
    mean -= chunk;
    const double threshold = std::exp(-chunk);
    double product = uniform01();
    while (product > threshold) {
      ++total;
      product *= uniform01();
    }
  }
  return total;
}

}  // namespace hrrm
