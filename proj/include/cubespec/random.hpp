#pragma once

// Portable random streams. Everything here is specified bit-for-bit so that
// samples reproduce across compilers and standard libraries; the <random>
// distributions are implementation-defined and are not used.

#include <array>
#include <cstdint>

namespace cubespec::rng {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Uniform double in [0, 1) from the top 53 bits.
constexpr double to_unit(std::uint64_t x) noexcept {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

/// Uniform double in (0, 1].
constexpr double to_unit_open_left(std::uint64_t x) noexcept {
  return static_cast<double>((x >> 11) + 1) * 0x1.0p-53;
}

/// Stateless draw keyed by (seed, counter).
constexpr std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t counter) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(counter ^ 0x2545f4914f6cdd1dull));
}

/// xoshiro256** seeded through splitmix64.
class Stream {
public:
  explicit Stream(std::uint64_t seed) noexcept;

  std::uint64_t next() noexcept;
  double uniform() noexcept { return to_unit(next()); }
  double uniform_open_left() noexcept { return to_unit_open_left(next()); }

  /// Uniform integer in [0, bound), bound > 0, by rejection.
  std::uint64_t below(std::uint64_t bound) noexcept;

private:
  std::array<std::uint64_t, 4> s_{};
};

/// Binomial(trials, p) variate. Inversion when trials*min(p,1-p) < 100,
/// transformed rejection (BTRS) otherwise.
std::uint64_t binomial(Stream& stream, std::uint64_t trials, double p);

}  // namespace cubespec::rng
