#include "cubespec/random.hpp"

#include <cmath>

namespace cubespec::rng {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}

std::uint64_t binomial_inversion(Stream& stream, std::uint64_t trials, double p) {
  const double q = 1.0 - p;
  const double ratio = p / q;
  const double mean = static_cast<double>(trials) * p;
  const double tail_cap = mean + 40.0 * std::sqrt(mean) + 100.0;
  const double pmf0 = std::exp(static_cast<double>(trials) * std::log1p(-p));
  for (;;) {
    double u = stream.uniform();
    double pmf = pmf0;
    std::uint64_t k = 0;
    while (u > pmf) {
      u -= pmf;
      pmf *= static_cast<double>(trials - k) / static_cast<double>(k + 1) * ratio;
      ++k;
      if (k >= trials || static_cast<double>(k) > tail_cap) break;
    }
    if (k <= trials && static_cast<double>(k) <= tail_cap) return k;
  }
}

// Hormann's BTRS; requires trials * p >= 10 and p <= 1/2.
std::uint64_t binomial_btrs(Stream& stream, std::uint64_t trials, double p) {
  const double n = static_cast<double>(trials);
  const double q = 1.0 - p;
  const double spq = std::sqrt(n * p * q);
  const double b = 1.15 + 2.53 * spq;
  const double a = -0.0873 + 0.0248 * b + 0.01 * p;
  const double c = n * p + 0.5;
  const double v_r = 0.92 - 4.2 / b;
  const double alpha = (2.83 + 5.1 / b) * spq;
  const double lpq = std::log(p / q);
  const double m = std::floor((n + 1.0) * p);
  const double h_m = std::lgamma(m + 1.0) + std::lgamma(n - m + 1.0);
  for (;;) {
    const double u = stream.uniform() - 0.5;
    double v = stream.uniform();
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + c);
    if (k < 0.0 || k > n) continue;
    if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(k);
    v = std::log(v * alpha / (a / (us * us) + b));
    const double h_k = std::lgamma(k + 1.0) + std::lgamma(n - k + 1.0);
    if (v <= h_m - h_k + (k - m) * lpq) return static_cast<std::uint64_t>(k);
  }
}

}  // namespace

Stream::Stream(std::uint64_t seed) noexcept {
  std::uint64_t x = seed;
  for (auto& word : s_) {
    x = splitmix64(x);
    word = x;
  }
}

std::uint64_t Stream::next() noexcept {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

std::uint64_t Stream::below(std::uint64_t bound) noexcept {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = next();
    if (x >= threshold) return x % bound;
  }
}

std::uint64_t binomial(Stream& stream, std::uint64_t trials, double p) {
  if (trials == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return trials;
  if (p > 0.5) return trials - binomial(stream, trials, 1.0 - p);
  if (static_cast<double>(trials) * p < 100.0) return binomial_inversion(stream, trials, p);
  return binomial_btrs(stream, trials, p);
}

}  // namespace cubespec::rng
