#pragma once

// Seedable, splittable random streams and gamma variate generation.

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

namespace ineqbias {

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t mix64(std::uint64_t x) {
  std::uint64_t state = x;
  return splitmix64(state);
}

}  // namespace detail

/// xoshiro256** keyed by (seed, stream). Distinct streams of one seed are
/// statistically independent, so replicate r of a simulation can own stream r
/// regardless of which thread runs it. Satisfies
/// std::uniform_random_bit_generator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t key = detail::mix64(seed) ^ detail::mix64(stream ^ 0xD1B54A32D192ED03ULL);
    key = detail::mix64(key + stream);
    for (auto& word : state_) word = detail::splitmix64(key);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = std::rotl(state_[3], 45);
    return result;
  }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform on the open interval (0, 1).
  double uniform_open() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

  /// Standard normal, Marsaglia polar method (no cached second value).
  double normal() {
    for (;;) {
      const double u = 2.0 * uniform() - 1.0;
      const double v = 2.0 * uniform() - 1.0;
      const double s = u * u + v * v;
      if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }

 private:
  std::uint64_t state_[4];
};

namespace detail {

// Marsaglia-Tsang squeeze/rejection sampler, shape >= 1.
inline double gamma_variate_large(Rng& rng, double shape) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_open();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace detail

/// Gamma(shape, rate = 1) variate. Shapes below one use the boost
/// X = X' U^{1/shape} with X' ~ Gamma(shape + 1).
inline double gamma_variate(Rng& rng, double shape) {
  if (shape >= 1.0) return detail::gamma_variate_large(rng, shape);
  const double boosted = detail::gamma_variate_large(rng, shape + 1.0);
  return boosted * std::pow(rng.uniform_open(), 1.0 / shape);
}

/// log of a Gamma(shape, 1) variate; stays finite for tiny shapes where the
/// variate itself would underflow.
inline double log_gamma_variate(Rng& rng, double shape) {
  if (shape >= 1.0) return std::log(detail::gamma_variate_large(rng, shape));
  const double boosted = detail::gamma_variate_large(rng, shape + 1.0);
  return std::log(boosted) + std::log(rng.uniform_open()) / shape;
}

}  // namespace ineqbias
