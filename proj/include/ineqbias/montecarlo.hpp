#pragma once

// Simulation check of the exact expectations: draw R samples of size n,
// evaluate an estimator on each and compare the replicate mean with the
// bias engine's value via a z-score.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ineqbias/bias_engine.hpp"
#include "ineqbias/error.hpp"
#include "ineqbias/estimators.hpp"
#include "ineqbias/mixture.hpp"
#include "ineqbias/random.hpp"
#include "ineqbias/summation.hpp"

namespace ineqbias {

inline constexpr std::size_t kMinReplicates = 100;
inline constexpr double kDefaultZThreshold = 4.0;

struct MCOptions {
  /// Worker threads for the replicates; 0 uses every hardware thread.
  std::size_t threads = 1;
  double z_threshold = kDefaultZThreshold;
  EngineOptions engine{};
};

struct MCReport {
  Estimator estimator;
  std::size_t replicates = 0;
  unsigned n = 0;
  double mean = 0.0;
  double standard_error = 0.0;
  double exact = 0.0;
  double z = 0.0;
  std::uint64_t seed = 0;
  bool pass = false;

  bool operator==(const MCReport&) const = default;
};

namespace detail {

inline constexpr std::size_t kReplicateBlock = 1024;

inline void check_mc_args(unsigned n, Estimator e, std::size_t replicates) {
  if (replicates < kMinReplicates) {
    throw Error(ErrorCode::invalid_argument, "run_mc needs at least " + std::to_string(kMinReplicates) + " replicates",
                "R = " + std::to_string(replicates));
  }
  if (n < min_sample_size(e)) {
    throw Error(ErrorCode::invalid_sample_size,
                std::string(to_string(e)) + " needs n >= " + std::to_string(min_sample_size(e)),
                "n = " + std::to_string(n));
  }
}

}  // namespace detail

/// Estimator values for replicates 0..R-1. Replicate r draws from
/// Rng(seed, r), so the values do not depend on the thread count.
inline std::vector<double> simulate_estimator(const MixtureParams& params, unsigned n, Estimator e,
                                              std::size_t replicates, std::uint64_t seed, std::size_t threads = 1) {
  detail::check_mc_args(n, e, replicates);
  std::vector<double> values(replicates);
  const std::size_t blocks = (replicates + detail::kReplicateBlock - 1) / detail::kReplicateBlock;
  parallel_blocks(blocks, threads, [&](std::size_t b) {
    std::vector<double> x(n);
    const std::size_t last = std::min(replicates, (b + 1) * detail::kReplicateBlock);
    for (std::size_t r = b * detail::kReplicateBlock; r < last; ++r) {
      Rng rng(seed, r);
      sample_into(params, rng, x);
      values[r] = detail::evaluate_kernel(e, x);
    }
  });
  return values;
}

/// Replicate mean, standard error and z against the exact expectation.
/// A zero standard error (the estimator is constant, e.g. n = 1) gives z = 0
/// when the mean matches the exact value to 1e-12 and an infinite z otherwise.
inline MCReport run_mc(const MixtureParams& params, unsigned n, Estimator e, std::size_t replicates,
                       std::uint64_t seed, const MCOptions& opts = {}) {
  const double exact = expected_value(params, e, n, opts.engine);
  const std::vector<double> values = simulate_estimator(params, n, e, replicates, seed, opts.threads);

  const double count = static_cast<double>(replicates);
  const double mean = pairwise_sum(values) / count;
  std::vector<double> squares(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) squares[i] = (values[i] - mean) * (values[i] - mean);
  const double variance = pairwise_sum(squares) / (count - 1.0);
  const double se = std::sqrt(variance / count);

  MCReport report{e, replicates, n, mean, se, exact, 0.0, seed, false};
  const double diff = mean - exact;
  if (se > 0.0) {
    report.z = diff / se;
  } else if (std::abs(diff) > 1e-12 * (1.0 + std::abs(exact))) {
    report.z = std::copysign(std::numeric_limits<double>::infinity(), diff);
  }
  report.pass = std::abs(report.z) <= opts.z_threshold;
  return report;
}

}  // namespace ineqbias
