#pragma once

// Direct transcription of the tuple-indexed expectation formulas: a sum over
// all m^n label tuples (j_1, ..., j_n) with weight pi_{j_1} ... pi_{j_n}.
// Exponential cost; exists as an independent check on the composition-reduced
// engine.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "ineqbias/error.hpp"
#include "ineqbias/estimators.hpp"
#include "ineqbias/mixture.hpp"
#include "ineqbias/quadrature.hpp"
#include "ineqbias/specfun.hpp"

namespace ineqbias {

inline constexpr std::uint64_t kBruteForceLimit = 1'000'000;

/// Tuple-sum expectation with unit rate (VMR is scaled by 1/lambda in the
/// MixtureParams overload).
inline double brute_force_expectation(const Components& c, unsigned n, Estimator e,
                                      const QuadratureConfig& quadrature = {}) {
  const std::size_t m = c.size();
  if (n < min_sample_size(e)) {
    throw Error(ErrorCode::invalid_sample_size, "brute_force_expectation: n too small", std::to_string(n));
  }
  double tuples = std::pow(static_cast<double>(m), static_cast<double>(n));
  if (tuples > static_cast<double>(kBruteForceLimit)) {
    throw Error(ErrorCode::composition_limit_exceeded,
                "brute_force_expectation: m^n exceeds " + std::to_string(kBruteForceLimit),
                "m = " + std::to_string(m) + ", n = " + std::to_string(n));
  }

  std::vector<std::size_t> labels(n, 0);
  double total = 0.0;
  for (;;) {
    double weight = 1.0;
    double shape_sum = 0.0;
    for (std::size_t j : labels) {
      weight *= c.pi[j];
      shape_sum += c.alpha[j];
    }

    double term = 0.0;
    switch (e) {
      case Estimator::theil_t: {
        double inner = 0.0;
        for (std::size_t j : labels) inner += c.alpha[j] * digamma(c.alpha[j]);
        term = (inner - shape_sum * digamma(shape_sum) + n - 1.0) / shape_sum;
        break;
      }
      case Estimator::theil_l:
        term = digamma(shape_sum);
        break;
      case Estimator::atkinson_1: {
        double product = 1.0;
        for (std::size_t j : labels) {
          product *= std::exp(ln_gamma(c.alpha[j] + 1.0 / n) - ln_gamma(c.alpha[j]));
        }
        term = product / shape_sum;
        break;
      }
      case Estimator::atkinson_inf: {
        // One unit power per tuple position rather than grouped counts.
        std::vector<double> shapes;
        for (std::size_t j : labels) shapes.push_back(c.alpha[j]);
        const std::vector<unsigned> ones(n, 1);
        term = integral_q_product(shapes, ones, quadrature).value / shape_sum;
        break;
      }
      case Estimator::vmr: {
        double inner = 0.0;
        for (std::size_t j : labels) inner += c.alpha[j] * (c.alpha[j] + 1.0);
        term = inner / (shape_sum + 1.0) - shape_sum / n;
        break;
      }
    }
    total += weight * term;

    std::size_t pos = 0;
    while (pos < n && ++labels[pos] == m) labels[pos++] = 0;
    if (pos == n) break;
  }

  switch (e) {
    case Estimator::theil_t: return total + std::log(static_cast<double>(n));
    case Estimator::theil_l: {
      double mean_psi = 0.0;
      for (std::size_t j = 0; j < m; ++j) mean_psi += c.pi[j] * digamma(c.alpha[j]);
      return total - std::log(static_cast<double>(n)) - mean_psi;
    }
    case Estimator::atkinson_1:
    case Estimator::atkinson_inf: return 1.0 - n * total;
    case Estimator::vmr: return n / (n - 1.0) * total;
  }
  return total;
}

inline double brute_force_expectation(const MixtureParams& p, unsigned n, Estimator e,
                                      const QuadratureConfig& quadrature = {}) {
  const double value = brute_force_expectation(p.components(), n, e, quadrature);
  return e == Estimator::vmr ? value / p.lambda() : value;
}

}  // namespace ineqbias
