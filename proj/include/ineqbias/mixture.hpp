#pragma once

// Finite gamma mixtures with a shared rate: X = sum_j 1{Y = j} Z_j with
// P(Y = j) = pi_j and Z_j ~ Gamma(alpha_j, lambda).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ineqbias/error.hpp"
#include "ineqbias/random.hpp"
#include "ineqbias/specfun.hpp"

namespace ineqbias {

/// Mixing proportions and shapes of a mixture, without the rate. The bias
/// formulas only ever see this part of the model.
struct Components {
  std::vector<double> pi;
  std::vector<double> alpha;

  std::size_t size() const { return pi.size(); }
};

inline constexpr double kProportionTolerance = 1e-9;
inline constexpr double kShapeMergeTolerance = 1e-12;

/// Validated parameter vector (pi, alpha, lambda) in canonical form:
/// shapes strictly ascending, equal shapes merged, proportions summing to one.
/// Immutable once built.
class MixtureParams {
 public:
  static MixtureParams canonicalize(std::vector<double> pi, std::vector<double> alpha, double lambda);

  const std::vector<double>& pi() const { return components_.pi; }
  const std::vector<double>& alpha() const { return components_.alpha; }
  const Components& components() const { return components_; }
  double lambda() const { return lambda_; }
  std::size_t size() const { return components_.size(); }
  double min_shape() const { return components_.alpha.front(); }

  /// Same proportions and shapes with a different rate.
  MixtureParams with_rate(double lambda) const {
    return canonicalize(components_.pi, components_.alpha, lambda);
  }

 private:
  MixtureParams(Components components, double lambda)
      : components_(std::move(components)), lambda_(lambda) {}

  Components components_;
  double lambda_;
};

inline MixtureParams MixtureParams::canonicalize(std::vector<double> pi, std::vector<double> alpha,
                                                 double lambda) {
  if (pi.empty() || alpha.empty()) {
    throw Error(ErrorCode::empty_parameters, "mixture needs at least one component");
  }
  if (pi.size() != alpha.size()) {
    throw Error(ErrorCode::length_mismatch, "pi and alpha must have the same length",
                std::to_string(pi.size()) + " vs " + std::to_string(alpha.size()));
  }
  for (std::size_t j = 0; j < pi.size(); ++j) {
    if (!(pi[j] > 0.0) || !std::isfinite(pi[j])) {
      throw Error(ErrorCode::invalid_mixing_proportions, "mixing proportions must be positive",
                  "pi[" + std::to_string(j) + "] = " + std::to_string(pi[j]));
    }
    if (!(alpha[j] > 0.0) || !std::isfinite(alpha[j])) {
      throw Error(ErrorCode::invalid_shape, "shape parameters must be positive",
                  "alpha[" + std::to_string(j) + "] = " + std::to_string(alpha[j]));
    }
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::invalid_rate, "rate must be positive", std::to_string(lambda));
  }
  const double total = std::accumulate(pi.begin(), pi.end(), 0.0);
  if (std::abs(total - 1.0) > kProportionTolerance) {
    throw Error(ErrorCode::invalid_mixing_proportions, "mixing proportions must sum to one",
                "sum = " + std::to_string(total));
  }

  std::vector<std::size_t> order(pi.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return alpha[a] < alpha[b]; });

  Components merged;
  for (std::size_t idx : order) {
    if (!merged.alpha.empty()) {
      const double last = merged.alpha.back();
      if (alpha[idx] - last <= kShapeMergeTolerance * alpha[idx]) {
        merged.pi.back() += pi[idx];
        continue;
      }
    }
    merged.pi.push_back(pi[idx]);
    merged.alpha.push_back(alpha[idx]);
  }
  const double merged_total = std::accumulate(merged.pi.begin(), merged.pi.end(), 0.0);
  for (double& p : merged.pi) p /= merged_total;
  return MixtureParams(std::move(merged), lambda);
}

inline MixtureParams canonicalize(std::vector<double> pi, std::vector<double> alpha, double lambda) {
  return MixtureParams::canonicalize(std::move(pi), std::move(alpha), lambda);
}

/// An i.i.d. sample of strictly positive observations.
class Sample {
 public:
  explicit Sample(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw Error(ErrorCode::invalid_sample_size, "sample must not be empty");
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!(values_[i] > 0.0) || !std::isfinite(values_[i])) {
        throw Error(ErrorCode::invalid_sample, "observations must be positive and finite",
                    "x[" + std::to_string(i) + "] = " + std::to_string(values_[i]));
      }
    }
  }

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  friend bool operator==(const Sample&, const Sample&) = default;

 private:
  std::vector<double> values_;
};

inline double pdf(const MixtureParams& params, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw Error(ErrorCode::domain_error, "pdf: x must be positive", std::to_string(x));
  }
  const double lambda = params.lambda();
  const double log_lambda = std::log(lambda);
  const double log_x = std::log(x);
  double density = 0.0;
  for (std::size_t j = 0; j < params.size(); ++j) {
    const double a = params.alpha()[j];
    density += params.pi()[j] * std::exp(a * log_lambda + (a - 1.0) * log_x - lambda * x - ln_gamma(a));
  }
  return density;
}

inline double cdf(const MixtureParams& params, double x) {
  if (!(x >= 0.0)) throw Error(ErrorCode::domain_error, "cdf: x must be nonnegative", std::to_string(x));
  double total = 0.0;
  for (std::size_t j = 0; j < params.size(); ++j) {
    total += params.pi()[j] * reg_lower_gamma_p(params.alpha()[j], params.lambda() * x);
  }
  return std::min(total, 1.0);
}

/// E[X^p] = lambda^{-p} sum_j pi_j Gamma(p + alpha_j) / Gamma(alpha_j), p > -min alpha.
inline double moment(const MixtureParams& params, double p) {
  if (!(p > -params.min_shape()) || !std::isfinite(p)) {
    throw Error(ErrorCode::domain_error, "moment of order p exists only for p > -min(alpha)",
                "p = " + std::to_string(p) + ", min alpha = " + std::to_string(params.min_shape()));
  }
  if (p == 0.0) return 1.0;
  double sum = 0.0;
  for (std::size_t j = 0; j < params.size(); ++j) {
    const double a = params.alpha()[j];
    sum += params.pi()[j] * std::exp(ln_gamma(p + a) - ln_gamma(a));
  }
  return sum * std::pow(params.lambda(), -p);
}

namespace detail {

// sum_j pi_j alpha_j and sum_j pi_j alpha_j (alpha_j + 1)
inline std::pair<double, double> shape_moments(const Components& c) {
  double first = 0.0;
  double second = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    first += c.pi[j] * c.alpha[j];
    second += c.pi[j] * c.alpha[j] * (c.alpha[j] + 1.0);
  }
  return {first, second};
}

}  // namespace detail

inline double mean(const MixtureParams& params) {
  return detail::shape_moments(params.components()).first / params.lambda();
}

inline double variance(const MixtureParams& params) {
  const auto [first, second] = detail::shape_moments(params.components());
  const double lambda = params.lambda();
  return (second - first * first) / (lambda * lambda);
}

/// One draw: choose the component, then a gamma variate with the shared rate.
inline double draw(const MixtureParams& params, Rng& rng) {
  const auto& pi = params.pi();
  std::size_t j = 0;
  if (pi.size() > 1) {
    double u = rng.uniform();
    for (; j + 1 < pi.size(); ++j) {
      if (u < pi[j]) break;
      u -= pi[j];
    }
  }
  const double x = gamma_variate(rng, params.alpha()[j]) / params.lambda();
  // Shapes far below one can underflow U^{1/alpha}; keep the draw in (0, inf).
  return x > 0.0 ? x : std::numeric_limits<double>::min();
}

/// Fills `out` with i.i.d. draws from `rng`.
inline void sample_into(const MixtureParams& params, Rng& rng, std::span<double> out) {
  for (double& x : out) x = draw(params, rng);
}

/// n i.i.d. draws, reproducible from `seed`.
inline Sample sample(const MixtureParams& params, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::invalid_sample_size, "sample size must be at least 1");
  Rng rng(seed);
  std::vector<double> values(n);
  sample_into(params, rng, values);
  return Sample(std::move(values));
}

}  // namespace ineqbias
