#pragma once

// Population inequality and dispersion indices of a gamma mixture.
// Everything except vmr() depends on (pi, alpha) only.

#include <cmath>
#include <string>

#include "ineqbias/error.hpp"
#include "ineqbias/mixture.hpp"
#include "ineqbias/specfun.hpp"

namespace ineqbias {

struct IndexReport {
  double theil_t = 0.0;
  double theil_l = 0.0;
  double atkinson_1 = 0.0;
  double atkinson_inf = 1.0;
  double vmr = 0.0;
};

/// T_T = [sum pi_j alpha_j psi(alpha_j) + 1] / sum pi_j alpha_j - log(sum pi_j alpha_j)
inline double theil_t(const Components& c) {
  double weighted_shape = 0.0;
  double weighted_psi = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    weighted_shape += c.pi[j] * c.alpha[j];
    weighted_psi += c.pi[j] * c.alpha[j] * digamma(c.alpha[j]);
  }
  return (weighted_psi + 1.0) / weighted_shape - std::log(weighted_shape);
}

/// T_L = log(sum pi_j alpha_j) - sum pi_j psi(alpha_j)
inline double theil_l(const Components& c) {
  double weighted_shape = 0.0;
  double mean_psi = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    weighted_shape += c.pi[j] * c.alpha[j];
    mean_psi += c.pi[j] * digamma(c.alpha[j]);
  }
  return std::log(weighted_shape) - mean_psi;
}

/// A(eps) = 1 - E[X^{1-eps}]^{1/(1-eps)} / mu for eps >= 0, eps != 1.
/// Requires 1 - eps > -min(alpha) so that the moment exists.
inline double atkinson_eps(const Components& c, double eps) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) {
    throw Error(ErrorCode::domain_error, "atkinson_eps: eps must be nonnegative", std::to_string(eps));
  }
  if (eps == 1.0) {
    throw Error(ErrorCode::domain_error, "atkinson_eps: eps = 1 is the limit case, use atkinson_1");
  }
  const double p = 1.0 - eps;
  double min_shape = c.alpha.front();
  for (double a : c.alpha) min_shape = std::min(min_shape, a);
  if (!(p > -min_shape)) {
    throw Error(ErrorCode::domain_error, "atkinson_eps: moment of order 1 - eps does not exist",
                "eps = " + std::to_string(eps) + ", min alpha = " + std::to_string(min_shape));
  }
  double power_moment = 0.0;
  double weighted_shape = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    power_moment += c.pi[j] * std::exp(ln_gamma(p + c.alpha[j]) - ln_gamma(c.alpha[j]));
    weighted_shape += c.pi[j] * c.alpha[j];
  }
  return 1.0 - std::exp(std::log(power_moment) / p) / weighted_shape;
}

/// A(1) = 1 - exp(sum pi_j psi(alpha_j)) / sum pi_j alpha_j
inline double atkinson_1(const Components& c) {
  double weighted_shape = 0.0;
  double mean_psi = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    weighted_shape += c.pi[j] * c.alpha[j];
    mean_psi += c.pi[j] * digamma(c.alpha[j]);
  }
  return 1.0 - std::exp(mean_psi) / weighted_shape;
}

/// A(inf) is 1 for every gamma mixture: the support reaches down to zero.
inline double atkinson_inf(const Components&) { return 1.0; }

inline double theil_t(const MixtureParams& params) { return theil_t(params.components()); }
inline double theil_l(const MixtureParams& params) { return theil_l(params.components()); }
inline double atkinson_eps(const MixtureParams& params, double eps) {
  return atkinson_eps(params.components(), eps);
}
inline double atkinson_1(const MixtureParams& params) { return atkinson_1(params.components()); }
inline double atkinson_inf(const MixtureParams& params) { return atkinson_inf(params.components()); }

/// Variance-to-mean ratio [sum pi a (a + 1) - (sum pi a)^2] / (lambda sum pi a).
inline double vmr(const MixtureParams& params) {
  const auto [first, second] = detail::shape_moments(params.components());
  return (second - first * first) / first / params.lambda();
}

inline IndexReport index_report(const MixtureParams& params) {
  return {theil_t(params), theil_l(params), atkinson_1(params), atkinson_inf(params), vmr(params)};
}

}  // namespace ineqbias
