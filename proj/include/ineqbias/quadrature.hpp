#pragma once

// Globally adaptive 15-point Gauss-Kronrod quadrature, and the semi-infinite
// integral of products of regularized upper incomplete gamma functions.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ineqbias/error.hpp"
#include "ineqbias/specfun.hpp"

namespace ineqbias {

struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  /// The integration range [0, U] is extended until the integrand drops below this.
  double truncation = 1e-16;
  std::size_t max_subdivisions = 2000;

  void validate() const {
    if (!(rel_tol > 0.0 && rel_tol < 1.0) || !(abs_tol > 0.0) || !(truncation > 0.0) ||
        max_subdivisions == 0) {
      throw Error(ErrorCode::invalid_argument,
                  "quadrature settings must be positive with rel_tol < 1");
    }
  }
};

struct QuadratureResult {
  double value = 0.0;
  /// Kronrod error estimate plus the bound on the discarded tail.
  double error_estimate = 0.0;
  double upper_limit = 0.0;
  double tail_bound = 0.0;
  std::size_t subdivisions = 0;
  bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for nodes 1, 3, 5 and the centre.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo;
  double hi;
  double value;
  double error;
};

template <typename F>
Panel kronrod_panel(F& f, double lo, double hi) {
  const double centre = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(centre);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  std::array<double, 15> values{};
  values[7] = fc;
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double f1 = f(centre - dx);
    const double f2 = f(centre + dx);
    values[i] = f1;
    values[14 - i] = f2;
    kronrod += kKronrodWeights[i] * (f1 + f2);
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * (f1 + f2);
  }
  // QUADPACK-style scaled error estimate.
  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[7] * std::abs(fc - mean);
  for (std::size_t i = 0; i < 7; ++i) {
    asc += kKronrodWeights[i] * (std::abs(values[i] - mean) + std::abs(values[14 - i] - mean));
  }
  asc *= std::abs(half);
  double error = std::abs((kronrod - gauss) * half);
  if (asc != 0.0 && error != 0.0) error = asc * std::min(1.0, std::pow(200.0 * error / asc, 1.5));
  return {lo, hi, kronrod * half, error};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod on a finite interval: bisects the panel with the
/// largest error until the total error meets max(abs_tol, rel_tol |I|) or
/// the subdivision budget is spent.
template <typename F>
QuadratureResult integrate_finite(F&& f, double lo, double hi, double rel_tol, double abs_tol,
                                  std::size_t max_subdivisions) {
  std::vector<detail::Panel> panels{detail::kronrod_panel(f, lo, hi)};
  auto totals = [&panels] {
    double value = 0.0;
    double error = 0.0;
    for (const auto& p : panels) {
      value += p.value;
      error += p.error;
    }
    return std::pair{value, error};
  };
  auto [value, error] = totals();
  std::size_t subdivisions = 0;
  while (error > std::max(abs_tol, rel_tol * std::abs(value)) && subdivisions < max_subdivisions) {
    auto worst = std::max_element(panels.begin(), panels.end(),
                                  [](const auto& a, const auto& b) { return a.error < b.error; });
    const double mid = 0.5 * (worst->lo + worst->hi);
    if (!(mid > worst->lo && mid < worst->hi)) break;
    const detail::Panel right = detail::kronrod_panel(f, mid, worst->hi);
    *worst = detail::kronrod_panel(f, worst->lo, mid);
    panels.push_back(right);
    ++subdivisions;
    std::tie(value, error) = totals();
  }
  std::sort(panels.begin(), panels.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
  std::tie(value, error) = totals();
  QuadratureResult result;
  result.value = value;
  result.error_estimate = error;
  result.upper_limit = hi;
  result.subdivisions = subdivisions;
  result.converged = error <= std::max(abs_tol, rel_tol * std::abs(value));
  return result;
}

/// int_0^inf of a nonincreasing integrand f with f(0) <= 1. The range is
/// truncated at the first U = 2^k with f(U) < cfg.truncation; `tail_bound(U)`
/// must bound the discarded integral over [U, inf) and is added to the error
/// estimate.
template <typename F, typename TailBound>
QuadratureResult integrate_decreasing(F&& f, TailBound&& tail_bound, const QuadratureConfig& cfg) {
  cfg.validate();
  double upper = 1.0;
  for (int i = 0; i < 1100 && f(upper) >= cfg.truncation; ++i) upper *= 2.0;
  QuadratureResult result =
      integrate_finite(f, 0.0, upper, cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions);
  result.tail_bound = std::max(0.0, tail_bound(upper));
  result.error_estimate += result.tail_bound;
  return result;
}

namespace detail {

// int_U^inf Q(a, u) du = E[(Z - U)^+] = (a - U) Q(a, U) + U^a e^{-U} / Gamma(a).
inline double single_factor_tail(double a, double upper) {
  return (a - upper) * reg_upper_gamma_q(a, upper) + std::exp(a * std::log(upper) - upper - ln_gamma(a));
}

// Bound on int_U^inf prod_j Q(a_j, u)^{k_j} du. Every factor is
// nonincreasing, so for any i with k_i >= 1 the integrand beyond U is at most
// [f(U) / Q(a_i, U)] Q(a_i, u), giving the bound
// f(U) / Q(a_i, U) * single_factor_tail(a_i, U); the smallest over i is used.
inline double q_product_tail(std::span<const double> alpha, std::span<const unsigned> k, double upper) {
  double log_f = 0.0;
  std::vector<double> log_q(alpha.size(), 0.0);
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    if (k[j] == 0) continue;
    const double q = reg_upper_gamma_q(alpha[j], upper);
    log_q[j] = q > 0.0 ? std::log(q) : -std::numeric_limits<double>::infinity();
    log_f += k[j] * log_q[j];
  }
  double bound = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    if (k[j] == 0) continue;
    const double single = std::max(0.0, single_factor_tail(alpha[j], upper));
    const double scale = std::isfinite(log_q[j]) ? std::exp(log_f - log_q[j]) : 1.0;
    bound = std::min(bound, scale * single);
  }
  return bound;
}

}  // namespace detail

/// int_0^inf prod_j Q(alpha_j, u)^{k_j} du for nonnegative integer powers with
/// sum k_j >= 1.
inline QuadratureResult integral_q_product(std::span<const double> alpha, std::span<const unsigned> k,
                                           const QuadratureConfig& cfg = {}) {
  if (alpha.size() != k.size()) {
    throw Error(ErrorCode::length_mismatch, "integral_q_product: alpha and k differ in length");
  }
  unsigned total = 0;
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    if (!(alpha[j] > 0.0)) throw Error(ErrorCode::invalid_shape, "integral_q_product: shape must be positive");
    total += k[j];
  }
  if (total == 0) throw Error(ErrorCode::invalid_argument, "integral_q_product: powers must not all be zero");

  auto integrand = [&](double u) {
    double log_product = 0.0;
    for (std::size_t j = 0; j < alpha.size(); ++j) {
      if (k[j] == 0) continue;
      const double q = reg_upper_gamma_q(alpha[j], u);
      if (q <= 0.0) return 0.0;
      log_product += k[j] * std::log(q);
    }
    return std::exp(log_product);
  };
  auto tail = [&](double upper) { return detail::q_product_tail(alpha, k, upper); };
  return integrate_decreasing(integrand, tail, cfg);
}

}  // namespace ineqbias
