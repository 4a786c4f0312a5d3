#pragma once

// Sample estimators of the Theil, Atkinson and dispersion indices.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "ineqbias/error.hpp"
#include "ineqbias/mixture.hpp"

namespace ineqbias {

enum class Estimator { theil_t, theil_l, atkinson_1, atkinson_inf, vmr };

inline constexpr std::array<Estimator, 5> kAllEstimators = {
    Estimator::theil_t, Estimator::theil_l, Estimator::atkinson_1, Estimator::atkinson_inf, Estimator::vmr};

constexpr std::string_view to_string(Estimator e) {
  switch (e) {
    case Estimator::theil_t: return "theil_t";
    case Estimator::theil_l: return "theil_l";
    case Estimator::atkinson_1: return "atkinson_1";
    case Estimator::atkinson_inf: return "atkinson_inf";
    case Estimator::vmr: return "vmr";
  }
  return "unknown";
}

inline std::optional<Estimator> parse_estimator(std::string_view name) {
  for (Estimator e : kAllEstimators) {
    if (to_string(e) == name) return e;
  }
  return std::nullopt;
}

/// Smallest sample size for which the estimator is defined.
constexpr std::size_t min_sample_size(Estimator e) { return e == Estimator::vmr ? 2 : 1; }

namespace detail {

inline void check_observations(std::span<const double> x, std::size_t min_size, const char* what) {
  if (x.size() < min_size) {
    throw Error(ErrorCode::invalid_sample_size, std::string(what) + ": sample too small",
                "n = " + std::to_string(x.size()) + ", need " + std::to_string(min_size));
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !std::isfinite(x[i])) {
      throw Error(ErrorCode::invalid_sample, std::string(what) + ": observations must be positive",
                  "x[" + std::to_string(i) + "] = " + std::to_string(x[i]));
    }
  }
}

inline bool all_equal(std::span<const double> x) {
  return std::adjacent_find(x.begin(), x.end(), std::not_equal_to<>()) == x.end();
}

// Rounding can push a zero index slightly negative.
inline double clamp_tiny_negative(double v) { return (v < 0.0 && v > -1e-12) ? 0.0 : v; }

inline double sample_mean(std::span<const double> x) {
  double total = 0.0;
  for (double v : x) total += v;
  return total / static_cast<double>(x.size());
}

// Unchecked kernels; callers guarantee size and positivity.

inline double theil_t_kernel(std::span<const double> x) {
  if (all_equal(x)) return 0.0;
  double total = 0.0;
  for (double v : x) total += v;
  double entropy = 0.0;
  for (double v : x) {
    const double share = v / total;
    entropy += share * std::log(share);
  }
  return clamp_tiny_negative(entropy + std::log(static_cast<double>(x.size())));
}

inline double theil_l_kernel(std::span<const double> x) {
  if (all_equal(x)) return 0.0;
  const double xbar = sample_mean(x);
  double total = 0.0;
  for (double v : x) total += std::log(xbar / v);
  return clamp_tiny_negative(total / static_cast<double>(x.size()));
}

inline double atkinson_1_kernel(std::span<const double> x) {
  if (all_equal(x)) return 0.0;
  const double xbar = sample_mean(x);
  double log_total = 0.0;
  for (double v : x) log_total += std::log(v / xbar);
  return clamp_tiny_negative(-std::expm1(log_total / static_cast<double>(x.size())));
}

inline double atkinson_inf_kernel(std::span<const double> x) {
  if (all_equal(x)) return 0.0;
  const double smallest = *std::min_element(x.begin(), x.end());
  return clamp_tiny_negative(1.0 - smallest / sample_mean(x));
}

inline double vmr_kernel(std::span<const double> x) {
  const double xbar = sample_mean(x);
  double squares = 0.0;
  for (double v : x) squares += (v - xbar) * (v - xbar);
  return squares / static_cast<double>(x.size() - 1) / xbar;
}

inline double evaluate_kernel(Estimator e, std::span<const double> x) {
  switch (e) {
    case Estimator::theil_t: return theil_t_kernel(x);
    case Estimator::theil_l: return theil_l_kernel(x);
    case Estimator::atkinson_1: return atkinson_1_kernel(x);
    case Estimator::atkinson_inf: return atkinson_inf_kernel(x);
    case Estimator::vmr: return vmr_kernel(x);
  }
  return 0.0;
}

}  // namespace detail

/// T_T hat = sum D_i log D_i + log n with D_i = X_i / sum X.
inline double theil_t_hat(std::span<const double> x) {
  detail::check_observations(x, 1, "theil_t_hat");
  return detail::theil_t_kernel(x);
}

/// T_L hat = (1/n) sum log(Xbar / X_i)
inline double theil_l_hat(std::span<const double> x) {
  detail::check_observations(x, 1, "theil_l_hat");
  return detail::theil_l_kernel(x);
}

/// 1 - M_{1-eps}(X) / Xbar with the power mean evaluated on X / Xbar in log space.
inline double atkinson_eps_hat(std::span<const double> x, double eps) {
  detail::check_observations(x, 1, "atkinson_eps_hat");
  if (!(eps >= 0.0) || !std::isfinite(eps)) {
    throw Error(ErrorCode::domain_error, "atkinson_eps_hat: eps must be nonnegative", std::to_string(eps));
  }
  if (eps == 1.0) {
    throw Error(ErrorCode::domain_error, "atkinson_eps_hat: eps = 1 is the limit case, use atkinson_1_hat");
  }
  if (eps == 0.0 || detail::all_equal(x)) return 0.0;
  const double p = 1.0 - eps;
  const double xbar = detail::sample_mean(x);
  double top = -std::numeric_limits<double>::infinity();
  for (double v : x) top = std::max(top, p * std::log(v / xbar));
  double total = 0.0;
  for (double v : x) total += std::exp(p * std::log(v / xbar) - top);
  const double log_power_mean = (top + std::log(total / static_cast<double>(x.size()))) / p;
  return detail::clamp_tiny_negative(-std::expm1(log_power_mean));
}

/// 1 - (prod X_i)^{1/n} / Xbar
inline double atkinson_1_hat(std::span<const double> x) {
  detail::check_observations(x, 1, "atkinson_1_hat");
  return detail::atkinson_1_kernel(x);
}

/// 1 - min X_i / Xbar
inline double atkinson_inf_hat(std::span<const double> x) {
  detail::check_observations(x, 1, "atkinson_inf_hat");
  return detail::atkinson_inf_kernel(x);
}

/// S^2 / Xbar with the unbiased (n - 1) sample variance.
inline double vmr_hat(std::span<const double> x) {
  detail::check_observations(x, 2, "vmr_hat");
  return detail::vmr_kernel(x);
}

inline double evaluate(Estimator e, std::span<const double> x) {
  detail::check_observations(x, min_sample_size(e), std::string(to_string(e)).c_str());
  return detail::evaluate_kernel(e, x);
}

inline double theil_t_hat(const Sample& s) { return theil_t_hat(s.values()); }
inline double theil_l_hat(const Sample& s) { return theil_l_hat(s.values()); }
inline double atkinson_eps_hat(const Sample& s, double eps) { return atkinson_eps_hat(s.values(), eps); }
inline double atkinson_1_hat(const Sample& s) { return atkinson_1_hat(s.values()); }
inline double atkinson_inf_hat(const Sample& s) { return atkinson_inf_hat(s.values()); }
inline double vmr_hat(const Sample& s) { return vmr_hat(s.values()); }

}  // namespace ineqbias
