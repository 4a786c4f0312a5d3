#pragma once

// Dirichlet moment identities and a sampler built from normalized gammas.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ineqbias/error.hpp"
#include "ineqbias/random.hpp"
#include "ineqbias/specfun.hpp"

namespace ineqbias {

class DirichletParams {
 public:
  explicit DirichletParams(std::vector<double> alpha) : alpha_(std::move(alpha)) {
    if (alpha_.size() < 2) {
      throw Error(ErrorCode::invalid_argument, "Dirichlet needs at least two concentration parameters");
    }
    for (std::size_t i = 0; i < alpha_.size(); ++i) {
      if (!(alpha_[i] > 0.0) || !std::isfinite(alpha_[i])) {
        throw Error(ErrorCode::invalid_shape, "Dirichlet concentrations must be positive",
                    "alpha[" + std::to_string(i) + "] = " + std::to_string(alpha_[i]));
      }
    }
    total_ = std::accumulate(alpha_.begin(), alpha_.end(), 0.0);
  }

  const std::vector<double>& alpha() const { return alpha_; }
  std::size_t size() const { return alpha_.size(); }
  double total() const { return total_; }

 private:
  std::vector<double> alpha_;
  double total_ = 0.0;
};

namespace detail {

inline void check_exponents(const DirichletParams& params, std::span<const double> e, const char* what) {
  if (e.size() != params.size()) {
    throw Error(ErrorCode::length_mismatch, std::string(what) + ": exponent vector has the wrong length",
                std::to_string(e.size()) + " vs " + std::to_string(params.size()));
  }
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (!(e[i] >= 0.0) || !std::isfinite(e[i])) {
      throw Error(ErrorCode::invalid_argument, std::string(what) + ": exponents must be nonnegative",
                  "[" + std::to_string(i) + "] = " + std::to_string(e[i]));
    }
  }
}

// log of Gamma(sum a) / Gamma(sum (a + d)) * prod Gamma(a_j + d_j) / Gamma(a_j)
inline double log_mixed_moment(const DirichletParams& params, std::span<const double> d) {
  double shifted_total = params.total();
  double log_value = 0.0;
  for (std::size_t j = 0; j < d.size(); ++j) {
    if (d[j] == 0.0) continue;
    const double a = params.alpha()[j];
    shifted_total += d[j];
    log_value += ln_gamma(a + d[j]) - ln_gamma(a);
  }
  return log_value + ln_gamma(params.total()) - ln_gamma(shifted_total);
}

}  // namespace detail

/// E[prod_j D_j^{d_j}] for d_j >= 0, evaluated in log space.
inline double mixed_moment(const DirichletParams& params, std::span<const double> d) {
  detail::check_exponents(params, d, "mixed_moment");
  return std::exp(detail::log_mixed_moment(params, d));
}

/// E[(prod_j D_j^{c_j})^r log(prod_j D_j^{c_j})], the r-derivative of
/// mixed_moment(r c). For c = 0 the product is identically one and the result
/// is 0.
inline double log_weighted_moment(const DirichletParams& params, std::span<const double> c, double r) {
  detail::check_exponents(params, c, "log_weighted_moment");
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw Error(ErrorCode::invalid_argument, "log_weighted_moment: r must be nonnegative", std::to_string(r));
  }
  const double c_total = std::accumulate(c.begin(), c.end(), 0.0);
  if (c_total == 0.0) return 0.0;

  std::vector<double> d(c.size());
  std::transform(c.begin(), c.end(), d.begin(), [r](double cj) { return r * cj; });
  const double prefactor = std::exp(detail::log_mixed_moment(params, d));

  double bracket = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (c[j] != 0.0) bracket += c[j] * digamma(params.alpha()[j] + d[j]);
  }
  bracket -= c_total * digamma(params.total() + r * c_total);
  return prefactor * bracket;
}

/// One Dirichlet draw: D_j = Z_j / sum Z_i with independent Z_j ~ Gamma(alpha_j, 1).
/// Works in log space so that small concentrations cannot produce zeros.
inline std::vector<double> sample_dirichlet(const DirichletParams& params, Rng& rng) {
  std::vector<double> out(params.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = log_gamma_variate(rng, params.alpha()[j]);
  const double top = *std::max_element(out.begin(), out.end());
  double total = 0.0;
  for (double& v : out) {
    v = std::exp(v - top);
    total += v;
  }
  for (double& v : out) v /= total;
  return out;
}

inline std::vector<double> sample_dirichlet(const DirichletParams& params, std::uint64_t seed) {
  Rng rng(seed);
  return sample_dirichlet(params, rng);
}

}  // namespace ineqbias
