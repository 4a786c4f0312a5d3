#pragma once

// Exact finite-sample expectations and biases of the index estimators under a
// gamma mixture.
//
// Each expectation is a sum over ordered component labels (j_1, ..., j_n) with
// weight pi_{j_1} ... pi_{j_n}. Every summand depends on the labels only
// through the counts k_j = #{i : j_i = j}, so the sums here run over the
// C(n + m - 1, m - 1) compositions k with multinomial weights instead of the
// m^n tuples. Composition terms are evaluated in fixed-size blocks (optionally
// on several threads) and reduced pairwise in enumeration order, so results
// do not depend on the thread count.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ineqbias/compositions.hpp"
#include "ineqbias/error.hpp"
#include "ineqbias/estimators.hpp"
#include "ineqbias/indices.hpp"
#include "ineqbias/mixture.hpp"
#include "ineqbias/quadrature.hpp"
#include "ineqbias/specfun.hpp"
#include "ineqbias/summation.hpp"

namespace ineqbias {

struct EngineOptions {
  std::uint64_t composition_limit = kDefaultCompositionLimit;
  /// Worker threads for the composition sum; 0 uses every hardware thread.
  std::size_t threads = 1;
  QuadratureConfig quadrature{};
};

namespace detail {

inline constexpr std::uint64_t kCompositionBlock = 256;

inline void check_sample_size(unsigned n, unsigned minimum, const char* what) {
  if (n < minimum) {
    throw Error(ErrorCode::invalid_sample_size,
                std::string(what) + " needs n >= " + std::to_string(minimum), "n = " + std::to_string(n));
  }
}

/// sum_k multinomial(n; k) prod_j pi_j^{k_j} * term(k, sum_j k_j alpha_j),
/// componentwise for a term returning std::array<double, K>.
template <std::size_t K, typename Term>
std::array<double, K> composition_sum(const Components& c, unsigned n, const EngineOptions& opts, Term&& term) {
  const std::size_t m = c.size();
  check_composition_limit(n, m, opts.composition_limit);
  const std::uint64_t count = composition_count(n, m);

  std::vector<double> log_factorial(n + 1);
  for (unsigned i = 0; i <= n; ++i) log_factorial[i] = ln_gamma(i + 1.0);
  std::vector<double> log_pi(m);
  for (std::size_t j = 0; j < m; ++j) log_pi[j] = std::log(c.pi[j]);

  const std::uint64_t blocks = (count + kCompositionBlock - 1) / kCompositionBlock;
  std::vector<std::array<double, K>> block_sums(blocks);

  parallel_blocks(blocks, opts.threads, [&](std::size_t b) {
    const std::uint64_t first = b * kCompositionBlock;
    const std::uint64_t last = std::min(count, first + kCompositionBlock);
    std::vector<unsigned> k = unrank_composition(n, m, first);
    std::array<std::vector<double>, K> terms;
    for (auto& t : terms) t.reserve(last - first);
    for (std::uint64_t r = first; r < last; ++r) {
      double log_weight = log_factorial[n];
      double shape_sum = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        if (k[j] == 0) continue;
        log_weight += k[j] * log_pi[j] - log_factorial[k[j]];
        shape_sum += k[j] * c.alpha[j];
      }
      const double weight = std::exp(log_weight);
      const std::array<double, K> value = term(std::span<const unsigned>(k), shape_sum);
      for (std::size_t i = 0; i < K; ++i) terms[i].push_back(weight * value[i]);
      next_composition(k);
    }
    for (std::size_t i = 0; i < K; ++i) block_sums[b][i] = pairwise_sum(terms[i]);
  });

  std::array<double, K> total{};
  std::vector<double> column(blocks);
  for (std::size_t i = 0; i < K; ++i) {
    for (std::uint64_t b = 0; b < blocks; ++b) column[b] = block_sums[b][i];
    total[i] = pairwise_sum(column);
  }
  return total;
}

}  // namespace detail

/// E[T_T hat] = sum_k w_k [sum_j k_j a_j psi(a_j) - A psi(A) + n - 1] / A + log n,
/// with A = sum_j k_j a_j.
inline double expected_theil_t(const Components& c, unsigned n, const EngineOptions& opts = {}) {
  detail::check_sample_size(n, 1, "expected_theil_t");
  std::vector<double> a_psi(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) a_psi[j] = c.alpha[j] * digamma(c.alpha[j]);
  const auto sum = detail::composition_sum<1>(c, n, opts, [&](std::span<const unsigned> k, double shape_sum) {
    double inner = 0.0;
    for (std::size_t j = 0; j < k.size(); ++j) inner += k[j] * a_psi[j];
    return std::array<double, 1>{(inner - shape_sum * digamma(shape_sum) + (n - 1.0)) / shape_sum};
  });
  return sum[0] + std::log(static_cast<double>(n));
}

/// E[T_L hat] = sum_k w_k psi(A) - log n - sum_j pi_j psi(a_j)
inline double expected_theil_l(const Components& c, unsigned n, const EngineOptions& opts = {}) {
  detail::check_sample_size(n, 1, "expected_theil_l");
  const auto sum = detail::composition_sum<1>(
      c, n, opts, [](std::span<const unsigned>, double shape_sum) { return std::array<double, 1>{digamma(shape_sum)}; });
  double mean_psi = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) mean_psi += c.pi[j] * digamma(c.alpha[j]);
  return sum[0] - std::log(static_cast<double>(n)) - mean_psi;
}

/// E[A(1) hat] = 1 - n sum_k w_k / A * prod_j [Gamma(a_j + 1/n) / Gamma(a_j)]^{k_j}
inline double expected_atkinson_1(const Components& c, unsigned n, const EngineOptions& opts = {}) {
  detail::check_sample_size(n, 1, "expected_atkinson_1");
  const double step = 1.0 / n;
  std::vector<double> log_ratio(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) log_ratio[j] = ln_gamma(c.alpha[j] + step) - ln_gamma(c.alpha[j]);
  const auto sum = detail::composition_sum<1>(c, n, opts, [&](std::span<const unsigned> k, double shape_sum) {
    double log_product = 0.0;
    for (std::size_t j = 0; j < k.size(); ++j) log_product += k[j] * log_ratio[j];
    return std::array<double, 1>{std::exp(log_product) / shape_sum};
  });
  return 1.0 - n * sum[0];
}

struct QuadratureExpectation {
  double value = 0.0;
  /// Propagated bound from the per-composition quadrature error estimates.
  double quadrature_error = 0.0;
};

/// E[A(inf) hat] = 1 - n sum_k w_k / A * int_0^inf prod_j Q(a_j, u)^{k_j} du,
/// together with the accumulated quadrature error estimate.
inline QuadratureExpectation expected_atkinson_inf_detailed(const Components& c, unsigned n,
                                                            const EngineOptions& opts = {}) {
  detail::check_sample_size(n, 1, "expected_atkinson_inf");
  opts.quadrature.validate();
  const auto sum = detail::composition_sum<2>(c, n, opts, [&](std::span<const unsigned> k, double shape_sum) {
    const QuadratureResult q = integral_q_product(c.alpha, k, opts.quadrature);
    if (!q.converged) {
      std::string counts;
      for (unsigned x : k) counts += (counts.empty() ? "" : ",") + std::to_string(x);
      throw Error(ErrorCode::quadrature_limit_exceeded,
                  "quadrature did not reach the requested tolerance within the subdivision limit; partial value " +
                      std::to_string(q.value) + " with error estimate " + std::to_string(q.error_estimate),
                  "k = (" + counts + ")");
    }
    return std::array<double, 2>{q.value / shape_sum, q.error_estimate / shape_sum};
  });
  return {1.0 - n * sum[0], n * sum[1]};
}

inline double expected_atkinson_inf(const Components& c, unsigned n, const EngineOptions& opts = {}) {
  return expected_atkinson_inf_detailed(c, n, opts).value;
}

/// E[VMR hat] for unit rate:
/// n/(n-1) sum_k w_k [sum_j k_j a_j (a_j + 1) / (A + 1) - A / n]. Requires n >= 2.
inline double expected_vmr(const Components& c, unsigned n, const EngineOptions& opts = {}) {
  detail::check_sample_size(n, 2, "expected_vmr");
  std::vector<double> second(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) second[j] = c.alpha[j] * (c.alpha[j] + 1.0);
  const auto sum = detail::composition_sum<1>(c, n, opts, [&](std::span<const unsigned> k, double shape_sum) {
    double inner = 0.0;
    for (std::size_t j = 0; j < k.size(); ++j) inner += k[j] * second[j];
    return std::array<double, 1>{inner / (shape_sum + 1.0) - shape_sum / n};
  });
  return n / (n - 1.0) * sum[0];
}

inline double expected_theil_t(const MixtureParams& p, unsigned n, const EngineOptions& opts = {}) {
  return expected_theil_t(p.components(), n, opts);
}
inline double expected_theil_l(const MixtureParams& p, unsigned n, const EngineOptions& opts = {}) {
  return expected_theil_l(p.components(), n, opts);
}
inline double expected_atkinson_1(const MixtureParams& p, unsigned n, const EngineOptions& opts = {}) {
  return expected_atkinson_1(p.components(), n, opts);
}
inline double expected_atkinson_inf(const MixtureParams& p, unsigned n, const EngineOptions& opts = {}) {
  return expected_atkinson_inf(p.components(), n, opts);
}
inline QuadratureExpectation expected_atkinson_inf_detailed(const MixtureParams& p, unsigned n,
                                                            const EngineOptions& opts = {}) {
  return expected_atkinson_inf_detailed(p.components(), n, opts);
}
/// The rate enters only as the overall factor 1 / lambda.
inline double expected_vmr(const MixtureParams& p, unsigned n, const EngineOptions& opts = {}) {
  return expected_vmr(p.components(), n, opts) / p.lambda();
}

/// Exact expectation of any estimator.
inline double expected_value(const MixtureParams& p, Estimator e, unsigned n, const EngineOptions& opts = {}) {
  switch (e) {
    case Estimator::theil_t: return expected_theil_t(p, n, opts);
    case Estimator::theil_l: return expected_theil_l(p, n, opts);
    case Estimator::atkinson_1: return expected_atkinson_1(p, n, opts);
    case Estimator::atkinson_inf: return expected_atkinson_inf(p, n, opts);
    case Estimator::vmr: return expected_vmr(p, n, opts);
  }
  return 0.0;
}

/// Population value targeted by each estimator.
inline double population_value(const MixtureParams& p, Estimator e) {
  switch (e) {
    case Estimator::theil_t: return theil_t(p);
    case Estimator::theil_l: return theil_l(p);
    case Estimator::atkinson_1: return atkinson_1(p);
    case Estimator::atkinson_inf: return atkinson_inf(p);
    case Estimator::vmr: return vmr(p);
  }
  return 0.0;
}

struct EstimatorBias {
  Estimator estimator;
  double population = 0.0;
  double expectation = 0.0;
  double bias = 0.0;
  /// Set for the A(inf) row only.
  std::optional<double> quadrature_error;
};

struct BiasReport {
  unsigned n = 0;
  MixtureParams params;
  std::uint64_t composition_count = 0;
  /// One row per estimator defined at this n (VMR needs n >= 2).
  std::vector<EstimatorBias> rows;

  const EstimatorBias* find(Estimator e) const {
    for (const auto& row : rows) {
      if (row.estimator == e) return &row;
    }
    return nullptr;
  }
};

/// Population value, exact expectation and bias for each estimator. Errors
/// are rethrown with the estimator name prepended to their context.
inline BiasReport bias_report(const MixtureParams& params, unsigned n, const EngineOptions& opts = {}) {
  detail::check_sample_size(n, 1, "bias_report");
  BiasReport report{n, params, composition_count(n, params.size()), {}};
  for (Estimator e : kAllEstimators) {
    if (n < min_sample_size(e)) continue;
    try {
      EstimatorBias row{e, 0.0, 0.0, 0.0, std::nullopt};
      row.population = population_value(params, e);
      if (e == Estimator::vmr) {
        // Work at unit rate and rescale, so the bias scales exactly as 1/lambda.
        const double unit_population = vmr(params.with_rate(1.0));
        const double unit_expectation = expected_vmr(params.components(), n, opts);
        row.expectation = unit_expectation / params.lambda();
        row.bias = (unit_expectation - unit_population) / params.lambda();
        report.rows.push_back(row);
        continue;
      }
      if (e == Estimator::atkinson_inf) {
        const auto detailed = expected_atkinson_inf_detailed(params, n, opts);
        row.expectation = detailed.value;
        row.quadrature_error = detailed.quadrature_error;
      } else {
        row.expectation = expected_value(params, e, n, opts);
      }
      row.bias = row.expectation - row.population;
      report.rows.push_back(row);
    } catch (const Error& err) {
      std::string context = "estimator = " + std::string(to_string(e));
      if (!err.context().empty()) context += "; " + err.context();
      throw Error(err.code(), err.what(), context);
    }
  }
  return report;
}

}  // namespace ineqbias
