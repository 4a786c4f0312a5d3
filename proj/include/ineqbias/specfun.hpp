#pragma once

// Log-gamma, digamma and the regularized incomplete gamma functions for
// positive real arguments. Everything here is pure and reentrant.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ineqbias/error.hpp"

namespace ineqbias {

namespace detail {

inline void require_positive_finite(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw Error(ErrorCode::domain_error,
                std::string(what) + ": argument must be positive and finite",
                std::to_string(x));
  }
}

// zeta(k) - 1 for k = 2, 3, ..., 45.
inline constexpr std::array<double, 44> kZetaMinusOne = {
    0.644934066848226436,     0.202056903159594285,     0.0823232337111381915,
    0.0369277551433699263,    0.0173430619844491397,    0.00834927738192282684,
    0.00407735619794433938,   0.00200839282608221442,   0.000994575127818085337,
    0.000494188604119464559,  0.000246086553308048299,  0.000122713347578489147,
    0.0000612481350587048293, 0.0000305882363070204936, 0.0000152822594086518717,
    7.63719763789976227e-6,   3.81729326499983986e-6,   1.90821271655393893e-6,
    9.53962033872796113e-7,   4.76932986787806463e-7,   2.3845050272773299e-7,
    1.19219925965311073e-7,   5.96081890512594796e-8,   2.98035035146522802e-8,
    1.49015548283650412e-8,   7.45071178983542949e-9,   3.72533402478845705e-9,
    1.86265972351304901e-9,   9.31327432419668183e-10,  4.65662906503378407e-10,
    2.32831183367650549e-10,  1.16415501727005198e-10,  5.82077208790270089e-11,
    2.91038504449709969e-11,  1.45519218910419842e-11,  7.27595983505748101e-12,
    3.63797954737865119e-12,  1.81898965030706595e-12,  9.09494784026388928e-13,
    4.54747378304215403e-13,  2.27373684582465252e-13,  1.13686840768022785e-13,
    5.68434198762758561e-14,  2.84217097688930186e-14,
};

// log Gamma(2 + a) for |a| <= 0.5 via
//   (1 - gamma) a + sum_{k>=2} (-1)^k (zeta(k) - 1) a^k / k.
inline double lgamma_2p(double a) {
  double sum = 0.0;
  double power = a;
  for (std::size_t i = 0; i < kZetaMinusOne.size(); ++i) {
    power *= a;
    const int k = static_cast<int>(i) + 2;
    const double term = kZetaMinusOne[i] * power / k;
    sum += (k % 2 == 0) ? term : -term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return (1.0 - std::numbers::egamma) * a + sum;
}

// Remainder of Stirling's series for log Gamma(x), x >= 10.
inline double stirling_correction(double x) {
  const double r = 1.0 / x;
  const double r2 = r * r;
  return r * (1.0 / 12.0 +
              r2 * (-1.0 / 360.0 +
                    r2 * (1.0 / 1260.0 +
                          r2 * (-1.0 / 1680.0 +
                                r2 * (1.0 / 1188.0 +
                                      r2 * (-691.0 / 360360.0 +
                                            r2 * (1.0 / 156.0 + r2 * (-3617.0 / 122400.0))))))));
}

inline constexpr double kHalfLog2Pi = 0.91893853320467274178;

inline double lgamma_stirling(double x) {
  return (x - 0.5) * std::log(x) - x + kHalfLog2Pi + stirling_correction(x);
}

// log Gamma(1 + a) for -0.5 < a <= 1.5, accurate in the relative sense near
// a = 0 and a = 1.
inline double lgamma1p(double a) {
  if (a <= 0.5) return lgamma_2p(a) - std::log1p(a);
  return lgamma_2p(a - 1.0);
}

// log(1 + t) - t without cancellation for small |t|.
inline double log1pmx(double t) {
  if (std::abs(t) >= 0.5) return std::log1p(t) - t;
  const double v = t / (2.0 + t);
  const double v2 = v * v;
  double sum = 0.0;
  double power = 1.0;
  for (int k = 1; k < 60; ++k) {
    power *= v2;
    const double term = power / (2 * k + 1);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return -t * t / (2.0 + t) + 2.0 * v * sum;
}

// log(x^a e^{-x} / Gamma(a)).
inline double log_gamma_kernel(double a, double x);

// Root of digamma and Taylor coefficients psi^{(k)}(x0)/k! around it.
inline constexpr double kDigammaRootHi = 1.4616321449683622;
inline constexpr double kDigammaRootLo = 9.549995429965697e-17;
inline constexpr std::array<double, 21> kDigammaRootTaylor = {
    0.96767224544762117,     -0.442763168983592106,   0.258499760955651011,
    -0.163942705442406528,   0.107824050691262366,    -0.0721995612564547109,
    0.0488042881641431072,   -0.0331611264748473593,  0.0225976482322181047,
    -0.0154247659049489591,  0.0105387916166121754,   -0.00720453438635686824,
    0.00492678139572985345,  -0.00336980165543932808, 0.00230512632673492784,
    -0.00157693677143019726, 0.00107882520191629658,  -0.00073807093899600513,
    0.000504953265834602035, -0.0003454680251063077,  0.000236356015640270528,
};

}  // namespace detail

/// Natural log of the gamma function for x > 0.
inline double ln_gamma(double x) {
  detail::require_positive_finite(x, "ln_gamma");
  if (x >= 10.0) return detail::lgamma_stirling(x);
  if (x >= 2.5) {
    double product = 1.0;
    double shifted = x;
    while (shifted < 10.0) {
      product *= shifted;
      shifted += 1.0;
    }
    return detail::lgamma_stirling(shifted) - std::log(product);
  }
  // The shifts below are exact in floating point, which keeps the relative
  // accuracy near the zeros at 1 and 2.
  if (x >= 1.5) return detail::lgamma_2p(x - 2.0);
  if (x >= 0.5) return detail::lgamma1p(x - 1.0);
  return detail::lgamma1p(x) - std::log(x);
}

/// Digamma (psi) for x > 0: recurrence up to x >= 6, then the asymptotic
/// Bernoulli series. Close to the positive root a Taylor expansion keeps the
/// result accurate in the relative sense.
inline double digamma(double x) {
  detail::require_positive_finite(x, "digamma");
  const double h = (x - detail::kDigammaRootHi) - detail::kDigammaRootLo;
  if (std::abs(h) < 0.2) {
    double sum = 0.0;
    for (std::size_t i = detail::kDigammaRootTaylor.size(); i-- > 0;) {
      sum = (sum + detail::kDigammaRootTaylor[i]) * h;
    }
    return sum;
  }
  double shift = 0.0;
  while (x < 6.0) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  const double r2 = 1.0 / (x * x);
  const double series =
      r2 * (1.0 / 12.0 -
            r2 * (1.0 / 120.0 -
                  r2 * (1.0 / 252.0 -
                        r2 * (1.0 / 240.0 -
                              r2 * (1.0 / 132.0 -
                                    r2 * (691.0 / 32760.0 -
                                          r2 * (1.0 / 12.0 - r2 * (3617.0 / 8160.0))))))));
  return std::log(x) - 0.5 / x - series + shift;
}

namespace detail {

inline double log_gamma_kernel(double a, double x) {
  if (a < 10.0) return a * std::log(x) - x - ln_gamma(a);
  // a log(x/a) - (x - a) = a * log1pmx((x - a)/a), then Stirling for Gamma(a).
  const double t = (x - a) / a;
  return a * log1pmx(t) + 0.5 * std::log(a) - kHalfLog2Pi - stirling_correction(a);
}

inline void check_incomplete_gamma_args(double a, double x, const char* what) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw Error(ErrorCode::domain_error, std::string(what) + ": shape must be positive",
                std::to_string(a));
  }
  if (!(x >= 0.0)) {
    throw Error(ErrorCode::domain_error, std::string(what) + ": x must be nonnegative",
                std::to_string(x));
  }
}

inline constexpr double kSeriesEps = 1e-17;
inline constexpr int kMaxIterations = 1000000;

// P(a, x) by its power series; intended for x < a + 1.
inline double lower_gamma_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double denom = a;
  for (int i = 0; i < kMaxIterations; ++i) {
    denom += 1.0;
    term *= x / denom;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kSeriesEps) break;
  }
  return sum * std::exp(log_gamma_kernel(a, x));
}

// Q(a, x) by the Legendre continued fraction (modified Lentz); x >= a + 1.
inline double upper_gamma_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kSeriesEps) break;
  }
  return std::exp(log_gamma_kernel(a, x)) * h;
}

// Q(a, x) for a < 1 and x < a + 1, evaluated directly so that small Q keeps
// its relative accuracy:
//   Q = 1 - x^a/Gamma(1+a) - x^a/Gamma(1+a) * a * sum_{k>=1} (-x)^k / (k! (a+k)).
inline double upper_gamma_small_shape(double a, double x) {
  const double log_lead = a * std::log(x) - lgamma1p(a);
  double sum = 0.0;
  double term = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= -x / k;
    const double contribution = term / (a + k);
    sum += contribution;
    if (std::abs(contribution) < kSeriesEps * std::abs(sum)) break;
  }
  return -std::expm1(log_lead) - std::exp(log_lead) * a * sum;
}

}  // namespace detail

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
inline double reg_upper_gamma_q(double a, double x) {
  detail::check_incomplete_gamma_args(a, x, "reg_upper_gamma_q");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) {
    if (a < 1.0) return detail::upper_gamma_small_shape(a, x);
    return 1.0 - detail::lower_gamma_series(a, x);
  }
  return detail::upper_gamma_fraction(a, x);
}

/// Regularized lower incomplete gamma P(a, x) = 1 - Q(a, x).
inline double reg_lower_gamma_p(double a, double x) {
  detail::check_incomplete_gamma_args(a, x, "reg_lower_gamma_p");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return detail::lower_gamma_series(a, x);
  return 1.0 - detail::upper_gamma_fraction(a, x);
}

}  // namespace ineqbias
