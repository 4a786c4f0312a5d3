#include <gtest/gtest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "ineqbias/quadrature.hpp"

using namespace ineqbias;

TEST(IntegrateFinite, SmoothIntegrands) {
  auto cubic = [](double x) { return x * x * x - 2.0 * x; };
  EXPECT_NEAR(integrate_finite(cubic, 0.0, 2.0, 1e-12, 1e-15, 100).value, 0.0, 1e-14);
  auto bump = [](double x) { return std::exp(-x * x); };
  const auto r = integrate_finite(bump, -6.0, 6.0, 1e-13, 1e-16, 200);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.value, std::sqrt(std::numbers::pi) * std::erf(6.0), 1e-13);
}

TEST(IntegrateFinite, KinkNeedsSubdivision) {
  auto kink = [](double x) { return std::sqrt(std::abs(x - 0.3)); };
  const double exact = (std::pow(0.3, 1.5) + std::pow(0.7, 1.5)) * 2.0 / 3.0;
  const auto r = integrate_finite(kink, 0.0, 1.0, 1e-11, 1e-15, 500);
  EXPECT_TRUE(r.converged);
  EXPECT_GT(r.subdivisions, 0u);
  EXPECT_NEAR(r.value, exact, 1e-10);
}

TEST(IntegrateFinite, BudgetExhaustionIsReported) {
  auto kink = [](double x) { return std::sqrt(std::abs(x - 0.3)); };
  const auto r = integrate_finite(kink, 0.0, 1.0, 1e-15, 1e-300, 2);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.subdivisions, 2u);
  EXPECT_NEAR(r.value, 0.5, 1e-3);
}

TEST(IntegralQProduct, SingleFactorIsTheShape) {
  for (double a : {0.5, 1.0, 2.5, 7.0}) {
    const std::vector<double> alpha{a};
    const std::vector<unsigned> k{1};
    const auto r = integral_q_product(alpha, k);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value / a, 1.0, 1e-8) << "a = " << a;
    EXPECT_GT(r.upper_limit, a);
    EXPECT_LE(r.error_estimate, 1e-8 * a);
  }
}

TEST(IntegralQProduct, SingleFactorInsideLargerShapeVector) {
  const std::vector<double> alpha{0.5, 1.0, 2.5, 7.0};
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    std::vector<unsigned> k(alpha.size(), 0);
    k[j] = 1;
    EXPECT_NEAR(integral_q_product(alpha, k).value / alpha[j], 1.0, 1e-8);
  }
}

TEST(IntegralQProduct, ExponentialPowers) {
  for (unsigned n : {1u, 2u, 4u, 8u, 30u}) {
    const std::vector<double> alpha{1.0};
    const std::vector<unsigned> k{n};
    EXPECT_NEAR(integral_q_product(alpha, k).value * n, 1.0, 1e-9) << "n = " << n;
  }
}

TEST(IntegralQProduct, MixedAnalytic) {
  // Q(1,u) = e^{-u}, Q(2,u) = (1+u) e^{-u}
  const std::vector<double> alpha{1.0, 2.0};
  EXPECT_NEAR(integral_q_product(alpha, std::vector<unsigned>{1, 1}).value, 0.75, 1e-10);
  EXPECT_NEAR(integral_q_product(alpha, std::vector<unsigned>{0, 2}).value, 1.25, 1e-10);
  EXPECT_NEAR(integral_q_product(alpha, std::vector<unsigned>{2, 0}).value, 0.5, 1e-10);
}

TEST(IntegralQProduct, AgreesWithBoost) {
  const std::vector<double> alpha{0.3, 1.7, 12.0};
  const std::vector<std::vector<unsigned>> powers{{2, 0, 0}, {1, 2, 0}, {0, 1, 3}, {3, 3, 3}, {0, 0, 10}};
  boost::math::quadrature::exp_sinh<double> integrator;
  for (const auto& k : powers) {
    auto f = [&](double u) {
      double product = 1.0;
      for (std::size_t j = 0; j < alpha.size(); ++j) {
        product *= std::pow(boost::math::gamma_q(alpha[j], u), static_cast<double>(k[j]));
      }
      return product;
    };
    const double expected = integrator.integrate(f, 1e-13);
    EXPECT_NEAR(integral_q_product(alpha, k).value / expected, 1.0, 1e-9);
  }
}

TEST(IntegralQProduct, TailBoundCoversDiscardedMass) {
  for (double a : {0.5, 3.0, 20.0}) {
    for (double upper : {a, 2.0 * a + 5.0}) {
      // exact tail: a Q(a+1, U) - U Q(a, U)
      const double exact = a * reg_upper_gamma_q(a + 1.0, upper) - upper * reg_upper_gamma_q(a, upper);
      EXPECT_NEAR(detail::single_factor_tail(a, upper), exact, 1e-13 * a);
    }
  }
}

TEST(IntegralQProduct, Errors) {
  const std::vector<double> alpha{1.0, 2.0};
  EXPECT_THROW(integral_q_product(alpha, std::vector<unsigned>{0, 0}), Error);
  EXPECT_THROW(integral_q_product(alpha, std::vector<unsigned>{1}), Error);
  QuadratureConfig bad;
  bad.rel_tol = 1.5;
  EXPECT_THROW(integral_q_product(alpha, std::vector<unsigned>{1, 1}, bad), Error);
  QuadratureConfig tight;
  tight.rel_tol = 1e-15;
  tight.abs_tol = 1e-300;
  tight.max_subdivisions = 1;
  EXPECT_FALSE(integral_q_product(std::vector<double>{0.2}, std::vector<unsigned>{3}, tight).converged);
}

TEST(IntegralQProduct, ProductTailBoundIsValidAndTight) {
  // Q(1,u)^4 = e^{-4u}: exact tail e^{-4U}/4; the bound is e^{-4U}.
  const std::vector<double> alpha{1.0};
  const std::vector<unsigned> k{4};
  for (double upper : {1.0, 4.0, 16.0}) {
    const double bound = detail::q_product_tail(alpha, k, upper);
    EXPECT_GE(bound, std::exp(-4.0 * upper) / 4.0);
    EXPECT_NEAR(bound / std::exp(-4.0 * upper), 1.0, 1e-12);
  }
  // Mixed factors: compare with an independent tail integral.
  const std::vector<double> mixed{0.5, 3.0};
  const std::vector<unsigned> powers{2, 1};
  boost::math::quadrature::exp_sinh<double> integrator;
  for (double upper : {2.0, 8.0}) {
    auto f = [&](double t) {
      const double u = upper + t;
      return std::pow(boost::math::gamma_q(0.5, u), 2.0) * boost::math::gamma_q(3.0, u);
    };
    EXPECT_GE(detail::q_product_tail(mixed, powers, upper), integrator.integrate(f, 1e-12));
  }
}

TEST(IntegralQProduct, ReportedErrorIsSmallForHighPowers) {
  const std::vector<double> alpha{1.0};
  for (unsigned n : {4u, 8u, 16u}) {
    const auto r = integral_q_product(alpha, std::vector<unsigned>{n});
    EXPECT_LT(r.error_estimate, 1e-10 * r.value) << "n = " << n;
  }
}
