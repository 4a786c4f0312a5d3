#include <gtest/gtest.h>

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <random>

#include "ineqbias/mixture.hpp"
#include "test_helpers.hpp"

using namespace ineqbias;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an ineqbias::Error";
  return ErrorCode::domain_error;
}

}  // namespace

TEST(Canonicalize, SortsByShape) {
  const auto p = canonicalize({0.5, 0.5}, {3.0, 1.0}, 1.0);
  EXPECT_EQ(p.alpha(), (std::vector<double>{1.0, 3.0}));
  EXPECT_EQ(p.pi(), (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(p.lambda(), 1.0);
}

TEST(Canonicalize, KeepsProportionsAttachedToTheirShapes) {
  const auto p = canonicalize({0.2, 0.3, 0.5}, {5.0, 0.5, 2.0}, 1.0);
  EXPECT_EQ(p.alpha(), (std::vector<double>{0.5, 2.0, 5.0}));
  EXPECT_EQ(p.pi(), (std::vector<double>{0.3, 0.5, 0.2}));
}

TEST(Canonicalize, MergesEqualShapes) {
  const auto p = canonicalize({0.3, 0.7}, {2.0, 2.0}, 1.0);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p.alpha()[0], 2.0);
  EXPECT_DOUBLE_EQ(p.pi()[0], 1.0);
}

TEST(Canonicalize, RenormalizesSmallRoundOff) {
  const auto p = canonicalize({0.1, 0.2, 0.7 + 5e-10}, {1.0, 2.0, 3.0}, 1.0);
  double total = 0.0;
  for (double x : p.pi()) total += x;
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Canonicalize, RejectsInvalidInput) {
  EXPECT_EQ(code_of([] { canonicalize({0.2, 0.9}, {1.0, 2.0}, 1.0); }), ErrorCode::invalid_mixing_proportions);
  EXPECT_EQ(code_of([] { canonicalize({0.5, 0.5 + 2e-9}, {1.0, 2.0}, 1.0); }),
            ErrorCode::invalid_mixing_proportions);
  EXPECT_EQ(code_of([] { canonicalize({1.5, -0.5}, {1.0, 2.0}, 1.0); }), ErrorCode::invalid_mixing_proportions);
  EXPECT_EQ(code_of([] { canonicalize({0.5, 0.5}, {1.0, 0.0}, 1.0); }), ErrorCode::invalid_shape);
  EXPECT_EQ(code_of([] { canonicalize({1.0}, {1.0}, 0.0); }), ErrorCode::invalid_rate);
  EXPECT_EQ(code_of([] { canonicalize({1.0}, {1.0}, -2.0); }), ErrorCode::invalid_rate);
  EXPECT_EQ(code_of([] { canonicalize({0.5, 0.5}, {1.0}, 1.0); }), ErrorCode::length_mismatch);
  EXPECT_EQ(code_of([] { canonicalize({}, {}, 1.0); }), ErrorCode::empty_parameters);
}

TEST(Canonicalize, NeverChangesTheDensity) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  std::uniform_real_distribution<double> shape(0.2, 8.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = 2 + trial % 4;
    std::vector<double> pi(m);
    std::vector<double> alpha(m);
    double total = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      pi[j] = unit(rng);
      total += pi[j];
      alpha[j] = shape(rng);
    }
    for (double& p : pi) p /= total;
    if (trial % 3 == 0) alpha[m - 1] = alpha[0];  // force a merge
    const auto canonical = canonicalize(pi, alpha, 1.3);
    for (int i = 1; i <= 50; ++i) {
      const double x = 0.2 * i;
      double raw = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        raw += pi[j] * std::exp(alpha[j] * std::log(1.3) + (alpha[j] - 1) * std::log(x) - 1.3 * x -
                                std::lgamma(alpha[j]));
      }
      EXPECT_NEAR(pdf(canonical, x), raw, 1e-12) << "trial " << trial << ", x = " << x;
    }
  }
}

TEST(Pdf, GoldenValues) {
  EXPECT_NEAR(pdf(canonicalize({1.0}, {1.0}, 1.0), 0.5), std::exp(-0.5), 1e-15);
  EXPECT_NEAR(pdf(canonicalize({1.0}, {1.0}, 1.0), 0.5), 0.6065306597, 1e-10);
  const auto two = canonicalize({0.5, 0.5}, {1.0, 3.0}, 1.0);
  EXPECT_NEAR(pdf(two, 1.0), 0.5 * std::exp(-1.0) + 0.25 * std::exp(-1.0), 1e-15);
  EXPECT_THROW(pdf(two, 0.0), Error);
  EXPECT_THROW(pdf(two, -1.0), Error);
}

TEST(Pdf, IntegratesToOne) {
  boost::math::quadrature::exp_sinh<double> integrator;
  for (const auto& params : test::standard_models()) {
    const double total = integrator.integrate([&](double x) { return x > 0.0 ? pdf(params, x) : 0.0; });
    EXPECT_NEAR(total, 1.0, 1e-8);
  }
}

TEST(Cdf, GoldenValues) {
  const auto expo = canonicalize({1.0}, {1.0}, 1.0);
  EXPECT_NEAR(cdf(expo, std::log(2.0)), 0.5, 1e-15);
  EXPECT_EQ(cdf(expo, 0.0), 0.0);
  const auto two = canonicalize({0.5, 0.5}, {1.0, 3.0}, 1.0);
  const double expected = 1.0 - 0.5 * std::exp(-10.0) - 0.5 * std::exp(-10.0) * (1.0 + 10.0 + 50.0);
  EXPECT_NEAR(cdf(two, 10.0), expected, 1e-14);
  EXPECT_GE(cdf(two, 10.0), 0.997);
  EXPECT_THROW(cdf(two, -0.1), Error);
}

TEST(Cdf, IsTheIntegralOfThePdf) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  for (const auto& params : test::standard_models()) {
    const double scale = mean(params);
    double previous = 0.0;
    for (int i = 1; i <= 20; ++i) {
      const double x = scale * 0.25 * i;
      const double integral = integrator.integrate([&](double t) { return t > 0.0 ? pdf(params, t) : 0.0; }, 0.0, x);
      const double c = cdf(params, x);
      EXPECT_NEAR(c, integral, 1e-8) << "x = " << x;
      EXPECT_GE(c, previous);
      previous = c;
    }
  }
}

TEST(Moment, GoldenValues) {
  EXPECT_NEAR(moment(canonicalize({1.0}, {2.0}, 1.0), 1.0), 2.0, 1e-14);
  const auto two = canonicalize({0.5, 0.5}, {1.0, 3.0}, 1.0);
  EXPECT_NEAR(moment(two, 2.0), 7.0, 1e-13);
  EXPECT_EQ(moment(two, 0.0), 1.0);
  EXPECT_NEAR(moment(two, 1.0), mean(two), 1e-14);
  EXPECT_THROW(moment(two, -1.0), Error);
  EXPECT_NO_THROW(moment(two, -0.999));
}

TEST(Moment, MatchesMonteCarlo) {
  for (const auto& params : test::standard_models()) {
    Rng rng(2024, 7);
    test::RunningStats s1, s2, s3;
    for (int i = 0; i < 1000000; ++i) {
      const double x = draw(params, rng);
      s1.add(x);
      s2.add(x * x);
      s3.add(x * x * x);
    }
    EXPECT_LE(std::abs(s1.mean - moment(params, 1.0)), 4.0 * s1.standard_error());
    EXPECT_LE(std::abs(s2.mean - moment(params, 2.0)), 4.0 * s2.standard_error());
    EXPECT_LE(std::abs(s3.mean - moment(params, 3.0)), 4.0 * s3.standard_error());
  }
}

TEST(MeanVariance, GoldenValues) {
  const auto single = canonicalize({1.0}, {3.0}, 2.0);
  EXPECT_DOUBLE_EQ(mean(single), 1.5);
  EXPECT_DOUBLE_EQ(variance(single), 0.75);
  const auto two = canonicalize({0.5, 0.5}, {1.0, 3.0}, 1.0);
  EXPECT_DOUBLE_EQ(mean(two), 2.0);
  EXPECT_DOUBLE_EQ(variance(two), 3.0);
  for (const auto& params : test::standard_models()) {
    const double mu = mean(params);
    EXPECT_NEAR(variance(params), moment(params, 2.0) - mu * mu, 1e-12 * moment(params, 2.0));
    EXPECT_GT(variance(params), 0.0);
  }
}

TEST(Sampling, IsDeterministicForASeed) {
  const auto params = canonicalize({0.3, 0.7}, {0.5, 2.0}, 1.0);
  EXPECT_EQ(sample(params, 1000, 0), sample(params, 1000, 0));
  EXPECT_EQ(sample(params, 1000, 99), sample(params, 1000, 99));
  EXPECT_NE(sample(params, 1000, 1), sample(params, 1000, 2));
}

TEST(Sampling, SingleGammaMeanWithinClt) {
  const auto params = canonicalize({1.0}, {5.0}, 1.0);
  const auto s = sample(params, 1000000, 17);
  double total = 0.0;
  for (double x : s.values()) total += x;
  EXPECT_LE(std::abs(total / 1e6 - 5.0), 4.0 * std::sqrt(5.0 / 1e6));
}

TEST(Sampling, KolmogorovSmirnovAgainstCdf) {
  for (const auto& params : test::standard_models()) {
    const auto s = sample(params, 100000, 31);
    std::vector<double> sorted(s.values().begin(), s.values().end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double statistic = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      const double f = cdf(params, sorted[i]);
      statistic = std::max({statistic, (i + 1) / n - f, f - i / n});
    }
    EXPECT_LT(statistic, 1.95 / std::sqrt(n));
  }
}

TEST(Sampling, RejectsEmptySample) {
  EXPECT_EQ(code_of([] { sample(canonicalize({1.0}, {1.0}, 1.0), 0, 1); }), ErrorCode::invalid_sample_size);
}

TEST(SampleType, ValidatesObservations) {
  EXPECT_THROW(Sample({}), Error);
  EXPECT_THROW(Sample({1.0, 0.0}), Error);
  EXPECT_THROW(Sample({1.0, -2.0}), Error);
  EXPECT_NO_THROW(Sample({1.0}));
}
