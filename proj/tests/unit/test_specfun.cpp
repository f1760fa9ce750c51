#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "mmpe/numerics.hpp"
#include "mmpe/specfun.hpp"

namespace mmpe {
namespace {

TEST(UpperIncompleteGamma, ClosedFormCases) {
  EXPECT_NEAR(upper_incomplete_gamma(1.0, 1.0), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(upper_incomplete_gamma(0.5, 0.0), std::sqrt(std::numbers::pi), 1e-14);
}

TEST(UpperIncompleteGamma, MatchesDirectIntegral) {
  // mpmath quad of t^{1.5} e^{-t} over [3.7, inf)
  const double frozen = 0.255965067453824867;
  EXPECT_NEAR(upper_incomplete_gamma(2.5, 3.7), frozen, 1e-10);
  const double direct =
      num::integrate_value([](double t) { return std::pow(t, 1.5) * std::exp(-t); }, 3.7, 200.0, 1e-14);
  EXPECT_NEAR(upper_incomplete_gamma(2.5, 3.7), direct, 1e-10);
}

TEST(UpperIncompleteGamma, RejectsBadShape) {
  EXPECT_THROW(upper_incomplete_gamma(0.0, 1.0), std::domain_error);
  EXPECT_THROW(upper_incomplete_gamma(-1.0, 1.0), std::domain_error);
  EXPECT_THROW(generalized_q(0.0, 1.0), std::domain_error);
}

TEST(GeneralizedQ, Examples) {
  EXPECT_NEAR(generalized_q(0.5, 1.0), 0.157299207050285131, 1e-12);  // erfc(1)
  EXPECT_DOUBLE_EQ(generalized_q(1.0, 0.0), 1.0);
  EXPECT_NEAR(generalized_q(1.0, 1.0), 0.367879441171442, 1e-12);
}

TEST(GeneralizedQ, HalfShapeIsTwiceGaussianTail) {
  for (double a : {0.0, 0.5, 1.0, 2.0, 4.0})
    EXPECT_NEAR(generalized_q(0.5, a * a), std::erfc(a), 1e-10) << "a=" << a;
  EXPECT_NEAR(2.0 * gaussian_q(std::sqrt(2.0) * 2.0), 0.00467773498104726584, 1e-15);
}

TEST(GeneralizedQ, BoundedAndDecreasing) {
  for (double x : {0.5, 3.0, 40.0}) {
    double prev = 1.0;
    for (double a = 0.1; a < 80.0; a += 0.1) {
      const double v = generalized_q(x, a);
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, prev);
      prev = v;
    }
  }
}

TEST(GeneralizedQ, LogDomainAgreesAndReachesDeepTail) {
  EXPECT_NEAR(log_generalized_q(32.0, 48.0), std::log(0.00592540896910165646), 1e-10);
  const double deep = log_generalized_q(64.0, 2000.0);
  EXPECT_TRUE(std::isfinite(deep));
  EXPECT_LT(deep, -1500.0);
}

TEST(GaussianNormMoment, Examples) {
  EXPECT_NEAR(gaussian_norm_moment(1, 2.0), 1.0, 1e-15);
  EXPECT_NEAR(gaussian_norm_moment(1, 4.0), 3.0, 1e-13);
  EXPECT_NEAR(gaussian_norm_moment(3, 2.0), 1.0, 1e-15);
  EXPECT_NEAR(gaussian_norm_moment(5, 3.0), 2.55323059456916931, 1e-12);
}

TEST(GaussianNormMoment, FourthMomentMatchesMonteCarlo) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> z;
  const int n = 1'000'000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = std::pow(z(rng), 4);
    s += v;
    s2 += v * v;
  }
  const double mean = s / n;
  const double se = std::sqrt((s2 / n - mean * mean) / n);
  EXPECT_NEAR(gaussian_norm_moment(1, 4.0), mean, 4.0 * se);
}

TEST(GaussianNormMoment, UnitSecondMomentForLargeN) {
  for (int n = 1; n <= 512; n += 17) EXPECT_NEAR(gaussian_norm_moment(n, 2.0), 1.0, 1e-12) << n;
  EXPECT_TRUE(std::isfinite(gaussian_norm_moment(512, 8.0)));
}

TEST(UniformBallMoment, Examples) {
  EXPECT_NEAR(uniform_ball_moment(1, 2.0, 1.0), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(uniform_ball_moment(2, 2.0, 1.0), 0.25, 1e-15);
  EXPECT_NEAR(ball_volume(2, 1.0), std::numbers::pi, 1e-14);
  EXPECT_NEAR(ball_volume(5, 2.0), 168.441248445258387, 1e-9);
}

TEST(UniformBallMoment, PolarIntegralOracle) {
  // (1/n) E|V|^p for the disk: (1/2) * int_0^1 rho^2 * 2 rho d rho
  const double polar = 0.5 * num::integrate_value([](double r) { return r * r * 2.0 * r; }, 0.0, 1.0, 1e-14);
  EXPECT_NEAR(uniform_ball_moment(2, 2.0, 1.0), polar, 1e-12);
  const double polar3 =
      num::integrate_value([](double r) { return std::pow(r, 3.5) * 3.0 * r * r / 8.0; }, 0.0, 2.0, 1e-14) / 3.0;
  EXPECT_NEAR(uniform_ball_moment(3, 3.5, 2.0), polar3, 1e-11);
}

TEST(FanoConstant, Examples) {
  EXPECT_NEAR(fano_constant(1, 2.0), 4.13273135412249294, 1e-12);
  EXPECT_NEAR(fano_constant(1, 1.0), 5.43656365691809047, 1e-12);
  EXPECT_NEAR(fano_constant(3, 4.0), 2.16248379006732195, 1e-12);
}

TEST(FanoConstant, QuadraticAsymptote) {
  for (int n : {2, 4, 8}) {
    const double shape = std::sqrt(2.0 * std::numbers::pi * std::numbers::e / n);
    EXPECT_LT(std::abs(fano_constant(n, 2.0) / shape - 1.0), 0.05) << n;
  }
}

TEST(FanoConstant, LogDomainSurvivesLargeN) {
  EXPECT_TRUE(std::isfinite(log_fano_constant(512, 0.5)));
  EXPECT_NEAR(std::exp(log_fano_constant(6, 3.0)), fano_constant(6, 3.0), 1e-12);
}

TEST(MomentOrder, ValidationAndAlpha) {
  EXPECT_NO_THROW((MomentOrder{1.0, 2.0, 4.0}.validate()));
  EXPECT_THROW((MomentOrder{2.0, 1.0, 4.0}.validate()), std::domain_error);
  EXPECT_THROW((MomentOrder{0.0, 1.0, 4.0}.validate()), std::domain_error);
  EXPECT_NEAR((MomentOrder{2.0, 4.0, 8.0}.alpha()), (0.25 - 0.125) / (0.5 - 0.125), 1e-15);
  EXPECT_DOUBLE_EQ((MomentOrder{3.0, 3.0, 3.0}.alpha()), 1.0);
}

}  // namespace
}  // namespace mmpe
