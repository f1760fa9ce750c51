#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mmpe/infometrics.hpp"
#include "mmpe/specfun.hpp"

namespace mmpe {
namespace {

constexpr double kTwoPiE = 2.0 * std::numbers::pi * std::numbers::e;

DiscreteAtoms bpsk() { return make_scalar_atoms({-1.0, 1.0}, {0.5, 0.5}); }

TEST(MutualInformation, Limits) {
  EXPECT_NEAR(mutual_information_scalar(bpsk(), 0.0), 0.0, 1e-12);
  EXPECT_NEAR(mutual_information_scalar(bpsk(), 400.0), 1.0, 1e-4);
  for (double snr : {0.5, 3.0})
    EXPECT_NEAR(mutual_information_scalar(make_gaussian(1.0), snr), 0.5 * std::log2(1.0 + snr), 1e-8);
}

TEST(MutualInformation, BpskOracle) {
  // mpmath: h(Y) - h(Z) for the equiprobable binary input
  EXPECT_NEAR(mutual_information_scalar(bpsk(), 1.0), 0.485944154132935320, 1e-8);
}

TEST(MutualInformation, PamAgainstMonteCarlo) {
  // numpy, seed 12345, 1e6 samples of log2 p(y|x)/p(y): 0.494837, stderr 2.91e-4
  const double s = 1.0 / std::sqrt(5.0);
  const auto d = make_scalar_atoms({-3.0 * s, -s, s, 3.0 * s}, {0.25, 0.25, 0.25, 0.25});
  EXPECT_NEAR(mutual_information_scalar(d, 1.0), 0.49483739454622366, 4.0 * 2.9128150965294095e-4);
}

TEST(Entropies, Gaussian) {
  const auto g = make_gaussian(1.0);
  EXPECT_NEAR(input_entropy_bits(g), 0.5 * std::log2(kTwoPiE), 1e-12);
  EXPECT_NEAR(output_entropy_bits(g, 3.0), 0.5 * std::log2(kTwoPiE * 4.0), 1e-8);
  EXPECT_NEAR(conditional_entropy_bits(g, 1.0), 0.5 * std::log2(kTwoPiE * 0.5), 1e-8);
  EXPECT_NEAR(input_entropy_bits(make_uniform_ball(1, 1.0)), 1.0, 1e-12);
  EXPECT_THROW(input_entropy_bits(bpsk()), std::invalid_argument);
}

TEST(EntropyBound, Examples) {
  for (double m : {0.1, 0.5, 2.0})
    EXPECT_NEAR(entropy_bound_from_mmpe(1, 2.0, m), 0.5 * std::log2(kTwoPiE * m), 1e-12);
  EXPECT_NEAR(trivial_entropy_bound_from_mmpe(1, 2.0, 0.5), 0.5 * std::log2(kTwoPiE * 0.5), 1e-12);
  EXPECT_NEAR(entropy_bound(make_gaussian(1.0), 1.0, 2.0), 0.5 * std::log2(kTwoPiE * 0.5), 1e-9);
  const auto g = make_gaussian(1.0);
  for (double p : {1.0, 3.0, 4.0}) EXPECT_GE(entropy_bound(g, 1.0, p), conditional_entropy_bits(g, 1.0) - 1e-9);
  EXPECT_LE(entropy_bound(g, 1.0, 4.0), trivial_entropy_bound_from_mmpe(1, 4.0, mmpe(g, 1.0, 4.0).value) + 1e-12);
  EXPECT_THROW(trivial_entropy_bound_from_mmpe(1, 1.0, 0.5), std::domain_error);
  EXPECT_THROW(entropy_bound(bpsk(), 1.0, 2.0), std::invalid_argument);
}

TEST(Gaps, ShapingConstant) {
  EXPECT_NEAR(shaping_loss_bits(), 0.25461433482006296, 1e-15);
  EXPECT_NEAR(shaping_loss_bits(), 0.5 * std::log2(std::numbers::pi * std::numbers::e / 6.0), 1e-15);
}

TEST(Gaps, OriginalSandwich) {
  const auto pam = make_uniform_pam(5);
  for (auto v : {OriginalGapVariant::lmmse, OriginalGapVariant::mmse}) {
    const auto g = ow_gap_original(pam, 24.0, v);
    ASSERT_TRUE(g.exact_MI.has_value());
    EXPECT_LE(g.lower, *g.exact_MI + 1e-9);
    EXPECT_LE(*g.exact_MI, g.H + 1e-12);
    EXPECT_NEAR(g.H, std::log2(5.0), 1e-12);
    EXPECT_NEAR(g.lower, g.H - g.gap, 1e-12);
  }
  EXPECT_THROW(ow_gap_original(make_pm_one_vector(2), 1.0), std::invalid_argument);
}

TEST(Gaps, GeneralizedSandwich) {
  const auto pam = make_uniform_pam(5);
  for (double p : {2.0, 4.0, 6.0}) {
    const auto g = ow_gap_generalized(pam, 24.0, p);
    ASSERT_TRUE(g.exact_MI.has_value());
    EXPECT_LE(g.H - g.gap, *g.exact_MI + 1e-9) << p;
    EXPECT_GE(g.gap, 0.0);
  }
}

TEST(Gaps, HighSnrTendsToShaping) {
  const auto g = ow_gap_generalized(bpsk(), 200.0, 2.0);
  EXPECT_LT(std::abs(g.gap - shaping_loss_bits()), 0.05);
  EXPECT_GE(g.gap, shaping_loss_bits() - 1e-9);
}

TEST(Gaps, DitherOverlapRejected) {
  GapOptions opt;
  opt.dither = make_uniform_ball(1, 1.5);
  EXPECT_THROW(ow_gap_generalized(make_uniform_pam(4), 1.0, 2.0, opt), std::invalid_argument);
  opt.dither = make_uniform_ball(2, 0.5);
  EXPECT_THROW(ow_gap_generalized(make_uniform_pam(4), 1.0, 2.0, opt), std::invalid_argument);
}

TEST(Gaps, G2BallDecay) {
  double prev = INFINITY;
  for (int n : {1, 4, 16, 64}) {
    const double g2 = g2_ball_bits(n, 2.0);
    EXPECT_GT(g2, 0.0);
    EXPECT_LT(g2, prev);
    prev = g2;
  }
  EXPECT_NEAR(g2_ball_bits(1, 2.0), shaping_loss_bits(), 1e-12);
}

TEST(Gaps, G1AsymptoticBound) {
  McSettings mc;
  mc.samples = 40'000;
  for (int n : {8, 32}) {
    const auto v = make_pm_one_vector(n);
    const auto st = distance_stats(v);
    EXPECT_LE(g1_ratio(v, 2.0, 2.0, 0.5 * st.d_min, mc), g1_asymptotic_bound(st, 2.0, 2.0, n));
  }
  const auto st = distance_stats(bpsk());
  EXPECT_NEAR(g1_asymptotic_bound(st, 1e6, 2.0, 1), 1.0, 1e-9);
}

TEST(Gaps, CsvRow) {
  const auto g = ow_gap_original(bpsk(), 1.0);
  EXPECT_EQ(gap_csv_row(g).size(), gap_csv_header().size());
}

}  // namespace
}  // namespace mmpe
