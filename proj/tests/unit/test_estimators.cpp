#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "mmpe/estimators.hpp"

namespace mmpe {
namespace {

DiscreteAtoms bpsk() { return make_scalar_atoms({-1.0, 1.0}, {0.5, 0.5}); }

// Brute-force argmin of sum_i w_i |x_i - v|^p: dense grid, then repeated zoom.
double grid_argmin(const std::vector<double>& x, const std::vector<double>& w, double p, double lo, double hi) {
  auto obj = [&](double v) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(std::abs(x[i] - v), p);
    return s;
  };
  double best = lo;
  for (int round = 0; round < 12; ++round) {
    const int m = 2001;
    double bv = obj(lo);
    best = lo;
    for (int i = 1; i < m; ++i) {
      const double v = lo + (hi - lo) * i / (m - 1);
      if (obj(v) < bv) {
        bv = obj(v);
        best = v;
      }
    }
    const double h = 4.0 * (hi - lo) / (m - 1);
    lo = best - h;
    hi = best + h;
  }
  return best;
}

TEST(GaussianEstimator, Examples) {
  EXPECT_DOUBLE_EQ(gaussian_estimator(0.0, 3.7), 0.0);
  EXPECT_NEAR(gaussian_estimator(1.0, 2.0), 1.0, 1e-15);
  const double y[] = {2.0, -2.0};
  const auto v = gaussian_estimator(3.0, y);
  EXPECT_NEAR(v[0], std::sqrt(3.0) / 2.0, 1e-15);
  EXPECT_NEAR(v[1], -std::sqrt(3.0) / 2.0, 1e-15);
}

TEST(TwoPointEstimator, BpskIsTanh) {
  EXPECT_NEAR(two_point_estimator(1.0, -1.0, 0.5, 1.0, 2.0, 0.0), 0.0, 1e-15);
  EXPECT_NEAR(two_point_estimator(1.0, -1.0, 0.5, 4.0, 3.0, 1.0), 0.761594155955765, 1e-12);
  for (double p : {1.5, 2.0, 3.0})
    for (double y : {-2.0, -0.3, 0.4, 3.0})
      EXPECT_NEAR(two_point_estimator(1.0, -1.0, 0.5, 1.0, p, y), std::tanh(y / (p - 1.0)), 1e-12);
}

TEST(TwoPointEstimator, StaysInHullAtExtremes) {
  for (double y : {-1e3, -40.0, 40.0, 1e3}) {
    const double v = two_point_estimator(-3.0, 1.0, 0.01, 100.0, 1.5, y);
    EXPECT_GE(v, -3.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(TwoPointEstimator, AsymmetricPairMatchesGridOracle) {
  const auto post = posterior_scalar(make_scalar_atoms({-3.0, 1.0}, {0.01, 0.99}), 1.0, 0.0);
  const double oracle = grid_argmin(post.x, post.w, 2.0, -3.0, 1.0);
  EXPECT_NEAR(two_point_estimator(-3.0, 1.0, 0.01, 1.0, 2.0, 0.0), oracle, 1e-6);
  for (double p : {1.5, 4.0}) {
    const double o = grid_argmin(post.x, post.w, p, -3.0, 1.0);
    EXPECT_NEAR(two_point_estimator(-3.0, 1.0, 0.01, 1.0, p, 0.0), o, 1e-6) << p;
  }
}

TEST(TwoPointEstimator, RoutingBelowPEqualsTwo) {
  EXPECT_DOUBLE_EQ(two_point_estimator(-1.0, 1.0, 0.5, 1.0, 1.0, 0.3), hard_decision_estimator(-1.0, 1.0, 0.5, 1.0, 0.3));
  EXPECT_THROW(two_point_estimator(-1.0, 1.0, 0.5, 1.0, 0.5, 0.3), std::domain_error);
}

TEST(HardDecision, Examples) {
  EXPECT_DOUBLE_EQ(hard_decision_estimator(1.0, -1.0, 0.5, 1.0, 0.3), 1.0);
  // a = 1 exactly at y = 0: the a >= 1 branch returns x1
  EXPECT_DOUBLE_EQ(hard_decision_estimator(1.0, -1.0, 0.5, 1.0, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(hard_decision_estimator(-1.0, 1.0, 0.5, 1.0, 0.0), -1.0);
  EXPECT_DOUBLE_EQ(hard_decision_estimator(-3.0, 1.0, 0.01, 1.0, 0.0), 1.0);
}

TEST(NumericPointwise, GaussianClosedForm) {
  const InputDistribution g = make_gaussian(1.0);
  for (double snr : {0.5, 2.0})
    for (double p : {1.0, 1.5, 3.0})
      for (double y : {-2.0, 0.3, 1.7})
        EXPECT_NEAR(numeric_pointwise_estimator(g, snr, p, y).value, std::sqrt(snr) * y / (1.0 + snr), 1e-8);
}

TEST(NumericPointwise, BpskExamples) {
  EXPECT_NEAR(numeric_pointwise_estimator(bpsk(), 1.0, 2.0, 0.5).value, std::tanh(0.5), 1e-8);
  EXPECT_DOUBLE_EQ(numeric_pointwise_estimator(bpsk(), 1.0, 1.0, 0.3).value, 1.0);
  for (double p : {1.5, 2.0, 3.0})
    for (double snr : {0.5, 1.0, 4.0})
      for (double y = -5.0; y <= 5.0; y += 0.1)
        ASSERT_NEAR(numeric_pointwise_estimator(bpsk(), snr, p, y).value, std::tanh(y * std::sqrt(snr) / (p - 1.0)),
                    1e-6);
}

TEST(NumericPointwise, SubunitOrderPicksAnAtom) {
  const auto pam = make_uniform_pam(4);
  const auto post = posterior_scalar(pam, 1.0, 0.4);
  const auto r = minimize_posterior(post, 0.5);
  const double oracle = grid_argmin(post.x, post.w, 0.5, -3.0, 3.0);
  EXPECT_NEAR(r.value, oracle, 1e-6);
}

TEST(NumericPointwise, UniformPriorMatchesGridOracle) {
  const InputDistribution u = make_uniform_ball(1, 1.0);
  const auto post = posterior_scalar(u, 2.0, 1.1);
  std::vector<double> xs, ws;
  for (int i = 0; i <= 4000; ++i) {
    const double x = -1.0 + 2.0 * i / 4000.0;
    xs.push_back(x);
    ws.push_back(post.density(x) * ((i == 0 || i == 4000) ? 0.5 : 1.0));
  }
  for (double p : {1.5, 3.0})
    EXPECT_NEAR(numeric_pointwise_estimator(u, 2.0, p, 1.1).value, grid_argmin(xs, ws, p, -1.0, 1.0), 2e-5) << p;
}

TEST(AffineEquivariance, TwoPointTransform) {
  const auto x = make_scalar_atoms({-1.0, 1.0}, {0.3, 0.7});
  for (double p : {1.5, 3.0})
    for (double y = -3.0; y <= 3.0; y += 0.5) {
      auto post = posterior_scalar(x, 1.0, y);
      const double base = minimize_posterior(post, p).value;
      for (double& v : post.x) v = 2.0 * v + 1.0;
      post.lo = -1.0;
      post.hi = 3.0;
      EXPECT_NEAR(minimize_posterior(post, p).value, 2.0 * base + 1.0, 1e-6);
    }
}

TEST(VectorEstimator, SingleAtomAndMean) {
  const auto v = make_pm_one_vector(2);
  const double far[] = {30.0, 30.0};
  const auto e = numeric_vector_estimator(v, 100.0, 3.0, far);
  EXPECT_NEAR(e[0], 1.0, 1e-9);
  EXPECT_NEAR(e[1], 1.0, 1e-9);

  const auto pam2 = make_atoms({{0.0, 0.0}, {1.0, 0.0}, {0.0, 2.0}}, {0.2, 0.3, 0.5});
  const double y[] = {0.3, 0.8};
  const auto w = posterior_weights(pam2, 1.0, y);
  const auto m = numeric_vector_estimator(pam2, 1.0, 2.0, y);
  EXPECT_NEAR(m[0], w[1], 1e-6);
  EXPECT_NEAR(m[1], 2.0 * w[2], 1e-6);
}

TEST(VectorEstimator, PmOneMatchesGridOracle) {
  const auto v = make_pm_one_vector(2);
  const double y[] = {0.1, 0.1};
  const auto w = posterior_weights(v, 1.0, y);
  auto obj = [&](double a, double b) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double dx = v.atom(i)[0] - a, dy = v.atom(i)[1] - b;
      s += w[i] * std::pow(dx * dx + dy * dy, 2.0);
    }
    return s;
  };
  double lo_a = -1.0, hi_a = 1.0, lo_b = -1.0, hi_b = 1.0, ba = 0.0, bb = 0.0;
  for (int round = 0; round < 10; ++round) {
    double best = INFINITY;
    for (int i = 0; i <= 40; ++i)
      for (int j = 0; j <= 40; ++j) {
        const double a = lo_a + (hi_a - lo_a) * i / 40.0, b = lo_b + (hi_b - lo_b) * j / 40.0;
        if (obj(a, b) < best) {
          best = obj(a, b);
          ba = a;
          bb = b;
        }
      }
    const double ha = 2.0 * (hi_a - lo_a) / 40.0, hb = 2.0 * (hi_b - lo_b) / 40.0;
    lo_a = ba - ha, hi_a = ba + ha, lo_b = bb - hb, hi_b = bb + hb;
  }
  const auto e = numeric_vector_estimator(v, 1.0, 4.0, y);
  EXPECT_NEAR(e[0], ba, 1e-4);
  EXPECT_NEAR(e[1], bb, 1e-4);
}

TEST(VectorEstimator, MultiAtomNelderMead) {
  const auto d = make_atoms({{-1.0, -1.0}, {-1.0, 1.0}, {1.0, -1.0}, {1.0, 1.0}}, {0.1, 0.2, 0.3, 0.4});
  const double y[] = {0.2, -0.5};
  const auto w = posterior_weights(d, 1.0, y);
  const auto e = numeric_vector_estimator(d, 1.0, 3.0, y);
  auto obj = [&](double a, double b) {
    double s = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double dx = d.atom(i)[0] - a, dy = d.atom(i)[1] - b;
      s += w[i] * std::pow(dx * dx + dy * dy, 1.5);
    }
    return s;
  };
  const double f = obj(e[0], e[1]);
  for (double da : {-1e-3, 0.0, 1e-3})
    for (double db : {-1e-3, 0.0, 1e-3}) EXPECT_LE(f, obj(e[0] + da, e[1] + db) + 1e-12);
}

TEST(VectorEstimator, DimensionCap) {
  const auto d = make_atoms({std::vector<double>(9, 0.0), std::vector<double>(9, 1.0), std::vector<double>(9, 2.0)},
                            {0.3, 0.3, 0.4});
  const std::vector<double> y(9, 0.5);
  EXPECT_THROW(numeric_vector_estimator(d, 1.0, 3.0, y), std::invalid_argument);
}

TEST(EstimatorSpec, Evaluate) {
  EXPECT_DOUBLE_EQ(evaluate(linear_estimator(0.5, 1.0), 2.0), 2.0);
  EXPECT_DOUBLE_EQ(evaluate(zero_estimator(), 7.0), 0.0);
  EXPECT_NEAR(evaluate(conditional_mean_estimator(bpsk(), 1.0), 0.5), std::tanh(0.5), 1e-12);
  EstimatorSpec scaled = optimal_estimator(bpsk(), 1.0, 3.0);
  scaled.input_scale = 2.0;
  EXPECT_NEAR(evaluate(scaled, 0.5), std::tanh(1.0 / 2.0), 1e-8);
}

}  // namespace
}  // namespace mmpe
