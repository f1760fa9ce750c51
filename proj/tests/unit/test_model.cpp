#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "mmpe/model.hpp"
#include "mmpe/numerics.hpp"
#include "mmpe/specfun.hpp"

namespace mmpe {
namespace {

DiscreteAtoms bpsk() { return make_scalar_atoms({-1.0, 1.0}, {0.5, 0.5}); }

TEST(BuildDistribution, Validation) {
  EXPECT_NO_THROW(bpsk());
  EXPECT_THROW(make_scalar_atoms({1.0, 1.0}, {0.7, 0.3}), std::invalid_argument);
  EXPECT_THROW(make_scalar_atoms({-1.0, 1.0}, {0.5, 0.6}), std::invalid_argument);
  EXPECT_THROW(make_scalar_atoms({-1.0, 1.0}, {1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(make_gaussian(0.0), std::invalid_argument);
  EXPECT_THROW(make_gaussian(-1.0), std::invalid_argument);
  const DiscreteAtoms asym = make_scalar_atoms({-3.0, 1.0}, {0.01, 0.99});
  EXPECT_EQ(asym.size(), 2u);
  EXPECT_NEAR(scalar_mean(asym), -0.03 + 0.99, 1e-15);
}

TEST(BuildDistribution, TabulatedNeedsGridFloor) {
  std::vector<double> g(10), f(10, 1.0);
  for (int i = 0; i < 10; ++i) g[i] = i;
  EXPECT_THROW(make_tabulated(g, f), std::invalid_argument);
  const TabulatedPdf t = tabulate_uniform_interval(-1.0, 1.0, 65);
  double mass = 0.0;
  for (double w : t.weights) mass += w;
  EXPECT_NEAR(mass, 1.0, 1e-12);
}

TEST(BuildDistribution, KeyValueAndJsonSpecs) {
  const auto kv = parse_distribution_text("# bpsk\nkind = atoms\natoms = -1; 1\nprobs = 0.5, 0.5\n");
  const auto d = std::get<DiscreteAtoms>(build_distribution(kv));
  EXPECT_EQ(d.size(), 2u);
  EXPECT_DOUBLE_EQ(d.points[0], -1.0);

  const auto js = parse_distribution_text(R"({"kind":"atoms","atoms":[[1,0],[0,1]],"probs":[0.25,0.75]})");
  const auto v = std::get<DiscreteAtoms>(build_distribution(js));
  EXPECT_EQ(v.n, 2);
  EXPECT_DOUBLE_EQ(v.probs[1], 0.75);

  const auto g = std::get<Gaussian>(build_distribution(parse_distribution_text("kind=gaussian\nsigma2=4\nn=3")));
  EXPECT_EQ(g.n, 3);
  EXPECT_DOUBLE_EQ(g.sigma2, 4.0);

  EXPECT_THROW(parse_distribution_text("kind=atoms\nbogus=1"), std::invalid_argument);
  EXPECT_THROW(build_distribution(parse_distribution_text("kind=atoms\natoms=1;1\nprobs=0.7,0.3")),
               std::invalid_argument);
  EXPECT_THROW(build_distribution(parse_distribution_text("kind=martian")), std::invalid_argument);
}

TEST(BuildDistribution, LoadsFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "mmpe_model_test.json";
  {
    std::ofstream f(path);
    f << R"({"kind":"pam","points":4,"spacing":2})";
  }
  const auto d = std::get<DiscreteAtoms>(build_distribution(load_distribution_file(path.string())));
  EXPECT_EQ(d.size(), 4u);
  EXPECT_DOUBLE_EQ(d.points[0], -3.0);
  std::filesystem::remove(path);
  EXPECT_THROW(load_distribution_file("/nonexistent/x.json"), std::invalid_argument);
}

TEST(SampleChannel, PureNoiseAtZeroSnr) {
  const auto s = sample_channel(bpsk(), {1, 0.0}, 200'000, 99);
  double m = 0.0, m2 = 0.0;
  for (double y : s.y) {
    m += y * y;
    m2 += y * y * y * y;
  }
  m /= s.y.size();
  m2 /= s.y.size();
  const double se = std::sqrt((m2 - m * m) / s.y.size());
  EXPECT_NEAR(m, 1.0, 3.0 * se);
}

TEST(SampleChannel, Deterministic) {
  const auto a = sample_channel(make_gaussian(1.0, 3), {3, 2.0}, 1000, 5);
  const auto b = sample_channel(make_gaussian(1.0, 3), {3, 2.0}, 1000, 5);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.y, b.y);
  const auto c = sample_channel(make_gaussian(1.0, 3), {3, 2.0}, 1000, 6);
  EXPECT_NE(a.y, c.y);
}

TEST(SampleChannel, CrossMomentBpsk) {
  const auto s = sample_channel(bpsk(), {1, 4.0}, 1'000'000, 1234);
  double m = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < s.count(); ++i) {
    const double v = s.x[i] * s.y[i];
    m += v;
    m2 += v * v;
  }
  m /= s.count();
  m2 /= s.count();
  EXPECT_NEAR(m, 2.0, 3.0 * std::sqrt((m2 - m * m) / s.count()));
}

TEST(SampleChannel, RejectsMismatch) {
  EXPECT_THROW(sample_channel(bpsk(), {2, 1.0}, 10, 1), std::invalid_argument);
  EXPECT_THROW(sample_channel(bpsk(), {1, -1.0}, 10, 1), std::invalid_argument);
}

TEST(Posterior, GaussianClosedForm) {
  const auto post = posterior_scalar(make_gaussian(1.0), 1.0, 2.0);
  EXPECT_NEAR(post.mean, 1.0, 1e-14);
  EXPECT_NEAR(post.var, 0.5, 1e-14);
}

TEST(Posterior, BpskExamples) {
  const auto sym = posterior_scalar(bpsk(), 1.0, 0.0);
  EXPECT_NEAR(sym.w[0], 0.5, 1e-15);
  EXPECT_NEAR(sym.w[1], 0.5, 1e-15);
  const auto p = posterior_scalar(bpsk(), 4.0, 1.0);
  EXPECT_NEAR(p.w[1], 1.0 / (1.0 + std::exp(-4.0)), 1e-12);
  EXPECT_NEAR(p.w[1], 0.98201379, 1e-8);
}

TEST(Posterior, NormalizedAndStableAtHighSnr) {
  for (double snr : {0.0, 1.0, 1e4})
    for (double y : {-50.0, -1.0, 0.0, 3.0, 50.0}) {
      const auto post = posterior_scalar(make_uniform_pam(8), snr, y);
      double s = 0.0;
      for (double w : post.w) {
        ASSERT_TRUE(std::isfinite(w));
        s += w;
      }
      EXPECT_NEAR(s, 1.0, 1e-12);
    }
}

TEST(Posterior, PriorAtZeroSnr) {
  const auto asym = make_scalar_atoms({-3.0, 1.0}, {0.01, 0.99});
  const auto post = posterior_scalar(asym, 0.0, 5.0);
  EXPECT_NEAR(post.w[0], 0.01, 1e-15);
  EXPECT_NEAR(post.w[1], 0.99, 1e-15);
}

TEST(Posterior, UniformIsTruncatedGaussian) {
  const InputDistribution u = make_uniform_ball(1, 1.0);
  const auto post = posterior_scalar(u, 2.0, 0.7);
  const double c = 0.7 / std::sqrt(2.0);
  auto k = [&](double x) { return std::exp(-2.0 * (x - c) * (x - c) / 2.0); };
  const double z = num::integrate_value(k, -1.0, 1.0, 1e-14);
  const double m = num::integrate_value([&](double x) { return x * k(x); }, -1.0, 1.0, 1e-14) / z;
  EXPECT_NEAR(post.mean, m, 1e-10);
  EXPECT_NEAR(post.density(0.3), k(0.3) / z, 1e-10);
}

TEST(Posterior, VectorWeights) {
  const DiscreteAtoms v = make_pm_one_vector(3);
  const double y[] = {0.2, -0.1, 0.4};
  const auto w = posterior_weights(v, 2.0, y);
  std::vector<double> logit(v.size());
  double norm = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (int k = 0; k < 3; ++k) logit[i] += std::sqrt(2.0) * y[k] * v.atom(i)[k];
    norm += std::exp(logit[i]);
  }
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(w[i], std::exp(logit[i]) / norm, 1e-14);
}

TEST(OutputDensity, IntegratesToOne) {
  for (const InputDistribution& d : {InputDistribution(bpsk()), InputDistribution(make_gaussian(2.0)),
                                     InputDistribution(make_uniform_ball(1, 1.0))}) {
    const auto r = output_range(d, 3.0);
    EXPECT_NEAR(num::integrate_value([&](double y) { return output_density(d, 3.0, y); }, r.lo, r.hi, 1e-13, r.breaks),
                1.0, 1e-9);
  }
}

TEST(DistanceStats, Examples) {
  const auto b = distance_stats(bpsk());
  EXPECT_DOUBLE_EQ(b.d_min, 2.0);
  EXPECT_DOUBLE_EQ(b.d_max, 2.0);
  const auto v = distance_stats(make_pm_one_vector(16));
  EXPECT_NEAR(v.d_min, std::sqrt(64.0), 1e-14);
  EXPECT_NEAR(v.d_max, std::sqrt(64.0), 1e-14);
  const auto pam = distance_stats(make_scalar_atoms({-3.0, -1.0, 1.0, 3.0}, {0.25, 0.25, 0.25, 0.25}));
  EXPECT_DOUBLE_EQ(pam.d_min, 2.0);
  EXPECT_DOUBLE_EQ(pam.d_max, 6.0);
  EXPECT_THROW(distance_stats(make_scalar_atoms({1.0}, {1.0})), std::invalid_argument);
}

TEST(DistanceStats, MinIsMinOfPerAtom) {
  const auto st = distance_stats(make_scalar_atoms({0.0, 1.0, 5.0}, {0.2, 0.3, 0.5}));
  EXPECT_DOUBLE_EQ(st.d_atom[2], 4.0);
  EXPECT_DOUBLE_EQ(st.d_min, 1.0);
  EXPECT_DOUBLE_EQ(st.d_max, 5.0);
}

TEST(Moments, NormAndVariance) {
  EXPECT_NEAR(norm_moment(make_gaussian(4.0), 2.0), 4.0, 1e-13);
  EXPECT_NEAR(norm_moment(make_uniform_ball(1, 1.0), 2.0), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(per_dim_variance(make_pm_one_vector(4)), 1.0, 1e-15);
  EXPECT_NEAR(entropy_bits(make_uniform_pam(8)), 3.0, 1e-14);
}

}  // namespace
}  // namespace mmpe
