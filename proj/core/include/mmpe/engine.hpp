#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mmpe/estimators.hpp"
#include "mmpe/model.hpp"

namespace mmpe {

enum class Method { closed_form, quadrature, monte_carlo };
const char* to_string(Method m);

struct MmpeEstimate {
  double value = 0.0;
  Method method = Method::closed_form;
  double std_error = 0.0;
  std::string dist_id;
  int n = 1;
  double snr = 0.0;
  double p = 2.0;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  double quad_error = 0.0;
  bool truncated = false;
};

inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

struct QuadratureSettings {
  double abs_tol = 1e-7;
  PointwiseSettings pointwise{};
};

struct McSettings {
  std::size_t samples = 1'000'000;
  std::size_t batch = 10'000;
  std::uint64_t seed = kDefaultSeed;
  unsigned workers = 1;
};

// sigma^p ||Z||_p^p / (1 + sigma^2 snr)^{p/2}.
MmpeEstimate mmpe_gaussian_closed_form(double sigma2, double snr, double p, int n = 1);

MmpeEstimate mmpe_scalar(const InputDistribution& d, double snr, double p,
                         const QuadratureSettings& s = {});

MmpeEstimate mmpe_vector_mc(const InputDistribution& d, double snr, double p, const McSettings& s = {});

// Closed form for Gaussian inputs with p >= 1, quadrature for n == 1, Monte Carlo otherwise.
MmpeEstimate mmpe(const InputDistribution& d, double snr, double p, const QuadratureSettings& q = {},
                  const McSettings& mc = {});

// ||X - f(Y)||_p^p by quadrature (n == 1).
double p_error_of(const EstimatorSpec& f, const InputDistribution& d, double snr, double p,
                  double abs_tol = 1e-9);
MmpeEstimate p_error_of_mc(const EstimatorSpec& f, const InputDistribution& d, double snr, double p,
                           const McSettings& s = {});

// Generic seeded Monte-Carlo average of a per-sample statistic; the statistic draws its own noise.
using SampleStatistic = std::function<double(std::span<const double> x, Rng& rng)>;
MmpeEstimate monte_carlo_mean(const InputDistribution& d, const SampleStatistic& stat, const McSettings& s);

struct ConditionalMmpe {
  MmpeEstimate combined;  // single observation at snr0 + delta
  MmpeEstimate raw_mc;    // two separate observations, posterior from both
};
ConditionalMmpe conditional_mmpe(const InputDistribution& d, double snr0, double p, double delta,
                                 const McSettings& s = {}, const QuadratureSettings& q = {});

// (1/n) E[Err^{p/2}(X, f(Y_snr0)) w(Z)] with the change-of-measure weight; quadrature for n == 1.
double change_of_measure_eval(const InputDistribution& d, double snr, double snr0, double p,
                              const EstimatorSpec& f, double abs_tol = 1e-10);
MmpeEstimate change_of_measure_mc(const InputDistribution& d, double snr, double snr0, double p,
                                  const EstimatorSpec& f, const McSettings& s = {});
// Optimal estimator at snr applied to the rescaled observation sqrt(snr/snr0) y.
EstimatorSpec change_of_measure_optimal(const InputDistribution& d, double snr, double snr0, double p);

using GFunction = std::function<double(double)>;
struct NamedG {
  std::string name;
  GFunction g;
};
std::vector<NamedG> default_g_family();

struct ResidualTable {
  std::vector<std::pair<std::string, double>> orthogonality;  // E[|W|^{p-2} W g(Y)]
  double classical = 0.0;                                     // E[W Y]
  double bias = 0.0;                                          // E[W]
};
ResidualTable diagnostics_residuals(const InputDistribution& d, double snr, double p,
                                    const std::vector<NamedG>& family = default_g_family(),
                                    double abs_tol = 1e-9);

// mmpe(Z|Y; p) from the posterior of the noise, by quadrature (n == 1).
double noise_mmpe_scalar(const InputDistribution& d, double snr, double p, double abs_tol = 1e-7);
MmpeEstimate noise_mmpe_mc(const InputDistribution& d, double snr, double p, const McSettings& s = {});

// (1/n) E[tr Cov^2(X|Y)].
MmpeEstimate posterior_cov_sq(const InputDistribution& d, double snr, const McSettings& s = {});
double posterior_cov_sq_scalar(const InputDistribution& d, double snr, double abs_tol = 1e-9);

std::vector<std::string> mmpe_csv_header();
std::vector<std::string> mmpe_csv_row(const MmpeEstimate& e);

}  // namespace mmpe
