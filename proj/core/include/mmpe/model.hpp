#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace mmpe {

struct Gaussian {
  int n = 1;
  double sigma2 = 1.0;
};

// Atoms stored row-major: atom i occupies points[i*n, (i+1)*n).
struct DiscreteAtoms {
  int n = 1;
  std::vector<double> points;
  std::vector<double> probs;

  std::size_t size() const { return probs.size(); }
  std::span<const double> atom(std::size_t i) const {
    return {points.data() + i * static_cast<std::size_t>(n), static_cast<std::size_t>(n)};
  }
};

struct UniformBall {
  int n = 1;
  double radius = 1.0;
};

// Scalar density on a grid; weights are trapezoid masses summing to one.
struct TabulatedPdf {
  std::vector<double> grid;
  std::vector<double> density;
  std::vector<double> weights;
};

using InputDistribution = std::variant<Gaussian, DiscreteAtoms, UniformBall, TabulatedPdf>;

inline constexpr std::size_t kMinTabulatedPoints = 64;

Gaussian make_gaussian(double sigma2, int n = 1);
DiscreteAtoms make_atoms(const std::vector<std::vector<double>>& points,
                         const std::vector<double>& probs);
DiscreteAtoms make_scalar_atoms(const std::vector<double>& xs, const std::vector<double>& probs);
DiscreteAtoms make_uniform_pam(int points, double spacing = 2.0);
DiscreteAtoms make_pm_one_vector(int n);
UniformBall make_uniform_ball(int n, double radius);
TabulatedPdf make_tabulated(std::vector<double> grid, std::vector<double> density);
TabulatedPdf tabulate_uniform_interval(double lo, double hi, std::size_t points = 2049);

int dimension(const InputDistribution& d);
bool is_discrete(const InputDistribution& d);
std::string describe(const InputDistribution& d);

// ||X||_p^p with the per-dimension normalization.
double norm_moment(const InputDistribution& d, double p);
// Scalar mean and variance (n == 1).
double scalar_mean(const InputDistribution& d);
double scalar_variance(const InputDistribution& d);
// Per-dimension variance (1/n) tr Cov(X).
double per_dim_variance(const InputDistribution& d);

// Support hull for n == 1; bounded is false for Gaussian priors.
struct SupportRange {
  double lo = 0.0;
  double hi = 0.0;
  bool bounded = true;
};
SupportRange scalar_support(const InputDistribution& d);

struct DistributionSpec {
  std::string kind;  // gaussian | atoms | pam | pmone | uniform_ball | tabulated
  int n = 1;
  double sigma2 = 1.0;
  double radius = 1.0;
  int points = 4;
  double spacing = 2.0;
  std::vector<std::vector<double>> atoms;
  std::vector<double> probs;
  std::vector<double> grid;
  std::vector<double> density;
};

InputDistribution build_distribution(const DistributionSpec& spec);
DistributionSpec parse_distribution_text(const std::string& text);
DistributionSpec load_distribution_file(const std::string& path);

struct ChannelConfig {
  int n = 1;
  double snr = 0.0;
  void validate() const;
};

struct ChannelSamples {
  int n = 1;
  std::vector<double> x;  // row-major count x n
  std::vector<double> y;
  std::size_t count() const { return n > 0 ? x.size() / static_cast<std::size_t>(n) : 0; }
};

using Rng = std::mt19937_64;

void draw_input(const InputDistribution& d, Rng& rng, std::span<double> out);
ChannelSamples sample_channel(const InputDistribution& d, const ChannelConfig& ch,
                              std::size_t count, std::uint64_t seed);

struct ScalarPosterior {
  enum class Kind { atoms, gaussian };
  Kind kind = Kind::atoms;
  std::vector<double> x;
  std::vector<double> w;
  double mean = 0.0;
  double var = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool truncated = false;
  // Continuous kind: density proportional to exp(-precision (x-center)^2/2) on [lo,hi].
  double center = 0.0;
  double precision = 0.0;
  double log_norm = 0.0;

  double density(double x) const;
};

ScalarPosterior posterior_scalar(const InputDistribution& d, double snr, double y);

// E[g(X) | Y=y]; breakpoints mark kinks of g for the continuous kind.
double posterior_expect(const ScalarPosterior& post, const std::function<double(double)>& g,
                        std::span<const double> breaks = {}, double abs_tol = 1e-13);
// E[|X - v|^p | Y=y].
double posterior_p_error(const ScalarPosterior& post, double v, double p);

// Posterior atom weights for a vector observation (softmax of log-likelihoods).
std::vector<double> posterior_weights(const DiscreteAtoms& d, double snr, std::span<const double> y);
// Same, with a list of (snr, observation) pairs sharing the input.
std::vector<double> posterior_weights_multi(const DiscreteAtoms& d,
                                            std::span<const std::pair<double, std::span<const double>>> obs);

// Output density p_Y(y) for n == 1.
double output_density(const InputDistribution& d, double snr, double y);
// y-range and breakpoints for integrals over the scalar output.
struct OutputRange {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> breaks;
};
OutputRange output_range(const InputDistribution& d, double snr);

struct DistanceStats {
  double d_min = 0.0;
  double d_max = 0.0;
  std::vector<double> d_atom;
};
DistanceStats distance_stats(const DiscreteAtoms& d);

double entropy_bits(const DiscreteAtoms& d);

}  // namespace mmpe
