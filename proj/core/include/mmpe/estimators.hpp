#pragma once

#include <span>
#include <variant>
#include <vector>

#include "mmpe/model.hpp"

namespace mmpe {

struct LinearGain {
  double gain = 0.0;
  double offset = 0.0;
};

struct TwoPoint {
  double x1 = -1.0;
  double x2 = 1.0;
  double q = 0.5;  // P[X = x1]
  double snr = 1.0;
  double p = 2.0;
};

struct HardDecision {
  double x1 = -1.0;
  double x2 = 1.0;
  double q = 0.5;
  double snr = 1.0;
};

struct ConditionalMean {
  InputDistribution dist;
  double snr = 0.0;
};

struct NumericPointwise {
  InputDistribution dist;
  double snr = 0.0;
  double p = 2.0;
};

// y is multiplied by input_scale before the rule is applied.
struct EstimatorSpec {
  std::variant<LinearGain, TwoPoint, HardDecision, ConditionalMean, NumericPointwise> rule;
  double input_scale = 1.0;
};

EstimatorSpec linear_estimator(double gain, double offset = 0.0);
EstimatorSpec zero_estimator();
EstimatorSpec conditional_mean_estimator(const InputDistribution& d, double snr);
EstimatorSpec optimal_estimator(const InputDistribution& d, double snr, double p);

double evaluate(const EstimatorSpec& f, double y);
std::vector<double> evaluate_vector(const EstimatorSpec& f, std::span<const double> y);

std::vector<double> gaussian_estimator(double snr, std::span<const double> y, double sigma2 = 1.0);
double gaussian_estimator(double snr, double y, double sigma2 = 1.0);

double two_point_estimator(double x1, double x2, double q, double snr, double p, double y);
double hard_decision_estimator(double x1, double x2, double q, double snr, double y);

struct PointwiseSettings {
  double x_tol = 1e-12;
  std::size_t grid = 1024;
  std::size_t exhaustive_atoms = 256;
};

struct PointwiseResult {
  double value = 0.0;
  double objective = 0.0;
  bool truncated = false;
};

// argmin_v E[|X - v|^p | posterior].
PointwiseResult minimize_posterior(const ScalarPosterior& post, double p,
                                   const PointwiseSettings& s = {});
PointwiseResult numeric_pointwise_estimator(const InputDistribution& d, double snr, double p, double y,
                                            const PointwiseSettings& s = {});

inline constexpr int kVectorEstimatorMaxDim = 8;

// argmin_v sum_i w_i ||x_i - v||^p for atom weights w.
std::vector<double> minimize_vector_posterior(const DiscreteAtoms& d, std::span<const double> w, double p);
std::vector<double> numeric_vector_estimator(const DiscreteAtoms& d, double snr, double p,
                                             std::span<const double> y);

}  // namespace mmpe
