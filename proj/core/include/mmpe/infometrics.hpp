#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mmpe/engine.hpp"
#include "mmpe/model.hpp"

namespace mmpe {

inline constexpr double kBitsPerNat = 1.4426950408889634;  // 1/ln 2

// (n/2) log2(k_{n,p}^2 n^{2/p} mmpe^{2/p}).
double entropy_bound_from_mmpe(int n, double p, double mmpe_value);
// (n/2) log2(2 pi e n^{(2-p)/p} mmpe^{2/p}) for p >= 2.
double trivial_entropy_bound_from_mmpe(int n, double p, double mmpe_value);
double entropy_bound(const InputDistribution& d, double snr, double p);

// Differential entropies in bits (n == 1 continuous inputs).
double input_entropy_bits(const InputDistribution& d);
double output_entropy_bits(const InputDistribution& d, double snr, double abs_tol = 1e-9);
double conditional_entropy_bits(const InputDistribution& d, double snr);

// I(X;Y) = h(Y) - (1/2) log2(2 pi e), n == 1.
double mutual_information_scalar(const InputDistribution& d, double snr, double abs_tol = 1e-9);

struct GapBreakdown {
  std::string label;
  double snr = 0.0;
  double p = 2.0;
  double H = 0.0;
  double G1 = 0.0;
  double G1_triangle = 0.0;
  double G2 = 0.0;
  double gap = 0.0;
  double lower = 0.0;
  std::optional<double> exact_MI;
};

std::vector<std::string> gap_csv_header();
std::vector<std::string> gap_csv_row(const GapBreakdown& g);

// 1/2 log2(pi e / 6).
double shaping_loss_bits();

enum class OriginalGapVariant { lmmse, mmse };
GapBreakdown ow_gap_original(const DiscreteAtoms& d, double snr, OriginalGapVariant v = OriginalGapVariant::lmmse,
                             bool with_exact_mi = true);

struct GapOptions {
  std::optional<UniformBall> dither;  // default: ball of radius d_min/2
  bool with_exact_mi = true;
  McSettings mc{};                    // used when n > 1
  double abs_tol = 1e-9;
};
GapBreakdown ow_gap_generalized(const DiscreteAtoms& d, double snr, double p, const GapOptions& opt = {});

// G2 for a ball dither in n dimensions (independent of the radius), bits.
double g2_ball_bits(int n, double p);
// ||U + X - f_p||_p / ||U||_p for a ball dither of the given radius.
double g1_ratio(const DiscreteAtoms& d, double snr, double p, double radius, const McSettings& mc = {},
                double abs_tol = 1e-9);
// 1 + 2 (d_max/d_min) ((p+n)/n Qbar(n/2; snr d_min^2/8))^{1/p}.
double g1_asymptotic_bound(const DistanceStats& st, double snr, double p, int n);

}  // namespace mmpe
