#pragma once

#include <string>
#include <vector>

#include "mmpe/infometrics.hpp"

namespace mmpe::cli {

struct Fig1Row {
  double p = 0.0;
  double classical = 0.0;  // E[(X - f_p) Y]
  double bias = 0.0;       // E[X - f_p]
};
std::vector<Fig1Row> fig1a_rows(const std::vector<double>& ps);
std::vector<Fig1Row> fig1b_rows(const std::vector<double>& ps);
std::vector<double> fig1_p_grid();

struct Fig2Row {
  double alpha = 0.0;
  double q = 0.0;
  double truth = 0.0;
  double interp4 = 0.0;
  double interp5 = 0.0;
  double conjecture = 0.0;
};
std::vector<Fig2Row> fig2_rows(const std::vector<double>& alphas);
std::vector<double> fig2_alpha_grid();

struct Fig3Row {
  std::string series;
  int N = 0;
  GapBreakdown gap;
};
// PAM size for the sweep: floor(sqrt(1 + snr)).
int fig3_points(double snr);
std::vector<Fig3Row> fig3_rows(const std::vector<double>& snrs, bool with_exact_mi = true);
std::vector<double> fig3_snr_grid();

struct Fig4Row {
  int n = 1;
  double beta = 0.0;
  double snr = 0.0;
  double thm3 = 0.0;
  double main = 0.0;
  double gaussian = 0.0;  // 1/(1+snr)
};
std::vector<Fig4Row> fig4_rows(double beta, const std::vector<int>& ns, const std::vector<double>& snrs);
std::vector<double> fig4_snr_grid();
inline constexpr double kFig4Snr0 = 5.0;

}  // namespace mmpe::cli
