#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mmpe/engine.hpp"
#include "mmpe/model.hpp"

namespace mmpe {

enum class Direction { upper, lower };
const char* to_string(Direction d);

struct BoundReport {
  static constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

  std::string name;
  double p = kUnset;
  double q = kUnset;
  double r = kUnset;
  double snr = kUnset;
  double snr0 = kUnset;
  double beta = kUnset;
  double t = kUnset;
  double gamma = kUnset;
  int n = 1;
  double sigma2 = kUnset;
  double bound = 0.0;
  Direction direction = Direction::upper;
  std::optional<double> truth;
  double truth_stderr = 0.0;

  // bound - truth for upper bounds, truth - bound for lower bounds.
  std::optional<double> margin() const;
  bool holds(double tol) const;
};

std::vector<std::string> bound_csv_header();
std::vector<std::string> bound_csv_row(const BoundReport& b);

// Upper bounds on mmpe, and on ||X - E[X|Y]||_p^p where the order range allows.
std::vector<BoundReport> trivial_bounds(const InputDistribution& d, double snr, double p);

double gaussian_hardest_kappa(double sigma2_snr, double p);
BoundReport gaussian_hardest(double sigma2, double snr, double p, int n = 1);
// Smallest sigma^2 with ||X||_p^p <= sigma^p ||Z||_p^p.
double hardest_sigma2(const InputDistribution& d, double p);

struct InterpolationInputs {
  double p = 2.0;
  double q = 2.0;
  double r = 2.0;
  double mmpe_p = 0.0;
  double mmpe_r = 0.0;
  double err_fr_at_p = 0.0;  // ||X - f_r||_p^p
  double err_fp_at_r = 0.0;  // ||X - f_p||_r^r
};
// Bounds on mmpe^{1/q}(q): "interp4", "interp5", and the conjectured product "conjecture".
std::vector<BoundReport> interpolation_bound(const InterpolationInputs& in);
// Same, with every input evaluated by quadrature (n == 1) and the truth attached.
std::vector<BoundReport> interpolation_bound(const InputDistribution& d, double snr, double p, double q,
                                             double r);

std::vector<BoundReport> discrete_input_bound(const DistanceStats& st, const std::vector<double>& probs,
                                              double snr, double p, int n);

struct PhaseTransitionRow {
  int n = 1;
  double bound = 0.0;
  bool ceiling = false;
};
std::vector<PhaseTransitionRow> phase_transition_binary(const std::vector<int>& ns, double snr, double p);

// beta with m^{2/p} = beta ||Z||_p^2 / (1 + beta snr0), where m = mmpe(snr0).
double scpp_beta(double mmpe_snr0, double snr0, double p, int n = 1);
double scpp_cp(double p);
// Upper bound on mmpe^{2/p}(snr) for snr >= snr0.
BoundReport scpp_bound(double beta, double snr0, double snr, double p, int n = 1,
                       std::optional<double> cp_override = std::nullopt);

double complementary_kappa(int n, double t);
// kappa_{n,t} mmpe_hi^{(1-t)/(1+t)} with mmpe_hi = mmpe(snr0, p(1+t)/(1-t)).
BoundReport complementary_scpp_value(double mmpe_hi, double snr, double snr0, double p, int n);
BoundReport complementary_scpp(const InputDistribution& d, double snr, double snr0, double p);

enum class MrSource { bound, direct };
struct Thm3Options {
  MrSource source = MrSource::bound;
  std::function<double(double)> direct_mr;  // r -> ||X - E[X|Y_snr0]||_r^r
  std::function<double(double)> x_norm;  // r -> ||X||_r^r; only the noise branch is used when empty
  int grid = 32;
};
double thm3_r_opt(double snr, double snr0, double mmse0);
BoundReport mn_bound_thm3(double beta, double snr, double snr0, int n, const Thm3Options& opt = {});
// mmse(snr0) + (n+2)(1/snr - 1/snr0) with mmse(snr0) = beta/(1+beta snr0).
BoundReport main_bound(double beta, double snr, double snr0, int n);

// Largest snr below snr0 where the bound first exceeds 1/(1+snr); W = snr0 - snr*.
double transition_width(const std::function<double(double)>& bound, double snr0, int scan_points = 2000);

// mmse^2 <= (1/n) tr E[Cov^2(X|Y)] <= n mmpe(4), plus the n ||Z||_4^4 / snr^2 ceiling.
std::vector<BoundReport> derivative_sandwich(double mmse, double cov_sq, double cov_sq_stderr, double mmpe4,
                                             double snr, int n);
std::vector<BoundReport> derivative_sandwich(const InputDistribution& d, double snr, const McSettings& s = {});

}  // namespace mmpe
