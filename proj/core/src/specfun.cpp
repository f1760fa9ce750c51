#include "mmpe/specfun.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace mmpe {
namespace {

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::domain_error(what);
}

}  // namespace

void MomentOrder::validate() const {
  if (!(p > 0.0) || !(p <= q) || !(q <= r))
    throw std::domain_error("moment order requires 0 < p <= q <= r");
}

double MomentOrder::alpha() const {
  if (p == r) return 1.0;
  return (1.0 / q - 1.0 / r) / (1.0 / p - 1.0 / r);
}

double log_generalized_q(double x, double a) {
  require_positive(x, "generalized_q: x must be positive");
  if (a < 0.0) throw std::domain_error("generalized_q: a must be nonnegative");
  if (a == 0.0) return 0.0;
  const double q = boost::math::gamma_q(x, a);
  if (q > 0.0) return std::log(q);
  // Deep tail: leading term of the asymptotic expansion.
  return (x - 1.0) * std::log(a) - a - std::lgamma(x) + std::log1p((x - 1.0) / a);
}

double generalized_q(double x, double a) {
  require_positive(x, "generalized_q: x must be positive");
  if (a < 0.0) throw std::domain_error("generalized_q: a must be nonnegative");
  if (a == 0.0) return 1.0;
  return boost::math::gamma_q(x, a);
}

double log_upper_incomplete_gamma(double x, double a) {
  return log_generalized_q(x, a) + std::lgamma(x);
}

double upper_incomplete_gamma(double x, double a) {
  require_positive(x, "upper_incomplete_gamma: x must be positive");
  if (a < 0.0) throw std::domain_error("upper_incomplete_gamma: a must be nonnegative");
  if (a == 0.0) return std::tgamma(x);
  return boost::math::tgamma(x, a);
}

double gaussian_q(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double gaussian_norm_moment(int n, double p) {
  if (n < 1) throw std::domain_error("gaussian_norm_moment: n must be >= 1");
  require_positive(p, "gaussian_norm_moment: p must be positive");
  const double h = 0.5 * n;
  return std::exp(0.5 * p * std::numbers::ln2 + std::lgamma(h + 0.5 * p) - std::lgamma(h)) / n;
}

double uniform_ball_moment(int n, double p, double r) {
  if (n < 1) throw std::domain_error("uniform_ball_moment: n must be >= 1");
  require_positive(p, "uniform_ball_moment: p must be positive");
  require_positive(r, "uniform_ball_moment: r must be positive");
  return std::pow(r, p) / (p + n);
}

double log_ball_volume(int n, double r) {
  if (n < 1) throw std::domain_error("ball_volume: n must be >= 1");
  require_positive(r, "ball_volume: r must be positive");
  return 0.5 * n * std::log(std::numbers::pi) + n * std::log(r) - std::lgamma(0.5 * n + 1.0);
}

double ball_volume(int n, double r) { return std::exp(log_ball_volume(n, r)); }

double log_fano_constant(int n, double p) {
  if (n < 1) throw std::domain_error("fano_constant: n must be >= 1");
  require_positive(p, "fano_constant: p must be positive");
  const double dn = n;
  return 0.5 * std::log(std::numbers::pi) + std::log(p / dn) / p + 1.0 / p +
         (std::lgamma(dn / p + 1.0) - std::lgamma(0.5 * dn + 1.0)) / dn;
}

double fano_constant(int n, double p) { return std::exp(log_fano_constant(n, p)); }

}  // namespace mmpe
