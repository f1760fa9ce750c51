#include "mmpe/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mmpe/csv.hpp"
#include "mmpe/numerics.hpp"
#include "mmpe/specfun.hpp"

namespace mmpe {
namespace {

BoundReport upper(std::string name, double value) {
  BoundReport b;
  b.name = std::move(name);
  b.bound = value;
  b.direction = Direction::upper;
  return b;
}

std::string opt_num(double v) { return std::isnan(v) ? std::string() : format_number(v); }

}  // namespace

const char* to_string(Direction d) { return d == Direction::upper ? "upper" : "lower"; }

std::optional<double> BoundReport::margin() const {
  if (!truth) return std::nullopt;
  return direction == Direction::upper ? bound - *truth : *truth - bound;
}

bool BoundReport::holds(double tol) const {
  const auto m = margin();
  return !m || *m >= -tol;
}

std::vector<std::string> bound_csv_header() {
  return {"name", "p", "q", "r", "snr", "snr0", "beta", "t", "gamma", "n", "sigma2",
          "bound", "direction", "truth", "margin"};
}

std::vector<std::string> bound_csv_row(const BoundReport& b) {
  const auto m = b.margin();
  return {b.name,
          opt_num(b.p),
          opt_num(b.q),
          opt_num(b.r),
          opt_num(b.snr),
          opt_num(b.snr0),
          opt_num(b.beta),
          opt_num(b.t),
          opt_num(b.gamma),
          format_number(static_cast<long long>(b.n)),
          opt_num(b.sigma2),
          format_number(b.bound),
          to_string(b.direction),
          b.truth ? format_number(*b.truth) : std::string(),
          m ? format_number(*m) : std::string()};
}

std::vector<BoundReport> trivial_bounds(const InputDistribution& d, double snr, double p) {
  if (!(p > 0.0)) throw std::domain_error("trivial_bounds: p must be positive");
  if (!(snr >= 0.0)) throw std::domain_error("trivial_bounds: snr must be >= 0");
  const int n = dimension(d);
  const double zp = gaussian_norm_moment(n, p);
  const double xp = norm_moment(d, p);
  const double noise = snr > 0.0 ? zp / std::pow(snr, 0.5 * p) : std::numeric_limits<double>::infinity();
  std::vector<BoundReport> out;
  auto add = [&](std::string name, double v) {
    BoundReport b = upper(std::move(name), v);
    b.p = p;
    b.snr = snr;
    b.n = n;
    out.push_back(b);
  };
  add("mmpe_min", std::min(noise, xp));
  if (p >= 2.0) add("cm_error_p_ge_2", std::pow(2.0, p) * std::min(noise, xp));
  if (p >= 1.0 && p <= 2.0) {
    const double c = std::pow(static_cast<double>(n), 0.5 - 1.0 / p);
    const double zb = std::pow(std::pow(zp, 1.0 / p) + c, p);
    const double x2 = std::sqrt(norm_moment(d, 2.0));
    const double xb = std::pow(std::pow(xp, 1.0 / p) + c * x2, p);
    add("cm_error_p_1_2", std::min(snr > 0.0 ? zb / std::pow(snr, 0.5 * p) : std::numeric_limits<double>::infinity(), xb));
  }
  if (p == 2.0) {
    if (snr > 0.0) add("lmmse_inv_snr", 1.0 / snr);
    const double v = per_dim_variance(d);
    BoundReport b = upper("lmmse_power", v / (1.0 + v * snr));
    b.p = p;
    b.snr = snr;
    b.n = n;
    b.sigma2 = v;
    out.push_back(b);
  }
  return out;
}

double gaussian_hardest_kappa(double sigma2_snr, double p) {
  if (p == 2.0) return 1.0;
  const double k = (1.0 + std::sqrt(sigma2_snr)) / std::sqrt(1.0 + sigma2_snr);
  return std::pow(k, p);
}

BoundReport gaussian_hardest(double sigma2, double snr, double p, int n) {
  if (!(p >= 1.0)) throw std::domain_error("gaussian_hardest: requires p >= 1");
  if (!(sigma2 > 0.0)) throw std::domain_error("gaussian_hardest: sigma2 must be positive");
  BoundReport b = upper("gaussian_hardest", gaussian_hardest_kappa(sigma2 * snr, p) * std::pow(sigma2, 0.5 * p) *
                                               gaussian_norm_moment(n, p) / std::pow(1.0 + snr * sigma2, 0.5 * p));
  b.p = p;
  b.snr = snr;
  b.n = n;
  b.sigma2 = sigma2;
  return b;
}

double hardest_sigma2(const InputDistribution& d, double p) {
  return std::pow(norm_moment(d, p) / gaussian_norm_moment(dimension(d), p), 2.0 / p);
}

std::vector<BoundReport> interpolation_bound(const InterpolationInputs& in) {
  MomentOrder mo{in.p, in.q, in.r};
  mo.validate();
  const double a = mo.alpha();
  const double ab = 1.0 - a;
  auto make = [&](std::string name, double v) {
    BoundReport b = upper(std::move(name), v);
    b.p = in.p;
    b.q = in.q;
    b.r = in.r;
    return b;
  };
  std::vector<BoundReport> out;
  out.push_back(make("interp4", std::pow(in.err_fr_at_p, a / in.p) * std::pow(in.mmpe_r, ab / in.r)));
  out.push_back(make("interp5", std::pow(in.mmpe_p, a / in.p) * std::pow(in.err_fp_at_r, ab / in.r)));
  out.push_back(make("conjecture", std::pow(in.mmpe_p, a / in.p) * std::pow(in.mmpe_r, ab / in.r)));
  return out;
}

std::vector<BoundReport> interpolation_bound(const InputDistribution& d, double snr, double p, double q, double r) {
  InterpolationInputs in{p, q, r};
  in.mmpe_p = mmpe_scalar(d, snr, p).value;
  in.mmpe_r = r == p ? in.mmpe_p : mmpe_scalar(d, snr, r).value;
  in.err_fr_at_p = r == p ? in.mmpe_p : p_error_of(optimal_estimator(d, snr, r), d, snr, p);
  in.err_fp_at_r = r == p ? in.mmpe_r : p_error_of(optimal_estimator(d, snr, p), d, snr, r);
  const double truth = std::pow(q == p ? in.mmpe_p : (q == r ? in.mmpe_r : mmpe_scalar(d, snr, q).value), 1.0 / q);
  auto out = interpolation_bound(in);
  for (auto& b : out) {
    b.snr = snr;
    b.truth = truth;
  }
  return out;
}

std::vector<BoundReport> discrete_input_bound(const DistanceStats& st, const std::vector<double>& probs, double snr,
                                              double p, int n) {
  if (n < 1) throw std::domain_error("discrete_input_bound: n must be >= 1");
  if (probs.size() != st.d_atom.size()) throw std::invalid_argument("discrete_input_bound: size mismatch");
  const double dp = std::pow(st.d_max, p);
  const double h = 0.5 * n;
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i)
    acc += probs[i] * generalized_q(h, snr * st.d_atom[i] * st.d_atom[i] / 8.0);
  std::vector<BoundReport> out;
  auto add = [&](std::string name, double v) {
    BoundReport b = upper(std::move(name), v);
    b.p = p;
    b.snr = snr;
    b.n = n;
    out.push_back(b);
  };
  add("discrete_atoms", dp * acc / n);
  add("discrete_dmin", dp * generalized_q(h, snr * st.d_min * st.d_min / 8.0) / n);
  if (n == 1) add("discrete_chernoff", 2.0 * dp * std::exp(-snr * st.d_min * st.d_min / 8.0));
  return out;
}

std::vector<PhaseTransitionRow> phase_transition_binary(const std::vector<int>& ns, double snr, double p) {
  if (snr == 1.0) throw std::domain_error("phase_transition_binary: snr = 1 is the transition boundary");
  if (!(snr >= 0.0)) throw std::domain_error("phase_transition_binary: snr must be >= 0");
  std::vector<PhaseTransitionRow> out;
  for (int n : ns) {
    if (n < 1) throw std::domain_error("phase_transition_binary: n must be >= 1");
    const double dn = n;
    PhaseTransitionRow row;
    row.n = n;
    if (snr > 1.0) {
      const double lq = log_generalized_q(0.5 * dn, 0.5 * dn * snr);
      row.bound = std::exp(0.5 * p * std::log(4.0 * dn) + lq - std::log(dn));
    } else {
      row.bound = std::pow(4.0, 0.5 * p) * std::pow(dn, 0.5 * p - 1.0);
      row.ceiling = true;
    }
    out.push_back(row);
  }
  return out;
}

double scpp_cp(double p) {
  if (p == 2.0) return 1.0;
  if (p > 2.0) return 2.0;
  throw std::domain_error("scpp: c_p is only defined for p >= 2");
}

double scpp_beta(double mmpe_snr0, double snr0, double p, int n) {
  const double m = std::pow(mmpe_snr0, 2.0 / p);
  const double z2 = std::pow(gaussian_norm_moment(n, p), 2.0 / p);
  const double den = z2 - snr0 * m;
  if (!(den > 0.0)) throw std::domain_error("scpp_beta: recovered beta is negative or unbounded");
  const double beta = m / den;
  if (beta < 0.0) throw std::domain_error("scpp_beta: recovered beta is negative");
  return beta;
}

BoundReport scpp_bound(double beta, double snr0, double snr, double p, int n, std::optional<double> cp_override) {
  if (!(beta >= 0.0)) throw std::domain_error("scpp_bound: beta must be >= 0");
  if (snr < snr0) throw std::domain_error("scpp_bound: requires snr >= snr0");
  const double cp = cp_override ? *cp_override : scpp_cp(p);
  const double z2 = std::pow(gaussian_norm_moment(n, p), 2.0 / p);
  BoundReport b = upper("scpp", cp * beta * z2 / (1.0 + beta * snr));
  b.p = p;
  b.snr = snr;
  b.snr0 = snr0;
  b.beta = beta;
  b.n = n;
  return b;
}

double complementary_kappa(int n, double t) {
  if (!(t >= 0.0 && t < 1.0)) throw std::domain_error("complementary_kappa: t must lie in [0,1)");
  const double dn = n;
  const double e = t / (t + 1.0);
  return std::exp(e * (dn * std::numbers::ln2 - 2.0 * std::log(dn)) - (dn * e - 0.5) * std::log1p(-t));
}

BoundReport complementary_scpp_value(double mmpe_hi, double snr, double snr0, double p, int n) {
  if (!(snr > 0.0) || snr > snr0) throw std::domain_error("complementary_scpp: requires 0 < snr <= snr0");
  const double t = (snr0 - snr) / snr0;
  BoundReport b = upper("complementary_scpp", complementary_kappa(n, t) * std::pow(mmpe_hi, (1.0 - t) / (1.0 + t)));
  b.p = p;
  b.q = p * (1.0 + t) / (1.0 - t);
  b.snr = snr;
  b.snr0 = snr0;
  b.t = t;
  b.n = n;
  return b;
}

BoundReport complementary_scpp(const InputDistribution& d, double snr, double snr0, double p) {
  if (!(snr > 0.0) || snr > snr0) throw std::domain_error("complementary_scpp: requires 0 < snr <= snr0");
  const double t = (snr0 - snr) / snr0;
  const double phi = p * (1.0 + t) / (1.0 - t);
  const double hi = mmpe(d, snr0, phi).value;
  return complementary_scpp_value(hi, snr, snr0, p, dimension(d));
}

double thm3_r_opt(double snr, double snr0, double mmse0) {
  const double gamma = snr / (2.0 * snr0 - snr);
  const double l = std::log(4.0 * std::numbers::e / (snr0 * mmse0));
  return 2.0 / gamma <= l ? 2.0 * l : 2.0 / gamma;
}

BoundReport mn_bound_thm3(double beta, double snr, double snr0, int n, const Thm3Options& opt) {
  if (!(snr > 0.0) || snr > snr0) throw std::domain_error("mn_bound_thm3: requires 0 < snr <= snr0");
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::domain_error("mn_bound_thm3: beta must lie in [0,1]");
  const double gamma = snr / (2.0 * snr0 - snr);
  const double mmse0 = beta / (1.0 + beta * snr0);
  BoundReport b = upper("thm3", 0.0);
  b.snr = snr;
  b.snr0 = snr0;
  b.beta = beta;
  b.gamma = gamma;
  b.n = n;
  b.p = 2.0;
  const double dn = n;
  if (gamma >= 1.0) {
    b.bound = mmse0;
    return b;
  }
  auto log_mr = [&](double r) {
    if (opt.source == MrSource::direct) {
      if (!opt.direct_mr) throw std::invalid_argument("mn_bound_thm3: direct M_r source needs a callback");
      return std::log(opt.direct_mr(r));
    }
    double v = std::log(gaussian_norm_moment(n, r)) - 0.5 * r * std::log(snr0);
    if (opt.x_norm) v = std::min(v, std::log(opt.x_norm(r)));
    return r * std::numbers::ln2 + v;
  };
  auto log_bound = [&](double r) {
    const double lk = 0.5 * std::numbers::ln2 - (1.0 - gamma) * std::log(dn) +
                      0.5 * (dn * (1.0 - gamma) - 1.0) * std::log((1.0 + gamma) / gamma) +
                      2.0 * (1.0 - gamma) / (r - 2.0) * log_mr(r);
    return lk + (gamma * r - 2.0) / (r - 2.0) * std::log(mmse0);
  };
  const double r_lo = 2.0 / gamma * (1.0 + 1e-6);
  const double r_opt = thm3_r_opt(snr, snr0, mmse0);
  const double r_hi = std::max(4.0 * r_opt, r_lo * 1.5);
  double best = std::numeric_limits<double>::infinity();
  double best_r = r_lo;
  const int m = std::max(2, opt.grid);
  for (int i = 0; i < m; ++i) {
    const double r = r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) / (m - 1));
    const double v = log_bound(r);
    if (v < best) {
      best = v;
      best_r = r;
    }
  }
  if (r_opt > r_lo) {
    const double v = log_bound(r_opt);
    if (v < best) {
      best = v;
      best_r = r_opt;
    }
  }
  b.bound = std::exp(best);
  b.r = best_r;
  return b;
}

BoundReport main_bound(double beta, double snr, double snr0, int n) {
  if (!(snr > 0.0) || snr > snr0) throw std::domain_error("main_bound: requires 0 < snr <= snr0");
  BoundReport b = upper("main_bound", beta / (1.0 + beta * snr0) + (n + 2.0) * (1.0 / snr - 1.0 / snr0));
  b.snr = snr;
  b.snr0 = snr0;
  b.beta = beta;
  b.n = n;
  b.p = 2.0;
  return b;
}

double transition_width(const std::function<double(double)>& bound, double snr0, int scan_points) {
  auto excess = [&](double s) { return bound(s) - 1.0 / (1.0 + s); };
  const double lo_end = snr0 * 1e-6;
  double prev = snr0;
  for (int i = 1; i <= scan_points; ++i) {
    const double s = snr0 - (snr0 - lo_end) * static_cast<double>(i) / scan_points;
    if (excess(s) > 0.0) {
      double a = s, b = prev;
      for (int k = 0; k < 100 && b - a > 1e-12 * snr0; ++k) {
        const double mid = 0.5 * (a + b);
        (excess(mid) > 0.0 ? a : b) = mid;
      }
      return snr0 - 0.5 * (a + b);
    }
    prev = s;
  }
  return snr0;
}

std::vector<BoundReport> derivative_sandwich(double mmse, double cov_sq, double cov_sq_stderr, double mmpe4,
                                             double snr, int n) {
  std::vector<BoundReport> out;
  BoundReport lo;
  lo.name = "deriv_lower";
  lo.direction = Direction::lower;
  lo.bound = mmse * mmse;
  lo.snr = snr;
  lo.n = n;
  lo.p = 2.0;
  lo.truth = cov_sq;
  lo.truth_stderr = cov_sq_stderr;
  out.push_back(lo);
  BoundReport hi = upper("deriv_upper", n * mmpe4);
  hi.snr = snr;
  hi.n = n;
  hi.p = 4.0;
  hi.truth = cov_sq;
  hi.truth_stderr = cov_sq_stderr;
  out.push_back(hi);
  if (snr > 0.0) {
    BoundReport c = upper("deriv_noise", n * gaussian_norm_moment(n, 4.0) / (snr * snr));
    c.snr = snr;
    c.n = n;
    c.p = 4.0;
    c.truth = cov_sq;
    c.truth_stderr = cov_sq_stderr;
    out.push_back(c);
  }
  return out;
}

std::vector<BoundReport> derivative_sandwich(const InputDistribution& d, double snr, const McSettings& s) {
  const int n = dimension(d);
  if (n > kVectorEstimatorMaxDim) throw std::invalid_argument("derivative_sandwich: n must be <= 8");
  const MmpeEstimate mse = mmpe(d, snr, 2.0, {}, s);
  const MmpeEstimate m4 = mmpe(d, snr, 4.0, {}, s);
  const MmpeEstimate cov = posterior_cov_sq(d, snr, s);
  return derivative_sandwich(mse.value, cov.value, cov.std_error, m4.value, snr, n);
}

}  // namespace mmpe
