#include "mmpe/infometrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mmpe/csv.hpp"
#include "mmpe/numerics.hpp"
#include "mmpe/specfun.hpp"

namespace mmpe {
namespace {

const double kHalfLog2PiE = 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e);

double signed_power_antiderivative(double x, double p) {
  return std::copysign(std::pow(std::abs(x), p + 1.0), x) / (p + 1.0);
}

}  // namespace

double entropy_bound_from_mmpe(int n, double p, double mmpe_value) {
  const double dn = n;
  const double lk = log_fano_constant(n, p);
  return 0.5 * dn * kBitsPerNat * (2.0 * lk + 2.0 / p * std::log(dn) + 2.0 / p * std::log(mmpe_value));
}

double trivial_entropy_bound_from_mmpe(int n, double p, double mmpe_value) {
  if (!(p >= 2.0)) throw std::domain_error("trivial entropy bound: requires p >= 2");
  const double dn = n;
  return 0.5 * dn *
         std::log2(2.0 * std::numbers::pi * std::numbers::e * std::pow(dn, (2.0 - p) / p) *
                   std::pow(mmpe_value, 2.0 / p));
}

double entropy_bound(const InputDistribution& d, double snr, double p) {
  if (is_discrete(d)) throw std::invalid_argument("entropy_bound: discrete inputs have no finite differential entropy");
  return entropy_bound_from_mmpe(dimension(d), p, mmpe(d, snr, p).value);
}

double input_entropy_bits(const InputDistribution& d) {
  if (const auto* g = std::get_if<Gaussian>(&d))
    return 0.5 * g->n * std::log2(2.0 * std::numbers::pi * std::numbers::e * g->sigma2);
  if (const auto* b = std::get_if<UniformBall>(&d)) return log_ball_volume(b->n, b->radius) * kBitsPerNat;
  if (const auto* t = std::get_if<TabulatedPdf>(&d)) {
    double h = 0.0;
    for (std::size_t i = 0; i + 1 < t->grid.size(); ++i) {
      auto term = [](double f) { return f > 0.0 ? -f * std::log(f) : 0.0; };
      h += 0.5 * (t->grid[i + 1] - t->grid[i]) * (term(t->density[i]) + term(t->density[i + 1]));
    }
    return h * kBitsPerNat;
  }
  throw std::invalid_argument("input_entropy_bits: discrete inputs have no differential entropy");
}

double output_entropy_bits(const InputDistribution& d, double snr, double abs_tol) {
  if (dimension(d) != 1) throw std::invalid_argument("output_entropy_bits: requires n == 1");
  const OutputRange r = output_range(d, snr);
  auto f = [&](double y) {
    const double py = output_density(d, snr, y);
    return py > 0.0 ? -py * std::log(py) : 0.0;
  };
  num::QuadOptions opt;
  opt.abs_tol = abs_tol;
  return num::integrate(f, r.lo, r.hi, opt, r.breaks).value * kBitsPerNat;
}

double conditional_entropy_bits(const InputDistribution& d, double snr) {
  return input_entropy_bits(d) + kHalfLog2PiE - output_entropy_bits(d, snr);
}

double mutual_information_scalar(const InputDistribution& d, double snr, double abs_tol) {
  if (snr == 0.0) return 0.0;
  return std::max(0.0, output_entropy_bits(d, snr, abs_tol) - kHalfLog2PiE);
}

std::vector<std::string> gap_csv_header() { return {"snr", "p", "H", "G1", "G2", "gap", "lower", "exact_MI"}; }

std::vector<std::string> gap_csv_row(const GapBreakdown& g) {
  return {format_number(g.snr), format_number(g.p),     format_number(g.H),
          format_number(g.G1),  format_number(g.G2),    format_number(g.gap),
          format_number(g.lower), g.exact_MI ? format_number(*g.exact_MI) : std::string()};
}

double shaping_loss_bits() { return 0.5 * std::log2(std::numbers::pi * std::numbers::e / 6.0); }

GapBreakdown ow_gap_original(const DiscreteAtoms& d, double snr, OriginalGapVariant v, bool with_exact_mi) {
  if (d.n != 1) throw std::invalid_argument("ow_gap_original: requires n == 1");
  GapBreakdown g;
  g.snr = snr;
  g.p = 2.0;
  g.H = entropy_bits(d);
  if (d.size() < 2) {
    g.label = "original";
    g.gap = 0.0;
    g.lower = g.H;
    if (with_exact_mi) g.exact_MI = 0.0;
    return g;
  }
  const DistanceStats st = distance_stats(d);
  double err;
  if (v == OriginalGapVariant::lmmse) {
    const double var = per_dim_variance(d);
    err = var / (1.0 + var * snr);
    g.label = "original_lmmse";
  } else {
    err = mmpe_scalar(d, snr, 2.0).value;
    g.label = "original_mmse";
  }
  g.G2 = shaping_loss_bits();
  g.G1 = 0.5 * std::log2(1.0 + err / (st.d_min * st.d_min));
  g.G1_triangle = g.G1;
  g.gap = g.G1 + g.G2;
  g.lower = std::max(g.H - g.gap, 0.0);
  if (with_exact_mi) g.exact_MI = mutual_information_scalar(d, snr);
  return g;
}

double g2_ball_bits(int n, double p) {
  const double dn = n;
  const double log_u = std::log(uniform_ball_moment(n, p, 1.0)) / p;
  const double he = log_ball_volume(n, 1.0);
  return kBitsPerNat * (log_fano_constant(n, p) + std::log(dn) / p + log_u - he / dn);
}

double g1_ratio(const DiscreteAtoms& d, double snr, double p, double radius, const McSettings& mc, double abs_tol) {
  const double u_norm = uniform_ball_moment(d.n, p, radius);
  if (d.n == 1) {
    const InputDistribution dist = d;
    const double h = radius;
    auto dithered = [&](double w) {
      return (signed_power_antiderivative(w + h, p) - signed_power_antiderivative(w - h, p)) / (2.0 * h);
    };
    const OutputRange rg = output_range(dist, snr);
    auto f = [&](double y) {
      const ScalarPosterior post = posterior_scalar(dist, snr, y);
      const double v = minimize_posterior(post, p).value;
      double acc = 0.0;
      for (std::size_t i = 0; i < post.x.size(); ++i) acc += post.w[i] * dithered(post.x[i] - v);
      return output_density(dist, snr, y) * acc;
    };
    num::QuadOptions opt;
    opt.abs_tol = abs_tol;
    const double e = num::integrate(f, rg.lo, rg.hi, opt, rg.breaks).value;
    return std::pow(e / u_norm, 1.0 / p);
  }
  const InputDistribution dist = d;
  const UniformBall ball{d.n, radius};
  const InputDistribution ud = ball;
  const double a = std::sqrt(snr);
  auto stat = [&](std::span<const double> x, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> y(x.size()), u(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) y[k] = a * x[k] + normal(rng);
    draw_input(ud, rng, u);
    const std::vector<double> v = numeric_vector_estimator(d, snr, p, y);
    double r2 = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double e = u[k] + x[k] - v[k];
      r2 += e * e;
    }
    return std::pow(r2, 0.5 * p) / d.n;
  };
  const MmpeEstimate e = monte_carlo_mean(dist, stat, mc);
  return std::pow(e.value / u_norm, 1.0 / p);
}

double g1_asymptotic_bound(const DistanceStats& st, double snr, double p, int n) {
  const double dn = n;
  const double q = generalized_q(0.5 * dn, snr * st.d_min * st.d_min / 8.0);
  return 1.0 + 2.0 * st.d_max / st.d_min * std::pow((p + dn) / dn * q, 1.0 / p);
}

GapBreakdown ow_gap_generalized(const DiscreteAtoms& d, double snr, double p, const GapOptions& opt) {
  if (!(p > 0.0)) throw std::domain_error("ow_gap_generalized: p must be positive");
  if (d.size() < 2) throw std::invalid_argument("ow_gap_generalized: need at least two atoms");
  const DistanceStats st = distance_stats(d);
  UniformBall u = opt.dither ? *opt.dither : UniformBall{d.n, 0.5 * st.d_min};
  if (u.n != d.n) throw std::invalid_argument("ow_gap_generalized: dither dimension mismatch");
  if (u.radius > 0.5 * st.d_min * (1.0 + 1e-12))
    throw std::invalid_argument("ow_gap_generalized: dither support overlaps across constellation points");
  GapBreakdown g;
  g.label = "generalized";
  g.snr = snr;
  g.p = p;
  g.H = entropy_bits(d);
  g.G2 = g2_ball_bits(d.n, p);
  g.G1 = std::log2(g1_ratio(d, snr, p, u.radius, opt.mc, opt.abs_tol));
  if (p >= 1.0) {
    const double m = d.n == 1 ? mmpe_scalar(d, snr, p).value : mmpe_vector_mc(d, snr, p, opt.mc).value;
    g.G1_triangle = std::log2(1.0 + std::pow(m, 1.0 / p) / std::pow(uniform_ball_moment(d.n, p, u.radius), 1.0 / p));
  } else {
    g.G1_triangle = std::numeric_limits<double>::quiet_NaN();
  }
  g.gap = d.n * (g.G1 + g.G2);
  g.lower = std::max(g.H - g.gap, 0.0);
  if (opt.with_exact_mi && d.n == 1) g.exact_MI = mutual_information_scalar(d, snr);
  return g;
}

}  // namespace mmpe
