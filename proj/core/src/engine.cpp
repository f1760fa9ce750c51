#include "mmpe/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "mmpe/csv.hpp"
#include "mmpe/numerics.hpp"
#include "mmpe/specfun.hpp"

namespace mmpe {
namespace {

MmpeEstimate make_estimate(const InputDistribution& d, double snr, double p, Method m) {
  MmpeEstimate e;
  e.method = m;
  e.dist_id = describe(d);
  e.n = dimension(d);
  e.snr = snr;
  e.p = p;
  return e;
}

void require_scalar(const InputDistribution& d, const char* what) {
  if (dimension(d) != 1) throw std::invalid_argument(std::string(what) + ": requires n == 1");
}

// Integral of p_Y(y) h(post(y), y) over the output range.
num::QuadResult outer_integral(const InputDistribution& d, double snr,
                               const std::function<double(const ScalarPosterior&, double)>& h,
                               double abs_tol) {
  const OutputRange r = output_range(d, snr);
  num::QuadOptions opt;
  opt.abs_tol = abs_tol;
  auto f = [&](double y) {
    const double py = output_density(d, snr, y);
    if (py == 0.0) return 0.0;
    return py * h(posterior_scalar(d, snr, y), y);
  };
  return num::integrate(f, r.lo, r.hi, opt, r.breaks);
}

// Posterior of a*X + b given the same observation.
ScalarPosterior affine_posterior(const ScalarPosterior& post, double a, double b) {
  ScalarPosterior out = post;
  if (post.kind == ScalarPosterior::Kind::atoms) {
    for (double& x : out.x) x = a * x + b;
  } else {
    out.center = a * post.center + b;
    out.precision = post.precision / (a * a);
    out.log_norm = post.log_norm + std::log(std::abs(a));
  }
  out.lo = std::min(a * post.lo + b, a * post.hi + b);
  out.hi = std::max(a * post.lo + b, a * post.hi + b);
  out.mean = a * post.mean + b;
  out.var = a * a * post.var;
  return out;
}

double norm_p(std::span<const double> x, std::span<const double> v, double p) {
  double r2 = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) r2 += (x[k] - v[k]) * (x[k] - v[k]);
  return std::pow(r2, 0.5 * p);
}

}  // namespace

const char* to_string(Method m) {
  switch (m) {
    case Method::closed_form: return "closed_form";
    case Method::quadrature: return "quadrature";
    case Method::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

MmpeEstimate mmpe_gaussian_closed_form(double sigma2, double snr, double p, int n) {
  if (!(p >= 1.0)) throw std::domain_error("gaussian closed form: requires p >= 1");
  if (!(snr >= 0.0)) throw std::domain_error("gaussian closed form: snr must be >= 0");
  const Gaussian g = make_gaussian(sigma2, n);
  MmpeEstimate e = make_estimate(g, snr, p, Method::closed_form);
  e.value = std::pow(sigma2, 0.5 * p) * gaussian_norm_moment(n, p) / std::pow(1.0 + sigma2 * snr, 0.5 * p);
  return e;
}

MmpeEstimate mmpe_scalar(const InputDistribution& d, double snr, double p, const QuadratureSettings& s) {
  require_scalar(d, "mmpe_scalar");
  if (!(snr >= 0.0)) throw std::domain_error("mmpe_scalar: snr must be >= 0");
  MmpeEstimate e = make_estimate(d, snr, p, Method::quadrature);
  if (snr == 0.0) {
    const ScalarPosterior prior = posterior_scalar(d, 0.0, 0.0);
    const PointwiseResult r = minimize_posterior(prior, p, s.pointwise);
    e.value = r.objective;
    e.truncated = r.truncated;
    return e;
  }
  bool truncated = false;
  const num::QuadResult q = outer_integral(
      d, snr,
      [&](const ScalarPosterior& post, double) {
        const PointwiseResult r = minimize_posterior(post, p, s.pointwise);
        truncated = truncated || r.truncated;
        return r.objective;
      },
      s.abs_tol);
  e.value = q.value;
  e.quad_error = q.error;
  e.truncated = truncated;
  return e;
}

MmpeEstimate monte_carlo_mean(const InputDistribution& d, const SampleStatistic& stat, const McSettings& s) {
  if (s.samples == 0 || s.batch == 0) throw std::invalid_argument("monte carlo: samples and batch must be positive");
  const std::size_t nb = (s.samples + s.batch - 1) / s.batch;
  const auto n = static_cast<std::size_t>(dimension(d));
  std::vector<double> sums(nb, 0.0);
  std::vector<double> m2(nb, 0.0);  // within-batch sum of squared deviations
  std::vector<std::size_t> counts(nb, 0);
  auto run = [&](unsigned w, unsigned workers) {
    std::vector<double> x(n);
    std::vector<double> vals;
    for (std::size_t b = w; b < nb; b += workers) {
      Rng rng(num::derive_seed(s.seed, b));
      const std::size_t m = std::min(s.batch, s.samples - b * s.batch);
      vals.resize(m);
      for (std::size_t i = 0; i < m; ++i) {
        draw_input(d, rng, x);
        vals[i] = stat(x, rng);
      }
      sums[b] = num::pairwise_sum(vals);
      counts[b] = m;
      const double mb = sums[b] / static_cast<double>(m);
      for (double& v : vals) v = (v - mb) * (v - mb);
      m2[b] = num::pairwise_sum(vals);
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(s.workers, static_cast<unsigned>(nb)));
  if (workers == 1) {
    run(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w, workers);
    for (auto& t : pool) t.join();
  }
  MmpeEstimate e;
  e.method = Method::monte_carlo;
  e.dist_id = describe(d);
  e.n = static_cast<int>(n);
  e.seed = s.seed;
  e.samples = s.samples;
  e.value = num::pairwise_sum(sums) / static_cast<double>(s.samples);
  if (s.samples > 1) {
    std::vector<double> dev(nb);
    for (std::size_t b = 0; b < nb; ++b) {
      const double mb = sums[b] / static_cast<double>(counts[b]);
      dev[b] = m2[b] + static_cast<double>(counts[b]) * (mb - e.value) * (mb - e.value);
    }
    const double var = num::pairwise_sum(dev) / static_cast<double>(s.samples - 1);
    e.std_error = std::sqrt(var / static_cast<double>(s.samples));
  }
  return e;
}

MmpeEstimate p_error_of_mc(const EstimatorSpec& f, const InputDistribution& d, double snr, double p,
                           const McSettings& s) {
  const int n = dimension(d);
  const double a = std::sqrt(snr);
  auto stat = [&](std::span<const double> x, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> y(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) y[k] = a * x[k] + normal(rng);
    const std::vector<double> v = evaluate_vector(f, y);
    return norm_p(x, v, p) / n;
  };
  MmpeEstimate e = monte_carlo_mean(d, stat, s);
  e.snr = snr;
  e.p = p;
  return e;
}

MmpeEstimate mmpe_vector_mc(const InputDistribution& d, double snr, double p, const McSettings& s) {
  if (std::holds_alternative<UniformBall>(d) && dimension(d) > 1)
    throw std::invalid_argument("mmpe_vector_mc: continuous non-Gaussian vector inputs are not supported");
  if (const auto* a = std::get_if<DiscreteAtoms>(&d))
    if (a->n > kVectorEstimatorMaxDim && a->size() > 2)
      throw std::invalid_argument("mmpe_vector_mc: n > 8 exceeds the numeric estimator cap; use bounds");
  return p_error_of_mc(optimal_estimator(d, snr, p), d, snr, p, s);
}

MmpeEstimate mmpe(const InputDistribution& d, double snr, double p, const QuadratureSettings& q,
                  const McSettings& mc) {
  if (const auto* g = std::get_if<Gaussian>(&d); g && p >= 1.0) {
    MmpeEstimate e = mmpe_gaussian_closed_form(g->sigma2, snr, p, g->n);
    return e;
  }
  if (dimension(d) == 1) return mmpe_scalar(d, snr, p, q);
  return mmpe_vector_mc(d, snr, p, mc);
}

double p_error_of(const EstimatorSpec& f, const InputDistribution& d, double snr, double p, double abs_tol) {
  require_scalar(d, "p_error_of");
  return outer_integral(
             d, snr, [&](const ScalarPosterior& post, double y) { return posterior_p_error(post, evaluate(f, y), p); },
             abs_tol)
      .value;
}

ConditionalMmpe conditional_mmpe(const InputDistribution& d, double snr0, double p, double delta,
                                 const McSettings& s, const QuadratureSettings& q) {
  if (!(delta >= 0.0)) throw std::domain_error("conditional_mmpe: side snr must be >= 0");
  ConditionalMmpe out;
  out.combined = mmpe(d, snr0 + delta, p, q, s);
  const int n = dimension(d);
  const double a0 = std::sqrt(snr0);
  const double a1 = std::sqrt(delta);
  SampleStatistic stat;
  if (const auto* atoms = std::get_if<DiscreteAtoms>(&d)) {
    stat = [&, atoms](std::span<const double> x, Rng& rng) {
      std::normal_distribution<double> normal(0.0, 1.0);
      std::vector<double> y(x.size()), u(x.size());
      for (std::size_t k = 0; k < x.size(); ++k) y[k] = a0 * x[k] + normal(rng);
      for (std::size_t k = 0; k < x.size(); ++k) u[k] = a1 * x[k] + normal(rng);
      const std::pair<double, std::span<const double>> obs[] = {{snr0, y}, {delta, u}};
      const std::vector<double> w = posterior_weights_multi(*atoms, obs);
      std::vector<double> v;
      if (n == 1) {
        ScalarPosterior post;
        post.x = atoms->points;
        post.w = w;
        for (std::size_t i = 0; i < w.size(); ++i) post.mean += w[i] * post.x[i];
        post.lo = *std::min_element(post.x.begin(), post.x.end());
        post.hi = *std::max_element(post.x.begin(), post.x.end());
        v = {minimize_posterior(post, p).value};
      } else {
        v = minimize_vector_posterior(*atoms, w, p);
      }
      return norm_p(x, v, p) / n;
    };
  } else if (const auto* g = std::get_if<Gaussian>(&d)) {
    if (p < 1.0) throw std::domain_error("conditional_mmpe: Gaussian raw path needs p >= 1");
    const double s2 = g->sigma2;
    stat = [&, s2](std::span<const double> x, Rng& rng) {
      std::normal_distribution<double> normal(0.0, 1.0);
      std::vector<double> v(x.size());
      std::vector<double> y(x.size()), u(x.size());
      for (std::size_t k = 0; k < x.size(); ++k) y[k] = a0 * x[k] + normal(rng);
      for (std::size_t k = 0; k < x.size(); ++k) u[k] = a1 * x[k] + normal(rng);
      for (std::size_t k = 0; k < x.size(); ++k)
        v[k] = s2 * (a0 * y[k] + a1 * u[k]) / (1.0 + s2 * (snr0 + delta));
      return norm_p(x, v, p) / n;
    };
  } else {
    throw std::invalid_argument("conditional_mmpe: raw two-observation path supports atoms and Gaussian inputs");
  }
  out.raw_mc = monte_carlo_mean(d, stat, s);
  out.raw_mc.snr = snr0 + delta;
  out.raw_mc.p = p;
  return out;
}

double change_of_measure_eval(const InputDistribution& d, double snr, double snr0, double p,
                              const EstimatorSpec& f, double abs_tol) {
  require_scalar(d, "change_of_measure_eval");
  if (!(snr > 0.0) || snr > snr0) throw std::domain_error("change_of_measure_eval: requires 0 < snr <= snr0");
  const double a0 = std::sqrt(snr0);
  // phi(z) times the weight is the N(0, snr0/snr) density.
  const double sd = std::sqrt(snr0 / snr);
  auto inner = [&](double x, double tol) {
    auto h = [&](double z) {
      const double t = z / sd;
      const double dens = std::exp(-0.5 * t * t) / (sd * std::sqrt(2.0 * std::numbers::pi));
      return dens * std::pow(std::abs(x - evaluate(f, a0 * x + z)), p);
    };
    const double brk[] = {0.0};
    return num::integrate_value(h, -12.0 * sd, 12.0 * sd, tol, brk);
  };
  if (const auto* atoms = std::get_if<DiscreteAtoms>(&d)) {
    double acc = 0.0;
    for (std::size_t i = 0; i < atoms->size(); ++i) acc += atoms->probs[i] * inner(atoms->points[i], abs_tol);
    return acc;
  }
  if (const auto* t = std::get_if<TabulatedPdf>(&d)) {
    double acc = 0.0;
    for (std::size_t i = 0; i < t->grid.size(); ++i)
      if (t->weights[i] > 0.0) acc += t->weights[i] * inner(t->grid[i], abs_tol);
    return acc;
  }
  double lo, hi;
  std::function<double(double)> px;
  if (const auto* g = std::get_if<Gaussian>(&d)) {
    const double sx = std::sqrt(g->sigma2);
    lo = -10.0 * sx;
    hi = 10.0 * sx;
    px = [sx](double x) { return std::exp(-0.5 * x * x / (sx * sx)) / (sx * std::sqrt(2.0 * std::numbers::pi)); };
  } else {
    const auto& b = std::get<UniformBall>(d);
    lo = -b.radius;
    hi = b.radius;
    px = [r = b.radius](double) { return 0.5 / r; };
  }
  const double brk[] = {0.0};
  return num::integrate_value([&](double x) { return px(x) * inner(x, 0.1 * abs_tol); }, lo, hi, abs_tol, brk);
}

MmpeEstimate change_of_measure_mc(const InputDistribution& d, double snr, double snr0, double p,
                                  const EstimatorSpec& f, const McSettings& s) {
  if (!(snr > 0.0) || snr > snr0) throw std::domain_error("change_of_measure_mc: requires 0 < snr <= snr0");
  const int n = dimension(d);
  const double a0 = std::sqrt(snr0);
  const double c = (snr0 - snr) / (2.0 * snr0);
  const double log_pre = 0.5 * n * std::log(snr / snr0);
  auto stat = [&](std::span<const double> x, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> y(x.size());
    double z2 = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double z = normal(rng);
      z2 += z * z;
      y[k] = a0 * x[k] + z;
    }
    const std::vector<double> v = evaluate_vector(f, y);
    return std::exp(log_pre + c * z2) * norm_p(x, v, p) / n;
  };
  MmpeEstimate e = monte_carlo_mean(d, stat, s);
  e.snr = snr;
  e.p = p;
  return e;
}

EstimatorSpec change_of_measure_optimal(const InputDistribution& d, double snr, double snr0, double p) {
  if (!(snr > 0.0) || snr > snr0) throw std::domain_error("change_of_measure_optimal: requires 0 < snr <= snr0");
  EstimatorSpec f = optimal_estimator(d, snr, p);
  f.input_scale = std::sqrt(snr / snr0);
  return f;
}

std::vector<NamedG> default_g_family() {
  return {{"1", [](double) { return 1.0; }},
          {"y", [](double y) { return y; }},
          {"y^2", [](double y) { return y * y; }},
          {"sin(y)", [](double y) { return std::sin(y); }},
          {"tanh(y)", [](double y) { return std::tanh(y); }}};
}

ResidualTable diagnostics_residuals(const InputDistribution& d, double snr, double p,
                                    const std::vector<NamedG>& family, double abs_tol) {
  require_scalar(d, "diagnostics_residuals");
  ResidualTable t;
  auto weighted = [p](double w) {
    if (w == 0.0) return 0.0;
    return std::copysign(std::pow(std::abs(w), p - 1.0), w);
  };
  for (const auto& g : family) {
    const double v = outer_integral(
                         d, snr,
                         [&](const ScalarPosterior& post, double y) {
                           const double f = minimize_posterior(post, p).value;
                           const double brk[] = {f};
                           return g.g(y) * posterior_expect(post, [&](double x) { return weighted(x - f); }, brk, 1e-15);
                         },
                         abs_tol)
                         .value;
    t.orthogonality.emplace_back(g.name, v);
  }
  t.classical = outer_integral(
                    d, snr,
                    [&](const ScalarPosterior& post, double y) {
                      const double f = minimize_posterior(post, p).value;
                      return y * (post.mean - f);
                    },
                    abs_tol)
                    .value;
  t.bias = outer_integral(
               d, snr,
               [&](const ScalarPosterior& post, double) {
                 const double f = minimize_posterior(post, p).value;
                 return post.mean - f;
               },
               abs_tol)
               .value;
  return t;
}

double noise_mmpe_scalar(const InputDistribution& d, double snr, double p, double abs_tol) {
  require_scalar(d, "noise_mmpe_scalar");
  if (snr == 0.0) return 0.0;
  const double a = std::sqrt(snr);
  return outer_integral(
             d, snr,
             [&](const ScalarPosterior& post, double y) {
               return minimize_posterior(affine_posterior(post, -a, y), p).objective;
             },
             abs_tol)
      .value;
}

MmpeEstimate noise_mmpe_mc(const InputDistribution& d, double snr, double p, const McSettings& s) {
  require_scalar(d, "noise_mmpe_mc");
  const double a = std::sqrt(snr);
  auto stat = [&](std::span<const double> x, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const double z = normal(rng);
    const double y = a * x[0] + z;
    const ScalarPosterior pz = affine_posterior(posterior_scalar(d, snr, y), -a, y);
    const double v = minimize_posterior(pz, p).value;
    return std::pow(std::abs(z - v), p);
  };
  MmpeEstimate e = monte_carlo_mean(d, stat, s);
  e.snr = snr;
  e.p = p;
  return e;
}

MmpeEstimate posterior_cov_sq(const InputDistribution& d, double snr, const McSettings& s) {
  const int n = dimension(d);
  if (const auto* g = std::get_if<Gaussian>(&d)) {
    MmpeEstimate e = make_estimate(d, snr, 2.0, Method::closed_form);
    const double v = g->sigma2 / (1.0 + g->sigma2 * snr);
    e.value = v * v;
    return e;
  }
  const double a = std::sqrt(snr);
  SampleStatistic stat;
  if (const auto* atoms = std::get_if<DiscreteAtoms>(&d)) {
    stat = [&, atoms](std::span<const double> x, Rng& rng) {
      std::normal_distribution<double> normal(0.0, 1.0);
      std::vector<double> y(x.size());
      for (std::size_t k = 0; k < x.size(); ++k) y[k] = a * x[k] + normal(rng);
      const auto w = posterior_weights(*atoms, snr, y);
      const auto nn = static_cast<std::size_t>(n);
      std::vector<double> m(nn, 0.0);
      for (std::size_t i = 0; i < atoms->size(); ++i)
        for (std::size_t k = 0; k < nn; ++k) m[k] += w[i] * atoms->atom(i)[k];
      std::vector<double> cov(nn * nn, 0.0);
      for (std::size_t i = 0; i < atoms->size(); ++i) {
        const auto xi = atoms->atom(i);
        for (std::size_t j = 0; j < nn; ++j)
          for (std::size_t k = 0; k < nn; ++k) cov[j * nn + k] += w[i] * (xi[j] - m[j]) * (xi[k] - m[k]);
      }
      double tr = 0.0;
      for (double c : cov) tr += c * c;
      return tr / n;
    };
  } else {
    require_scalar(d, "posterior_cov_sq");
    stat = [&](std::span<const double> x, Rng& rng) {
      std::normal_distribution<double> normal(0.0, 1.0);
      const double y = a * x[0] + normal(rng);
      const double v = posterior_scalar(d, snr, y).var;
      return v * v;
    };
  }
  MmpeEstimate e = monte_carlo_mean(d, stat, s);
  e.snr = snr;
  e.p = 2.0;
  return e;
}

double posterior_cov_sq_scalar(const InputDistribution& d, double snr, double abs_tol) {
  require_scalar(d, "posterior_cov_sq_scalar");
  if (snr == 0.0) {
    const double v = posterior_scalar(d, 0.0, 0.0).var;
    return v * v;
  }
  return outer_integral(d, snr, [](const ScalarPosterior& post, double) { return post.var * post.var; }, abs_tol)
      .value;
}

std::vector<std::string> mmpe_csv_header() {
  return {"dist_id", "n", "snr", "p", "method", "value", "stderr", "seed"};
}

std::vector<std::string> mmpe_csv_row(const MmpeEstimate& e) {
  return {e.dist_id,
          format_number(static_cast<long long>(e.n)),
          format_number(e.snr),
          format_number(e.p),
          to_string(e.method),
          format_number(e.value),
          format_number(e.std_error),
          e.method == Method::monte_carlo ? format_number(static_cast<long long>(e.seed)) : std::string()};
}

}  // namespace mmpe
