#include "mmpe/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mmpe/numerics.hpp"

namespace mmpe {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double weighted_median(const ScalarPosterior& post) {
  std::vector<std::size_t> idx(post.x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return post.x[a] < post.x[b]; });
  double c = 0.0;
  for (std::size_t i : idx) {
    c += post.w[i];
    if (c >= 0.5 - 1e-15) return post.x[i];
  }
  return post.x[idx.back()];
}

double stationarity(const ScalarPosterior& post, double v, double p) {
  const double e = p - 1.0;
  auto g = [v, e](double x) {
    const double r = x - v;
    if (r == 0.0) return 0.0;
    return std::copysign(std::pow(std::abs(r), e), r);
  };
  const double brk[] = {v};
  return posterior_expect(post, g, brk, 1e-15);
}

std::vector<double> posterior_mean_vector(const DiscreteAtoms& d, std::span<const double> w) {
  std::vector<double> m(static_cast<std::size_t>(d.n), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto x = d.atom(i);
    for (std::size_t k = 0; k < m.size(); ++k) m[k] += w[i] * x[k];
  }
  return m;
}

double vector_objective(const DiscreteAtoms& d, std::span<const double> w, double p,
                        std::span<const double> v) {
  double acc = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (w[i] == 0.0) continue;
    const auto x = d.atom(i);
    double r2 = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) r2 += (x[k] - v[k]) * (x[k] - v[k]);
    acc += w[i] * std::pow(r2, 0.5 * p);
  }
  return acc;
}

}  // namespace

EstimatorSpec linear_estimator(double gain, double offset) { return {LinearGain{gain, offset}, 1.0}; }
EstimatorSpec zero_estimator() { return linear_estimator(0.0, 0.0); }
EstimatorSpec conditional_mean_estimator(const InputDistribution& d, double snr) {
  return {ConditionalMean{d, snr}, 1.0};
}
EstimatorSpec optimal_estimator(const InputDistribution& d, double snr, double p) {
  return {NumericPointwise{d, snr, p}, 1.0};
}

double gaussian_estimator(double snr, double y, double sigma2) {
  if (!(snr >= 0.0)) throw std::domain_error("gaussian_estimator: snr must be >= 0");
  return sigma2 * std::sqrt(snr) * y / (1.0 + sigma2 * snr);
}

std::vector<double> gaussian_estimator(double snr, std::span<const double> y, double sigma2) {
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = gaussian_estimator(snr, y[i], sigma2);
  return out;
}

double two_point_estimator(double x1, double x2, double q, double snr, double p, double y) {
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("two_point_estimator: q must be in (0,1)");
  if (p == 1.0) return hard_decision_estimator(x1, x2, q, snr, y);
  if (!(p > 1.0)) throw std::domain_error("two_point_estimator: p < 1 needs the numeric estimator");
  const double s = std::sqrt(snr);
  const double r1 = y - s * x1;
  const double r2 = y - s * x2;
  const double l1 = (std::log(q) - 0.5 * r1 * r1) / (p - 1.0);
  const double l2 = (std::log1p(-q) - 0.5 * r2 * r2) / (p - 1.0);
  // Logistic form of the normalized weight of x1.
  const double w1 = 1.0 / (1.0 + std::exp(l2 - l1));
  const double v = w1 * x1 + (1.0 - w1) * x2;
  return std::clamp(v, std::min(x1, x2), std::max(x1, x2));
}

double hard_decision_estimator(double x1, double x2, double q, double snr, double y) {
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("hard_decision_estimator: q must be in (0,1)");
  const double s = std::sqrt(snr);
  const double log_a = std::log(q) - std::log1p(-q) - 0.5 * snr * (x1 * x1 - x2 * x2) + s * y * (x1 - x2);
  return log_a >= 0.0 ? x1 : x2;
}

PointwiseResult minimize_posterior(const ScalarPosterior& post, double p, const PointwiseSettings& s) {
  if (!(p > 0.0)) throw std::domain_error("pointwise estimator: p must be positive");
  PointwiseResult out;
  out.truncated = post.truncated;
  const bool atoms = post.kind == ScalarPosterior::Kind::atoms;
  const double scale = std::max({1.0, std::abs(post.lo), std::abs(post.hi)});
  if (post.hi <= post.lo) {
    out.value = post.lo;
  } else if (p > 1.0 || (p == 1.0 && !atoms)) {
    if (p == 2.0 && atoms) {
      out.value = std::clamp(post.mean, post.lo, post.hi);
    } else {
      auto d = [&](double v) { return stationarity(post, v, p); };
      out.value = num::decreasing_root(d, post.lo, post.hi, s.x_tol * scale);
    }
  } else if (p == 1.0) {
    out.value = weighted_median(post);
  } else {
    auto obj = [&](double v) { return posterior_p_error(post, v, p); };
    if (atoms && post.x.size() <= s.exhaustive_atoms) {
      double best = std::numeric_limits<double>::infinity();
      for (double x : post.x) {
        const double f = obj(x);
        if (f < best) {
          best = f;
          out.value = x;
        }
      }
    } else {
      out.value = num::minimize_grid(obj, post.lo, post.hi, s.grid, s.x_tol * scale).x;
    }
  }
  out.objective = posterior_p_error(post, out.value, p);
  return out;
}

PointwiseResult numeric_pointwise_estimator(const InputDistribution& d, double snr, double p, double y,
                                            const PointwiseSettings& s) {
  return minimize_posterior(posterior_scalar(d, snr, y), p, s);
}

std::vector<double> minimize_vector_posterior(const DiscreteAtoms& d, std::span<const double> w, double p) {
  if (!(p >= 1.0)) throw std::domain_error("vector estimator: p must be >= 1");
  const auto n = static_cast<std::size_t>(d.n);
  if (d.size() == 1) return {d.atom(0).begin(), d.atom(0).end()};
  if (p == 2.0) return posterior_mean_vector(d, w);
  if (d.size() == 2) {
    // The minimizer lies on the segment joining the two atoms.
    double t;
    if (p == 1.0) {
      t = w[1] > w[0] ? 1.0 : 0.0;
    } else {
      t = 1.0 / (1.0 + std::exp(-(std::log(w[1]) - std::log(w[0])) / (p - 1.0)));
    }
    std::vector<double> v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = d.atom(0)[k] + t * (d.atom(1)[k] - d.atom(0)[k]);
    return v;
  }
  if (d.n > kVectorEstimatorMaxDim)
    throw std::invalid_argument("vector estimator: n > 8 is not supported; use bounds or Monte-Carlo-only paths");

  auto obj = [&](std::span<const double> v) { return vector_objective(d, w, p, v); };
  std::vector<double> mean = posterior_mean_vector(d, w);
  const auto map = static_cast<std::size_t>(std::max_element(w.begin(), w.end()) - w.begin());
  std::vector<double> map_atom(d.atom(map).begin(), d.atom(map).end());
  num::NelderMeadOptions opt;
  opt.initial_step = 0.1;
  num::VecMinResult a = num::nelder_mead(obj, mean, opt);
  num::VecMinResult b = num::nelder_mead(obj, map_atom, opt);
  num::VecMinResult best = a.f <= b.f ? a : b;
  for (int restart = 0; restart < 3; ++restart) {
    opt.initial_step *= 0.1;
    num::VecMinResult r = num::nelder_mead(obj, best.x, opt);
    if (!(r.f < best.f)) break;
    best = r;
  }
  return best.x;
}

std::vector<double> numeric_vector_estimator(const DiscreteAtoms& d, double snr, double p,
                                             std::span<const double> y) {
  if (y.size() != static_cast<std::size_t>(d.n)) throw std::invalid_argument("vector estimator: dimension mismatch");
  const auto w = posterior_weights(d, snr, y);
  return minimize_vector_posterior(d, w, p);
}

double evaluate(const EstimatorSpec& f, double y_in) {
  const double y = f.input_scale * y_in;
  return std::visit(
      Overloaded{[&](const LinearGain& g) { return g.gain * y + g.offset; },
                 [&](const TwoPoint& t) { return two_point_estimator(t.x1, t.x2, t.q, t.snr, t.p, y); },
                 [&](const HardDecision& h) { return hard_decision_estimator(h.x1, h.x2, h.q, h.snr, y); },
                 [&](const ConditionalMean& c) {
                   if (const auto* g = std::get_if<Gaussian>(&c.dist)) return gaussian_estimator(c.snr, y, g->sigma2);
                   return posterior_scalar(c.dist, c.snr, y).mean;
                 },
                 [&](const NumericPointwise& np) { return numeric_pointwise_estimator(np.dist, np.snr, np.p, y).value; }},
      f.rule);
}

std::vector<double> evaluate_vector(const EstimatorSpec& f, std::span<const double> y_in) {
  std::vector<double> y(y_in.begin(), y_in.end());
  for (double& v : y) v *= f.input_scale;
  auto componentwise = [&](auto&& g) {
    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = g(y[i]);
    return out;
  };
  return std::visit(
      Overloaded{[&](const LinearGain& g) { return componentwise([&](double v) { return g.gain * v + g.offset; }); },
                 [&](const TwoPoint& t) {
                   return componentwise([&](double v) { return two_point_estimator(t.x1, t.x2, t.q, t.snr, t.p, v); });
                 },
                 [&](const HardDecision& h) {
                   return componentwise([&](double v) { return hard_decision_estimator(h.x1, h.x2, h.q, h.snr, v); });
                 },
                 [&](const ConditionalMean& c) -> std::vector<double> {
                   if (const auto* g = std::get_if<Gaussian>(&c.dist)) return gaussian_estimator(c.snr, y, g->sigma2);
                   if (const auto* a = std::get_if<DiscreteAtoms>(&c.dist)) {
                     const auto w = posterior_weights(*a, c.snr, y);
                     return posterior_mean_vector(*a, w);
                   }
                   if (y.size() != 1) throw std::invalid_argument("conditional mean: unsupported vector input");
                   return {posterior_scalar(c.dist, c.snr, y[0]).mean};
                 },
                 [&](const NumericPointwise& np) -> std::vector<double> {
                   if (const auto* g = std::get_if<Gaussian>(&np.dist)) {
                     if (np.p < 1.0 && y.size() == 1)
                       return {numeric_pointwise_estimator(np.dist, np.snr, np.p, y[0]).value};
                     return gaussian_estimator(np.snr, y, g->sigma2);
                   }
                   if (const auto* a = std::get_if<DiscreteAtoms>(&np.dist)) {
                     if (a->n == 1) return {numeric_pointwise_estimator(np.dist, np.snr, np.p, y[0]).value};
                     return numeric_vector_estimator(*a, np.snr, np.p, y);
                   }
                   if (y.size() != 1) throw std::invalid_argument("numeric estimator: continuous vector inputs are not supported");
                   return {numeric_pointwise_estimator(np.dist, np.snr, np.p, y[0]).value};
                 }},
      f.rule);
}

}  // namespace mmpe
