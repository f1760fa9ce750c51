#include "mmpe/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "mmpe/numerics.hpp"
#include "mmpe/specfun.hpp"

namespace mmpe {
namespace {

constexpr double kProbTol = 1e-12;
constexpr double kTruncStd = 10.0;
constexpr double kOutputPad = 10.0;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double log_sum_exp(std::span<const double> v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

void softmax_inplace(std::vector<double>& v) {
  const double lse = log_sum_exp(v);
  for (double& x : v) x = std::exp(x - lse);
  const double s = num::pairwise_sum(v);
  for (double& x : v) x /= s;
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }
double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

ScalarPosterior atoms_posterior(std::span<const double> xs, std::span<const double> prior,
                                double snr, double y) {
  ScalarPosterior post;
  post.kind = ScalarPosterior::Kind::atoms;
  post.x.assign(xs.begin(), xs.end());
  post.w.resize(xs.size());
  const double s = std::sqrt(snr);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = y - s * xs[i];
    post.w[i] = prior[i] > 0.0 ? std::log(prior[i]) - 0.5 * r * r
                               : -std::numeric_limits<double>::infinity();
  }
  softmax_inplace(post.w);
  double m = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) m += post.w[i] * xs[i];
  double v = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) v += post.w[i] * (xs[i] - m) * (xs[i] - m);
  post.mean = m;
  post.var = v;
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  post.lo = *lo;
  post.hi = *hi;
  return post;
}

ScalarPosterior truncated_gaussian_posterior(double c, double lambda, double lo, double hi) {
  ScalarPosterior post;
  post.kind = ScalarPosterior::Kind::gaussian;
  post.lo = lo;
  post.hi = hi;
  post.center = c;
  post.precision = lambda;
  const double xs = std::clamp(c, lo, hi);
  const double base = lambda * (xs - c) * (xs - c);
  auto rho = [=](double x) { return std::exp(-0.5 * (lambda * (x - c) * (x - c) - base)); };
  const double brk[] = {xs};
  const double z = num::integrate_value(rho, lo, hi, 1e-14 * (hi - lo), brk);
  post.log_norm = std::log(z) - 0.5 * base;
  const double m = num::integrate_value([&](double x) { return x * rho(x); }, lo, hi, 1e-14, brk) / z;
  const double v =
      num::integrate_value([&](double x) { return (x - m) * (x - m) * rho(x); }, lo, hi, 1e-14, brk) / z;
  post.mean = m;
  post.var = v;
  return post;
}

}  // namespace

Gaussian make_gaussian(double sigma2, int n) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
    throw std::invalid_argument("gaussian: variance must be positive");
  if (n < 1) throw std::invalid_argument("gaussian: n must be >= 1");
  return {n, sigma2};
}

DiscreteAtoms make_atoms(const std::vector<std::vector<double>>& points,
                         const std::vector<double>& probs) {
  if (points.empty()) throw std::invalid_argument("atoms: empty atom list");
  if (points.size() != probs.size())
    throw std::invalid_argument("atoms: points and probabilities differ in length");
  const std::size_t n = points.front().size();
  if (n == 0) throw std::invalid_argument("atoms: zero-dimensional atom");
  DiscreteAtoms d;
  d.n = static_cast<int>(n);
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != n) throw std::invalid_argument("atoms: inconsistent dimension");
    for (double v : points[i])
      if (!std::isfinite(v)) throw std::invalid_argument("atoms: non-finite coordinate");
    if (!(probs[i] > 0.0)) throw std::invalid_argument("atoms: probabilities must be positive");
    total += probs[i];
  }
  if (std::abs(total - 1.0) > kProbTol)
    throw std::invalid_argument("atoms: probabilities do not sum to 1");
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (points[i] == points[j]) throw std::invalid_argument("atoms: duplicate atom");
  for (const auto& pt : points) d.points.insert(d.points.end(), pt.begin(), pt.end());
  d.probs = probs;
  for (double& p : d.probs) p /= total;
  return d;
}

DiscreteAtoms make_scalar_atoms(const std::vector<double>& xs, const std::vector<double>& probs) {
  std::vector<std::vector<double>> pts;
  pts.reserve(xs.size());
  for (double x : xs) pts.push_back({x});
  return make_atoms(pts, probs);
}

DiscreteAtoms make_uniform_pam(int points, double spacing) {
  if (points < 1) throw std::invalid_argument("pam: need at least one point");
  if (!(spacing > 0.0)) throw std::invalid_argument("pam: spacing must be positive");
  std::vector<double> xs(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) xs[static_cast<std::size_t>(i)] = (i - 0.5 * (points - 1)) * spacing;
  DiscreteAtoms d;
  d.n = 1;
  d.points = xs;
  d.probs.assign(xs.size(), 1.0 / points);
  return d;
}

DiscreteAtoms make_pm_one_vector(int n) {
  if (n < 1) throw std::invalid_argument("pmone_vector: n must be >= 1");
  return make_atoms({std::vector<double>(static_cast<std::size_t>(n), 1.0),
                     std::vector<double>(static_cast<std::size_t>(n), -1.0)},
                    {0.5, 0.5});
}

UniformBall make_uniform_ball(int n, double radius) {
  if (n < 1) throw std::invalid_argument("uniform_ball: n must be >= 1");
  if (!(radius > 0.0)) throw std::invalid_argument("uniform_ball: radius must be positive");
  return {n, radius};
}

TabulatedPdf make_tabulated(std::vector<double> grid, std::vector<double> density) {
  if (grid.size() != density.size())
    throw std::invalid_argument("tabulated: grid and density differ in length");
  if (grid.size() < kMinTabulatedPoints)
    throw std::invalid_argument("tabulated: grid needs at least 64 points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || !std::isfinite(density[i]) || density[i] < 0.0)
      throw std::invalid_argument("tabulated: invalid grid value or negative density");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw std::invalid_argument("tabulated: grid must be strictly increasing");
  }
  TabulatedPdf t;
  t.weights.assign(grid.size(), 0.0);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double h = grid[i + 1] - grid[i];
    t.weights[i] += 0.5 * h * density[i];
    t.weights[i + 1] += 0.5 * h * density[i + 1];
  }
  const double mass = num::pairwise_sum(t.weights);
  if (!(mass > 0.0)) throw std::invalid_argument("tabulated: density has zero mass");
  for (double& w : t.weights) w /= mass;
  for (double& v : density) v /= mass;
  t.grid = std::move(grid);
  t.density = std::move(density);
  return t;
}

TabulatedPdf tabulate_uniform_interval(double lo, double hi, std::size_t points) {
  if (!(hi > lo)) throw std::invalid_argument("uniform interval: hi must exceed lo");
  std::vector<double> g(points), d(points, 1.0 / (hi - lo));
  for (std::size_t i = 0; i < points; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  return make_tabulated(std::move(g), std::move(d));
}

int dimension(const InputDistribution& d) {
  return std::visit(Overloaded{[](const Gaussian& g) { return g.n; },
                               [](const DiscreteAtoms& a) { return a.n; },
                               [](const UniformBall& b) { return b.n; },
                               [](const TabulatedPdf&) { return 1; }},
                    d);
}

bool is_discrete(const InputDistribution& d) { return std::holds_alternative<DiscreteAtoms>(d); }

std::string describe(const InputDistribution& d) {
  std::ostringstream os;
  std::visit(Overloaded{[&](const Gaussian& g) { os << "gaussian(n=" << g.n << ",sigma2=" << g.sigma2 << ")"; },
                        [&](const DiscreteAtoms& a) { os << "atoms(n=" << a.n << ",N=" << a.size() << ")"; },
                        [&](const UniformBall& b) { os << "uniform_ball(n=" << b.n << ",r=" << b.radius << ")"; },
                        [&](const TabulatedPdf& t) { os << "tabulated(points=" << t.grid.size() << ")"; }},
             d);
  return os.str();
}

double norm_moment(const InputDistribution& d, double p) {
  if (!(p > 0.0)) throw std::domain_error("norm_moment: p must be positive");
  return std::visit(
      Overloaded{[&](const Gaussian& g) { return std::pow(g.sigma2, 0.5 * p) * gaussian_norm_moment(g.n, p); },
                 [&](const DiscreteAtoms& a) {
                   double s = 0.0;
                   for (std::size_t i = 0; i < a.size(); ++i) {
                     double r2 = 0.0;
                     for (double v : a.atom(i)) r2 += v * v;
                     s += a.probs[i] * std::pow(r2, 0.5 * p);
                   }
                   return s / a.n;
                 },
                 [&](const UniformBall& b) { return uniform_ball_moment(b.n, p, b.radius); },
                 [&](const TabulatedPdf& t) {
                   double s = 0.0;
                   for (std::size_t i = 0; i < t.grid.size(); ++i) s += t.weights[i] * std::pow(std::abs(t.grid[i]), p);
                   return s;
                 }},
      d);
}

double scalar_mean(const InputDistribution& d) {
  return std::visit(Overloaded{[](const Gaussian&) { return 0.0; },
                               [](const DiscreteAtoms& a) {
                                 double m = 0.0;
                                 for (std::size_t i = 0; i < a.size(); ++i) m += a.probs[i] * a.atom(i)[0];
                                 return m;
                               },
                               [](const UniformBall&) { return 0.0; },
                               [](const TabulatedPdf& t) {
                                 double m = 0.0;
                                 for (std::size_t i = 0; i < t.grid.size(); ++i) m += t.weights[i] * t.grid[i];
                                 return m;
                               }},
                    d);
}

double per_dim_variance(const InputDistribution& d) {
  return std::visit(Overloaded{[](const Gaussian& g) { return g.sigma2; },
                               [](const DiscreteAtoms& a) {
                                 const auto n = static_cast<std::size_t>(a.n);
                                 std::vector<double> m(n, 0.0);
                                 for (std::size_t i = 0; i < a.size(); ++i)
                                   for (std::size_t k = 0; k < n; ++k) m[k] += a.probs[i] * a.atom(i)[k];
                                 double v = 0.0;
                                 for (std::size_t i = 0; i < a.size(); ++i)
                                   for (std::size_t k = 0; k < n; ++k) {
                                     const double r = a.atom(i)[k] - m[k];
                                     v += a.probs[i] * r * r;
                                   }
                                 return v / a.n;
                               },
                               [](const UniformBall& b) { return uniform_ball_moment(b.n, 2.0, b.radius); },
                               [](const TabulatedPdf& t) {
                                 double m = 0.0;
                                 for (std::size_t i = 0; i < t.grid.size(); ++i) m += t.weights[i] * t.grid[i];
                                 double v = 0.0;
                                 for (std::size_t i = 0; i < t.grid.size(); ++i)
                                   v += t.weights[i] * (t.grid[i] - m) * (t.grid[i] - m);
                                 return v;
                               }},
                    d);
}

double scalar_variance(const InputDistribution& d) {
  if (dimension(d) != 1) throw std::invalid_argument("scalar_variance: n must be 1");
  return per_dim_variance(d);
}

SupportRange scalar_support(const InputDistribution& d) {
  if (dimension(d) != 1) throw std::invalid_argument("scalar_support: n must be 1");
  return std::visit(Overloaded{[](const Gaussian& g) {
                                 const double s = kTruncStd * std::sqrt(g.sigma2);
                                 return SupportRange{-s, s, false};
                               },
                               [](const DiscreteAtoms& a) {
                                 const auto [lo, hi] = std::minmax_element(a.points.begin(), a.points.end());
                                 return SupportRange{*lo, *hi, true};
                               },
                               [](const UniformBall& b) { return SupportRange{-b.radius, b.radius, true}; },
                               [](const TabulatedPdf& t) { return SupportRange{t.grid.front(), t.grid.back(), true}; }},
                    d);
}

void ChannelConfig::validate() const {
  if (n < 1) throw std::invalid_argument("channel: n must be >= 1");
  if (!(snr >= 0.0) || !std::isfinite(snr)) throw std::invalid_argument("channel: snr must be >= 0");
}

void draw_input(const InputDistribution& d, Rng& rng, std::span<double> out) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::visit(Overloaded{[&](const Gaussian& g) {
                          const double s = std::sqrt(g.sigma2);
                          for (double& v : out) v = s * normal(rng);
                        },
                        [&](const DiscreteAtoms& a) {
                          const double u = unif(rng);
                          double c = 0.0;
                          std::size_t k = a.size() - 1;
                          for (std::size_t i = 0; i < a.size(); ++i) {
                            c += a.probs[i];
                            if (u < c) {
                              k = i;
                              break;
                            }
                          }
                          const auto at = a.atom(k);
                          std::copy(at.begin(), at.end(), out.begin());
                        },
                        [&](const UniformBall& b) {
                          double r2 = 0.0;
                          for (double& v : out) {
                            v = normal(rng);
                            r2 += v * v;
                          }
                          const double scale = b.radius * std::pow(unif(rng), 1.0 / b.n) / std::sqrt(r2);
                          for (double& v : out) v *= scale;
                        },
                        [&](const TabulatedPdf& t) {
                          const double u = unif(rng);
                          const std::size_t m = t.grid.size() - 1;
                          double c = 0.0;
                          std::size_t k = m - 1;
                          for (std::size_t i = 0; i < m; ++i) {
                            const double mass = 0.5 * (t.grid[i + 1] - t.grid[i]) * (t.density[i] + t.density[i + 1]);
                            if (u < c + mass) {
                              k = i;
                              break;
                            }
                            c += mass;
                          }
                          const double a0 = t.density[k], a1 = t.density[k + 1];
                          const double v = unif(rng);
                          double s;
                          if (std::abs(a1 - a0) < 1e-14 * std::max(a0, a1)) {
                            s = v;
                          } else {
                            const double target = v * 0.5 * (a0 + a1);
                            s = (-a0 + std::sqrt(a0 * a0 + 2.0 * (a1 - a0) * target)) / (a1 - a0);
                          }
                          out[0] = t.grid[k] + s * (t.grid[k + 1] - t.grid[k]);
                        }},
             d);
}

ChannelSamples sample_channel(const InputDistribution& d, const ChannelConfig& ch,
                              std::size_t count, std::uint64_t seed) {
  ch.validate();
  if (count < 1) throw std::invalid_argument("sample_channel: count must be >= 1");
  if (dimension(d) != ch.n) throw std::invalid_argument("sample_channel: dimension mismatch");
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ChannelSamples s;
  s.n = ch.n;
  const auto n = static_cast<std::size_t>(ch.n);
  s.x.resize(count * n);
  s.y.resize(count * n);
  const double a = std::sqrt(ch.snr);
  for (std::size_t i = 0; i < count; ++i) {
    std::span<double> xi(s.x.data() + i * n, n);
    draw_input(d, rng, xi);
    for (std::size_t k = 0; k < n; ++k) s.y[i * n + k] = a * xi[k] + normal(rng);
  }
  return s;
}

double ScalarPosterior::density(double x) const {
  if (kind != Kind::gaussian || x < lo || x > hi) return 0.0;
  const double r = x - center;
  return std::exp(-0.5 * precision * r * r - log_norm);
}

ScalarPosterior posterior_scalar(const InputDistribution& d, double snr, double y) {
  if (dimension(d) != 1) throw std::invalid_argument("posterior_scalar: n must be 1");
  if (!(snr >= 0.0)) throw std::invalid_argument("posterior_scalar: snr must be >= 0");
  return std::visit(
      Overloaded{[&](const Gaussian& g) {
                   const double s = std::sqrt(snr);
                   ScalarPosterior p;
                   p.kind = ScalarPosterior::Kind::gaussian;
                   p.var = g.sigma2 / (1.0 + g.sigma2 * snr);
                   p.mean = g.sigma2 * s * y / (1.0 + g.sigma2 * snr);
                   const double sd = std::sqrt(p.var);
                   p.lo = p.mean - kTruncStd * sd;
                   p.hi = p.mean + kTruncStd * sd;
                   p.center = p.mean;
                   p.precision = 1.0 / p.var;
                   p.log_norm = 0.5 * std::log(2.0 * std::numbers::pi * p.var) +
                                std::log1p(-2.0 * gaussian_q(kTruncStd));
                   p.truncated = true;
                   return p;
                 },
                 [&](const DiscreteAtoms& a) { return atoms_posterior(a.points, a.probs, snr, y); },
                 [&](const UniformBall& b) {
                   if (snr == 0.0) return truncated_gaussian_posterior(0.0, 0.0, -b.radius, b.radius);
                   return truncated_gaussian_posterior(y / std::sqrt(snr), snr, -b.radius, b.radius);
                 },
                 [&](const TabulatedPdf& t) { return atoms_posterior(t.grid, t.weights, snr, y); }},
      d);
}

double posterior_expect(const ScalarPosterior& post, const std::function<double(double)>& g,
                        std::span<const double> breaks, double abs_tol) {
  if (post.kind == ScalarPosterior::Kind::atoms) {
    double acc = 0.0;
    for (std::size_t i = 0; i < post.x.size(); ++i)
      if (post.w[i] > 0.0) acc += post.w[i] * g(post.x[i]);
    return acc;
  }
  std::vector<double> brk(breaks.begin(), breaks.end());
  brk.push_back(std::clamp(post.center, post.lo, post.hi));
  num::QuadOptions opt;
  opt.abs_tol = abs_tol;
  return num::integrate([&](double x) { return g(x) * post.density(x); }, post.lo, post.hi, opt, brk).value;
}

double posterior_p_error(const ScalarPosterior& post, double v, double p) {
  if (post.kind == ScalarPosterior::Kind::atoms) {
    double acc = 0.0;
    for (std::size_t i = 0; i < post.x.size(); ++i) acc += post.w[i] * std::pow(std::abs(post.x[i] - v), p);
    return acc;
  }
  const double brk[] = {v};
  return posterior_expect(post, [v, p](double x) { return std::pow(std::abs(x - v), p); }, brk);
}

std::vector<double> posterior_weights(const DiscreteAtoms& d, double snr, std::span<const double> y) {
  const std::pair<double, std::span<const double>> obs[] = {{snr, y}};
  return posterior_weights_multi(d, obs);
}

std::vector<double> posterior_weights_multi(const DiscreteAtoms& d,
                                            std::span<const std::pair<double, std::span<const double>>> obs) {
  std::vector<double> lw(d.size());
  const auto n = static_cast<std::size_t>(d.n);
  for (std::size_t i = 0; i < d.size(); ++i) {
    double l = std::log(d.probs[i]);
    const auto x = d.atom(i);
    for (const auto& [snr, y] : obs) {
      const double s = std::sqrt(snr);
      for (std::size_t k = 0; k < n; ++k) {
        const double r = y[k] - s * x[k];
        l -= 0.5 * r * r;
      }
    }
    lw[i] = l;
  }
  softmax_inplace(lw);
  return lw;
}

double output_density(const InputDistribution& d, double snr, double y) {
  if (dimension(d) != 1) throw std::invalid_argument("output_density: n must be 1");
  const double s = std::sqrt(snr);
  return std::visit(Overloaded{[&](const Gaussian& g) {
                                 const double v = 1.0 + g.sigma2 * snr;
                                 return normal_pdf(y / std::sqrt(v)) / std::sqrt(v);
                               },
                               [&](const DiscreteAtoms& a) {
                                 double acc = 0.0;
                                 for (std::size_t i = 0; i < a.size(); ++i) acc += a.probs[i] * normal_pdf(y - s * a.points[i]);
                                 return acc;
                               },
                               [&](const UniformBall& b) {
                                 if (snr == 0.0) return normal_pdf(y);
                                 const double h = s * b.radius;
                                 return (normal_cdf(y + h) - normal_cdf(y - h)) / (2.0 * h);
                               },
                               [&](const TabulatedPdf& t) {
                                 double acc = 0.0;
                                 for (std::size_t i = 0; i < t.grid.size(); ++i) acc += t.weights[i] * normal_pdf(y - s * t.grid[i]);
                                 return acc;
                               }},
                    d);
}

OutputRange output_range(const InputDistribution& d, double snr) {
  const SupportRange sup = scalar_support(d);
  const double s = std::sqrt(snr);
  OutputRange r;
  r.lo = s * sup.lo - kOutputPad;
  r.hi = s * sup.hi + kOutputPad;
  if (const auto* a = std::get_if<DiscreteAtoms>(&d)) {
    if (a->size() <= 64)
      for (double x : a->points) r.breaks.push_back(s * x);
  } else if (std::holds_alternative<Gaussian>(d)) {
    r.breaks.push_back(0.0);
  } else {
    r.breaks.push_back(s * sup.lo);
    r.breaks.push_back(s * sup.hi);
  }
  return r;
}

DistanceStats distance_stats(const DiscreteAtoms& d) {
  if (d.size() < 2) throw std::invalid_argument("distance_stats: need at least two atoms");
  DistanceStats st;
  st.d_atom.assign(d.size(), std::numeric_limits<double>::infinity());
  st.d_max = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      double r2 = 0.0;
      const auto a = d.atom(i);
      const auto b = d.atom(j);
      for (std::size_t k = 0; k < a.size(); ++k) r2 += (a[k] - b[k]) * (a[k] - b[k]);
      const double r = std::sqrt(r2);
      st.d_atom[i] = std::min(st.d_atom[i], r);
      st.d_atom[j] = std::min(st.d_atom[j], r);
      st.d_max = std::max(st.d_max, r);
    }
  st.d_min = *std::min_element(st.d_atom.begin(), st.d_atom.end());
  return st;
}

double entropy_bits(const DiscreteAtoms& d) {
  double h = 0.0;
  for (double p : d.probs) h -= p * std::log2(p);
  return h;
}

}  // namespace mmpe
