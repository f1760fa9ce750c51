#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "cli/cli.hpp"
#include "cli/figures.hpp"
#include "mmpe/bounds.hpp"
#include "mmpe/csv.hpp"
#include "mmpe/engine.hpp"
#include "mmpe/infometrics.hpp"
#include "mmpe/numerics.hpp"
#include "mmpe/specfun.hpp"

namespace mmpe::cli {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Check {
  double margin = kInf;
  std::string detail;

  // value must stay <= limit
  void at_most(double value, double limit) { margin = std::min(margin, limit - value); }
  void at_least(double value, double limit) { margin = std::min(margin, value - limit); }
  void note(const std::string& s) {
    if (!detail.empty()) detail += "; ";
    detail += s;
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

class Suite {
 public:
  Suite(const VerifyOptions& opt, std::ostream& report) : opt_(opt), report_(report) {}

  void run(const std::string& module, const std::string& name, const std::function<void(Check&)>& body) {
    VerifyLine line;
    line.module = module;
    line.name = name;
    Check c;
    try {
      body(c);
      line.passed = c.margin >= 0.0;
      line.margin = c.margin;
      line.detail = c.detail;
    } catch (const std::exception& e) {
      line.passed = false;
      line.margin = -kInf;
      line.detail = std::string("error: ") + e.what();
    }
    report_ << (line.passed ? "PASS " : "FAIL ") << line.module << "." << line.name
            << " margin=" << fmt(line.margin);
    if (!line.detail.empty()) report_ << " (" << line.detail << ")";
    report_ << "\n";
    report_.flush();
    lines_.push_back(std::move(line));
  }

  bool full() const { return opt_.full; }
  bool faulty() const { return opt_.inject_fault; }
  std::size_t samples() const { return opt_.full ? 1'000'000 : 200'000; }
  McSettings mc(std::uint64_t seed = kDefaultSeed) const {
    McSettings s;
    s.samples = samples();
    s.seed = seed;
    return s;
  }
  std::optional<double> cp() const { return opt_.inject_fault ? std::optional<double>(0.5) : std::nullopt; }

  std::vector<VerifyLine> take() { return std::move(lines_); }

 private:
  VerifyOptions opt_;
  std::ostream& report_;
  std::vector<VerifyLine> lines_;
};

InputDistribution bpsk() { return make_preset("bpsk"); }

double cm_error(const InputDistribution& d, double snr, double p) {
  return p_error_of(conditional_mean_estimator(d, snr), d, snr, p);
}

std::vector<double> grid(double a, double step, double b) {
  std::vector<double> out;
  const long count = std::lround(std::floor((b - a) / step + 1e-9));
  for (long i = 0; i <= count; ++i) out.push_back(a + static_cast<double>(i) * step);
  return out;
}

void specfun_checks(Suite& s) {
  s.run("specfun", "qbar_range_and_monotone", [](Check& c) {
    for (double x : {0.5, 1.0, 2.5, 8.0, 32.0}) {
      double prev = generalized_q(x, 0.0);
      c.at_most(std::abs(prev - 1.0), 1e-15);
      for (double a = 0.25; a <= 60.0; a += 0.25) {
        const double v = generalized_q(x, a);
        c.at_least(v, 0.0);
        c.at_most(v, 1.0);
        c.at_least(prev - v, 0.0);
        if (prev > 1e-12 && prev < 1.0 - 1e-12 && !(v < prev)) c.at_least(-1.0, 0.0);
        prev = v;
      }
    }
  });
  s.run("specfun", "qbar_half_vs_erfc", [](Check& c) {
    double worst = 0.0;
    for (double a : {0.0, 0.5, 1.0, 2.0, 4.0})
      worst = std::max(worst, std::abs(generalized_q(0.5, a * a) - 2.0 * gaussian_q(std::sqrt(2.0) * a)));
    c.at_most(worst, 1e-10);
    c.note("max err " + fmt(worst));
  });
  s.run("specfun", "gaussian_moment_p2_unit", [](Check& c) {
    double worst = 0.0;
    for (int n = 1; n <= 512; ++n) worst = std::max(worst, std::abs(gaussian_norm_moment(n, 2.0) - 1.0));
    c.at_most(worst, 1e-12);
    c.note("max err " + fmt(worst));
  });
  s.run("specfun", "qbar_limits", [&s](Check& c) {
    // x^p Qbar(x;(1+eps)x) peaks near n = 226 before decaying, so its decrease is checked past the peak.
    const double eps = 0.2, p = 2.0;
    const int step = s.full() ? 1 : 7;
    double down_prev = -kInf;
    for (int n = 8; n <= 4000; n += step) {
      const double down = generalized_q(0.5 * n, (1.0 - eps) * 0.5 * n);
      c.at_least(down - down_prev, 0.0);
      down_prev = down;
    }
    c.at_least(down_prev, 1.0 - 1e-12);
    auto up = [&](int n) { return std::pow(0.5 * n, p) * generalized_q(0.5 * n, (1.0 + eps) * 0.5 * n); };
    int peak = 2;
    for (int n = 2; n <= 4000; ++n)
      if (up(n) > up(peak)) peak = n;
    double prev = up(peak);
    for (int n = peak + step; n <= 4000; n += step) {
      const double v = up(n);
      c.at_least(prev - v, 0.0);
      prev = v;
    }
    c.at_most(prev, 1e-6);
    c.note("Qbar(2000;1600)=" + fmt(down_prev) + ", upper sequence peaks at n=" + std::to_string(peak) +
           ", n=4000 value " + fmt(prev));
  });
}

void model_checks(Suite& s) {
  const std::vector<InputDistribution> dists = {bpsk(), make_preset("pam4"), make_preset("asym_pair"),
                                                tabulate_uniform_interval(-1.0, 1.0, 257)};
  s.run("model", "posterior_normalized", [&](Check& c) {
    double worst = 0.0;
    for (const auto& d : dists)
      for (double snr : {0.5, 4.0, 100.0})
        for (double y = -10.0; y <= 10.0; y += 0.5) {
          const ScalarPosterior post = posterior_scalar(d, snr, y);
          double sum = 0.0;
          for (double w : post.w) sum += w;
          worst = std::max(worst, std::abs(sum - 1.0));
        }
    c.at_most(worst, 1e-12);
    c.note("max |sum-1| " + fmt(worst));
  });
  s.run("model", "posterior_prior_at_snr0", [&](Check& c) {
    double worst = 0.0;
    for (const auto& d : dists) {
      const auto* a = std::get_if<DiscreteAtoms>(&d);
      if (!a) continue;
      for (double y : {-3.0, 0.0, 2.5}) {
        const ScalarPosterior post = posterior_scalar(d, 0.0, y);
        double tv = 0.0;
        for (std::size_t i = 0; i < post.w.size(); ++i) tv += 0.5 * std::abs(post.w[i] - a->probs[i]);
        worst = std::max(worst, tv);
      }
    }
    c.at_most(worst, 1e-12);
  });
  s.run("model", "sampling_vs_quadrature", [&](Check& c) {
    const InputDistribution d = bpsk();
    const double snr = 1.0;
    const OutputRange rg = output_range(d, snr);
    const auto samples = sample_channel(d, {1, snr}, s.samples(), kDefaultSeed);
    for (int which = 0; which < 2; ++which) {
      auto g = [which](double y) { return which == 0 ? y * y : std::abs(y); };
      const double quad = num::integrate_value([&](double y) { return output_density(d, snr, y) * g(y); }, rg.lo - 10,
                                               rg.hi + 10, 1e-12, rg.breaks);
      std::vector<double> v(samples.y.size());
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = g(samples.y[i]);
      const double mean = num::pairwise_sum(v) / v.size();
      double ss = 0.0;
      for (double t : v) ss += (t - mean) * (t - mean);
      const double se = std::sqrt(ss / (v.size() - 1) / v.size());
      c.at_most(std::abs(mean - quad), 4.0 * se);
      c.note(std::string(which == 0 ? "y^2" : "|y|") + " z=" + fmt(std::abs(mean - quad) / se));
    }
  });
}

void estimator_checks(Suite& s) {
  const InputDistribution d = bpsk();
  s.run("estimators", "prop2_orthogonality", [&](Check& c) {
    double worst = 0.0;
    for (double p : {1.5, 2.0, 3.0, 4.0})
      for (const auto& [name, v] : diagnostics_residuals(d, 1.0, p).orthogonality) worst = std::max(worst, std::abs(v));
    c.at_most(worst, 1e-6);
    c.note("max " + fmt(worst));
  });
  s.run("estimators", "p_minus_1_moment_unbiased", [&](Check& c) {
    double worst = 0.0;
    const std::vector<NamedG> one = {{"1", [](double) { return 1.0; }}};
    for (double p : {1.5, 2.0, 3.0, 4.0})
      worst = std::max(worst, std::abs(diagnostics_residuals(d, 1.0, p, one).orthogonality.front().second));
    c.at_most(worst, 1e-6);
    c.note("max " + fmt(worst));
  });
  s.run("estimators", "classical_orthogonality_fails_off_p2", [&](Check& c) {
    const std::vector<NamedG> none;
    const double h12 = diagnostics_residuals(d, 1.0, 1.2, none).classical;
    const double h2 = diagnostics_residuals(d, 1.0, 2.0, none).classical;
    const double h3 = diagnostics_residuals(d, 1.0, 3.0, none).classical;
    c.at_least(std::abs(h12), 1e-3);
    c.at_least(std::abs(h3), 1e-3);
    c.at_most(std::abs(h2), 1e-6);
    c.note("h(1.2)=" + fmt(h12) + " h(2)=" + fmt(h2) + " h(3)=" + fmt(h3));
  });
  s.run("estimators", "affine_equivariance", [&](Check& c) {
    const InputDistribution x = make_scalar_atoms({-1.0, 1.0}, {0.3, 0.7});
    const double a = 2.0, b = 1.0;
    for (double p : {1.5, 3.0})
      for (double y = -5.0; y <= 5.0; y += 0.1) {
        const ScalarPosterior post = posterior_scalar(x, 1.0, y);
        ScalarPosterior moved = post;
        for (double& v : moved.x) v = a * v + b;
        moved.lo = a * post.lo + b;
        moved.hi = a * post.hi + b;
        moved.mean = a * post.mean + b;
        const double direct = minimize_posterior(moved, p).value;
        const double mapped = a * minimize_posterior(post, p).value + b;
        c.at_most(std::abs(direct - mapped), 1e-6);
      }
  });
  s.run("estimators", "nonnegative_support", [&](Check& c) {
    const InputDistribution x = make_scalar_atoms({0.0, 3.0}, {0.5, 0.5});
    double lowest = kInf;
    for (double p : {1.5, 2.0, 3.0})
      for (double y = -5.0; y <= 5.0; y += 0.25) lowest = std::min(lowest, numeric_pointwise_estimator(x, 1.0, p, y).value);
    c.at_least(lowest, 0.0);
  });
  s.run("estimators", "two_point_matches_numeric", [&](Check& c) {
    for (double p : {1.5, 2.0, 3.0})
      for (double y = -4.0; y <= 4.0; y += 0.25) {
        const double closed = two_point_estimator(-3.0, 1.0, 0.01, 1.0, p, y);
        const double numeric = numeric_pointwise_estimator(make_preset("asym_pair"), 1.0, p, y).value;
        c.at_most(std::abs(closed - numeric), 1e-6);
      }
  });
}

void engine_checks(Suite& s) {
  const InputDistribution b = bpsk();
  const InputDistribution g = make_gaussian(1.0);
  s.run("engine", "monotone_in_snr", [&](Check& c) {
    const auto snrs = s.full() ? grid(0.0, 0.25, 8.0) : grid(0.0, 1.0, 8.0);
    for (const auto& d : {b, g})
      for (double p : {1.0, 2.0, 4.0}) {
        double prev = kInf;
        for (double snr : snrs) {
          const double v = mmpe_scalar(d, snr, p).value;
          c.at_most(v, prev + 2e-7);
          prev = v;
        }
      }
  });
  auto continuity = [&](bool in_p, Check& c) {
    const double base = in_p ? 2.5 : 1.0;
    auto f = [&](double x) { return in_p ? mmpe_scalar(b, 1.0, x).value : mmpe_scalar(b, x, 2.5).value; };
    const double f0 = f(base);
    const double d1 = std::abs(f(base + 0.1) - f0);
    const double d2 = std::abs(f(base + 0.01) - f0);
    const double ratio = d1 / d2;
    c.at_least(ratio, 10.0 / 3.0);
    c.at_most(ratio, 30.0);
    c.note("diff ratio " + fmt(ratio));
  };
  s.run("engine", "continuity_in_p", [&](Check& c) { continuity(true, c); });
  s.run("engine", "continuity_in_snr", [&](Check& c) { continuity(false, c); });
  s.run("engine", "noise_input_equivalence", [&](Check& c) {
    const double snr = 2.0;
    for (double p : {2.0, 4.0}) {
      const double lhs = std::sqrt(snr) * std::pow(mmpe_scalar(b, snr, p).value, 1.0 / p);
      const MmpeEstimate z = noise_mmpe_mc(b, snr, p, s.mc(11));
      const double rhs = std::pow(z.value, 1.0 / p);
      const double se = rhs / (p * z.value) * z.std_error;
      c.at_most(std::abs(lhs - rhs), 4.0 * se);
      c.note("p=" + fmt(p) + " z=" + fmt(std::abs(lhs - rhs) / se));
    }
  });
  s.run("engine", "chain_ordering", [&](Check& c) {
    for (const auto& d : {b, make_preset("pam4"), make_preset("asym_pair")})
      for (double snr : {0.5, 2.0})
        for (auto [p, q] : {std::pair{2.0, 1.0}, std::pair{4.0, 2.0}, std::pair{3.0, 1.5}}) {
          const double mp = mmpe_scalar(d, snr, p).value;
          const double mq = mmpe_scalar(d, snr, q).value;
          c.at_most(std::pow(mq, p / q), mp + 1e-7);
          c.at_most(mp, cm_error(d, snr, p) + 1e-7);
        }
  });
  s.run("engine", "mc_matches_quadrature", [&](Check& c) {
    for (double p : {1.5, 2.0, 4.0}) {
      const MmpeEstimate mc = mmpe_vector_mc(b, 1.0, p, s.mc(21));
      const double q = mmpe_scalar(b, 1.0, p).value;
      c.at_most(std::abs(mc.value - q), 4.0 * mc.std_error);
    }
    const MmpeEstimate vg = p_error_of_mc(optimal_estimator(make_gaussian(1.0, 4), 1.0, 2.0), make_gaussian(1.0, 4), 1.0,
                                          2.0, s.mc(22));
    c.at_most(std::abs(vg.value - 0.5), 4.0 * vg.std_error);
  });
  s.run("engine", "conditioning_reduces", [&](Check& c) {
    for (double p : {1.5, 2.0, 4.0}) {
      const ConditionalMmpe cm = conditional_mmpe(b, 1.0, p, 1.0, s.mc(31));
      const double base = mmpe_scalar(b, 1.0, p).value;
      c.at_most(cm.combined.value, base);
      c.at_most(cm.raw_mc.value, base + 4.0 * cm.raw_mc.std_error);
    }
  });
  s.run("engine", "observation_combining", [&](Check& c) {
    const ConditionalMmpe cm = conditional_mmpe(b, 1.0, 2.0, 1.0, s.mc(32));
    const double z = std::abs(cm.raw_mc.value - cm.combined.value) / cm.raw_mc.std_error;
    c.at_most(z, 4.0);
    c.note("z=" + fmt(z));
  });
  s.run("engine", "change_of_measure_gaussian", [&](Check& c) {
    double worst = 0.0;
    for (double snr : {0.25, 0.5, 0.9}) {
      const double v = change_of_measure_eval(g, snr, 1.0, 2.0, linear_estimator(snr / (1.0 + snr)));
      worst = std::max(worst, std::abs(v - 1.0 / (1.0 + snr)));
    }
    c.at_most(worst, 1e-6);
    c.note("max err " + fmt(worst));
  });
  s.run("engine", "change_of_measure_bpsk", [&](Check& c) {
    for (double p : {1.5, 2.0, 3.0}) {
      const double truth = mmpe_scalar(b, 0.5, p).value;
      const double plain = change_of_measure_eval(b, 0.5, 1.0, p, optimal_estimator(b, 1.0, p), 1e-9);
      const double best = change_of_measure_eval(b, 0.5, 1.0, p, change_of_measure_optimal(b, 0.5, 1.0, p), 1e-9);
      c.at_least(plain, truth - 1e-7);
      c.at_most(std::abs(best - truth), 1e-6);
    }
  });
}

void sweep_bounds(const InputDistribution& d, double snr, double p, Suite& s, Check& c, std::size_t& count) {
  const double truth = mmpe_scalar(d, snr, p).value;
  std::vector<BoundReport> all;
  for (auto bnd : trivial_bounds(d, snr, p)) {
    bnd.truth = bnd.name.rfind("cm_error", 0) == 0 ? cm_error(d, snr, p) : truth;
    all.push_back(bnd);
  }
  if (p >= 1.0) {
    auto gh = gaussian_hardest(hardest_sigma2(d, p), snr, p);
    gh.truth = truth;
    all.push_back(gh);
  }
  if (const auto* a = std::get_if<DiscreteAtoms>(&d))
    for (auto bnd : discrete_input_bound(distance_stats(*a), a->probs, snr, p, 1)) {
      bnd.truth = truth;
      all.push_back(bnd);
    }
  if (p >= 2.0) {
    const double snr0 = 0.5 * snr;
    const double beta = scpp_beta(mmpe_scalar(d, snr0, p).value, snr0, p);
    auto sc = scpp_bound(beta, snr0, snr, p, 1, s.cp());
    sc.truth = std::pow(truth, 2.0 / p);
    all.push_back(sc);
  }
  auto comp = complementary_scpp(d, snr, 2.0 * snr, p);
  comp.truth = truth;
  all.push_back(comp);
  for (const auto& bnd : all) {
    c.at_least(*bnd.margin(), -1e-6);
    if (*bnd.margin() < -1e-6) c.note(bnd.name + " violated at snr=" + fmt(snr) + " p=" + fmt(p));
    ++count;
  }
}

void bounds_checks(Suite& s) {
  const InputDistribution b = bpsk();
  s.run("bounds", "dominance_sweep", [&](Check& c) {
    std::vector<InputDistribution> dists = {make_gaussian(1.0), b, make_preset("pam4"), make_preset("asym_pair"),
                                            make_preset("uniform")};
    const std::vector<double> snrs = s.full() ? std::vector<double>{0.25, 1.0, 4.0} : std::vector<double>{1.0};
    std::size_t configs = 0, reports = 0;
    for (const auto& d : dists)
      for (double snr : snrs)
        for (double p : {1.0, 2.0, 3.0, 4.0}) {
          sweep_bounds(d, snr, p, s, c, reports);
          ++configs;
        }
    c.note(std::to_string(configs) + " configs, " + std::to_string(reports) + " bounds");
  });
  s.run("bounds", "scpp_dominance", [&](Check& c) {
    const InputDistribution g = make_gaussian(1.0);
    for (const auto& d : {g, b})
      for (double p : {2.0, 4.0}) {
        const double snr0 = 1.0;
        const double beta = scpp_beta(mmpe(d, snr0, p).value, snr0, p);
        for (double snr : {1.0, 1.5, 2.0, 4.0}) {
          const double truth = std::pow(mmpe(d, snr, p).value, 2.0 / p);
          const double bound = scpp_bound(beta, snr0, snr, p, 1, s.cp()).bound;
          c.at_least(bound - truth, -1e-9);
          if (p == 4.0 && std::holds_alternative<Gaussian>(d)) c.at_most(bound / truth, 2.0 + 1e-12);
        }
      }
    if (s.faulty()) c.note("c_p forced to 0.5");
  });
  s.run("bounds", "scpp_gaussian_exact", [&](Check& c) {
    double worst = 0.0;
    const double snr0 = 1.0;
    const double beta = scpp_beta(1.0 / (1.0 + snr0), snr0, 2.0);
    for (double snr = snr0; snr <= 4.0 * snr0 + 1e-12; snr += 0.25)
      worst = std::max(worst, std::abs(scpp_bound(beta, snr0, snr, 2.0, 1, s.cp()).bound - 1.0 / (1.0 + snr)));
    c.at_most(worst, 1e-10);
    c.note("beta=" + fmt(beta) + " max err " + fmt(worst));
  });
  s.run("bounds", "scpp_endpoint", [&](Check& c) {
    const double m = mmpe_scalar(b, 1.0, 2.0).value;
    const double beta = scpp_beta(m, 1.0, 2.0);
    c.at_most(std::abs(scpp_bound(beta, 1.0, 1.0, 2.0, 1, s.cp()).bound - m), 1e-10);
  });
  s.run("bounds", "complementary_kappa", [&](Check& c) {
    c.at_most(std::abs(complementary_kappa(1, 0.5) - std::pow(2.0, 1.0 / 6.0)), 1e-12);
    int below = 0;
    for (int n = 1; n <= 64; ++n)
      for (double t = 0.0; t < 0.999; t += 0.01) {
        const double k = complementary_kappa(n, t);
        if (t == 0.0) c.at_most(std::abs(k - 1.0), 1e-15);
        if (n == 1) c.at_least(k, 1.0 - 1e-15);
        if (n > 1 && k < 1.0) ++below;
      }
    c.note("n=1 kappa>=1; " + std::to_string(below) + " (n>=2, t) grid points with kappa<1");
  });
  s.run("bounds", "complementary_scpp_dominance", [&](Check& c) {
    for (const auto& d : std::vector<InputDistribution>{b, make_gaussian(1.0), make_preset("pam4")})
      for (double p : {1.0, 2.0}) {
        const auto r = complementary_scpp(d, 0.5, 1.0, p);
        c.at_least(r.bound - mmpe(d, 0.5, p).value, -1e-7);
      }
  });
  s.run("bounds", "interpolation_log_convexity", [&](Check& c) {
    for (auto [p, q, r] : {std::tuple{2.0, 4.0, 8.0}, std::tuple{1.5, 3.0, 6.0}, std::tuple{1.0, 2.0, 4.0}}) {
      const double a = MomentOrder{p, q, r}.alpha();
      auto lnorm = [&](double o) { return std::log(cm_error(b, 1.0, o)) / o; };
      c.at_most(lnorm(q), a * lnorm(p) + (1.0 - a) * lnorm(r) + 1e-8);
    }
  });
  s.run("bounds", "interpolation_dominance", [&](Check& c) {
    const auto alphas = s.full() ? fig2_alpha_grid() : std::vector<double>{0.1, 0.3, 0.5, 0.7, 0.9};
    for (const auto& r : fig2_rows(alphas)) {
      c.at_least(r.interp4 - r.truth, -1e-7);
      c.at_least(r.interp5 - r.truth, -1e-7);
    }
  });
  s.run("bounds", "discrete_bound_examples", [&](Check& c) {
    const auto st = distance_stats(std::get<DiscreteAtoms>(b));
    const auto at4 = discrete_input_bound(st, {0.5, 0.5}, 4.0, 2.0, 1);
    c.at_most(std::abs(at4[0].bound - 4.0 * 2.0 * gaussian_q(2.0)), 1e-12);
    const DiscreteAtoms v = make_pm_one_vector(64);
    const auto hi = discrete_input_bound(distance_stats(v), v.probs, 1.5, 2.0, 64);
    c.at_most(hi[0].bound, 0.05);
    c.note("n=64 bound " + fmt(hi[0].bound));
  });
  s.run("bounds", "phase_transition_limit", [&](Check& c) {
    const auto hi = phase_transition_binary({8, 32, 128}, 2.0, 2.0);
    c.at_least(hi[0].bound - hi[1].bound, 0.0);
    c.at_least(hi[1].bound - hi[2].bound, 0.0);
    c.at_most(hi[2].bound, 1e-6);
    for (const auto& row : phase_transition_binary({8, 32, 128}, 0.5, 2.0)) c.at_most(std::abs(row.bound - 4.0), 1e-12);
    c.at_most(phase_transition_binary({128}, 2.0, 4.0)[0].bound, 1e-3);
    c.note("n=128 bound " + fmt(hi[2].bound));
  });
  s.run("bounds", "gaussian_hardest_kappa", [&](Check& c) {
    c.at_most(std::abs(std::pow(gaussian_hardest_kappa(3.0, 4.0), 0.25) - (1.0 + std::sqrt(3.0)) / 2.0), 1e-12);
    c.at_most(std::pow(gaussian_hardest_kappa(1e4, 4.0), 0.25), 1.01);
    c.at_most(std::abs(gaussian_hardest(1.0, 2.0, 2.0).bound - 1.0 / 3.0), 1e-15);
  });
  s.run("bounds", "thm3_endpoint", [&](Check& c) {
    for (double beta : {0.01, 0.05, 0.5}) {
      const double mmse0 = beta / (1.0 + beta * 5.0);
      c.at_most(std::abs(mn_bound_thm3(beta, 5.0, 5.0, 10).bound - mmse0), 1e-15);
    }
  });
  s.run("bounds", "derivative_sandwich", [&](Check& c) {
    for (double snr : {0.5, 2.0}) {
      const double cov = posterior_cov_sq_scalar(make_gaussian(1.0), snr);
      const double m = 1.0 / (1.0 + snr);
      c.at_most(std::abs(cov - m * m), 1e-9);
      c.at_most(cov, 3.0 * m * m + 1e-12);
      for (const auto& r : derivative_sandwich(bpsk(), snr, s.mc(41)))
        c.at_least(*r.margin(), -4.0 * r.truth_stderr);
    }
  });
}

void info_checks(Suite& s) {
  const auto snrs = s.full() ? fig3_snr_grid() : std::vector<double>{3.0, 8.0, 15.0, 24.0};
  const auto rows = fig3_rows(snrs);
  s.run("infometrics", "ow_sandwich", [&](Check& c) {
    for (const auto& r : rows) {
      if (r.series == "shaping_loss" || !r.gap.exact_MI) continue;
      c.at_most(r.gap.lower, *r.gap.exact_MI + 1e-6);
      c.at_most(*r.gap.exact_MI, r.gap.H + 1e-6);
    }
    c.note(std::to_string(rows.size()) + " rows");
  });
  s.run("infometrics", "fig3_ordering", [&](Check& c) {
    double orig = kInf;
    for (const auto& r : rows) {
      if (r.series == "original_lmmse") orig = r.gap.gap;
      if (r.series == "generalized" && r.gap.p == 6.0 && r.gap.snr >= 10.0) c.at_least(orig - r.gap.gap, 0.0);
    }
  });
  s.run("infometrics", "shaping_loss_constant", [&](Check& c) {
    c.at_most(std::abs(shaping_loss_bits() - 0.25461433482006296), 1e-15);
  });
  s.run("infometrics", "entropy_bound_p2_identity", [&](Check& c) {
    for (double m : {0.1, 0.5, 2.0})
      c.at_most(std::abs(entropy_bound_from_mmpe(1, 2.0, m) - 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e * m)),
                1e-9);
    const double exact = 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e * 0.5);
    c.at_most(std::abs(entropy_bound(make_gaussian(1.0), 1.0, 2.0) - exact), 1e-9);
  });
  s.run("infometrics", "entropy_bound_dominates", [&](Check& c) {
    const InputDistribution g = make_gaussian(1.0);
    const double exact = conditional_entropy_bits(g, 1.0);
    const double b4 = entropy_bound(g, 1.0, 4.0);
    c.at_least(b4, exact - 1e-9);
    c.at_most(b4, trivial_entropy_bound_from_mmpe(1, 4.0, mmpe(g, 1.0, 4.0).value) + 1e-12);
    const InputDistribution u = make_preset("uniform");
    c.at_least(entropy_bound(u, 2.0, 2.0), conditional_entropy_bits(u, 2.0) - 1e-6);
  });
  s.run("infometrics", "mutual_information_limits", [&](Check& c) {
    c.at_most(std::abs(mutual_information_scalar(bpsk(), 0.0)), 1e-12);
    c.at_most(std::abs(mutual_information_scalar(bpsk(), 400.0) - 1.0), 1e-4);
  });
  s.run("infometrics", "g1_asymptotic_bound", [&](Check& c) {
    for (int n : {8, 32}) {
      const DiscreteAtoms v = make_pm_one_vector(n);
      const auto st = distance_stats(v);
      McSettings mc = s.mc(51);
      mc.samples = s.full() ? 200'000 : 40'000;
      const double ratio = g1_ratio(v, 2.0, 2.0, 0.5 * st.d_min, mc);
      const double bound = g1_asymptotic_bound(st, 2.0, 2.0, n);
      c.at_most(ratio, bound);
      c.note("n=" + std::to_string(n) + " " + fmt(ratio) + "<=" + fmt(bound));
    }
  });
  s.run("infometrics", "g2_ball_decay", [&](Check& c) {
    const double p = 2.0;
    double lo = kInf, hi = 0.0, prev = kInf;
    for (int n : {4, 16, 64}) {
      const double g2 = g2_ball_bits(n, p);
      const double scale = std::log2(static_cast<double>(n) / p) / n;
      lo = std::min(lo, g2 / scale);
      hi = std::max(hi, g2 / scale);
      c.at_most(g2, prev);
      prev = g2;
    }
    c.at_most(hi / lo, 3.0);
    c.note("ratio spread " + fmt(hi / lo));
  });
}

void figure_checks(Suite& s) {
  s.run("cli", "curve_determinism", [&](Check& c) {
    RunConfig cfg;
    cfg.preset = "pmone_vector";
    cfg.n = 2;
    cfg.p = {2.0, 4.0};
    cfg.snr = {0.5, 2.0};
    cfg.samples = 20'000;
    std::ostringstream a, b, ab, bb;
    run_curve(cfg, a, &ab);
    run_curve(cfg, b, &bb);
    c.at_least(a.str() == b.str() && ab.str() == bb.str() ? 0.0 : -1.0, 0.0);
  });
  s.run("cli", "fig1a_zero_crossing", [&](Check& c) {
    auto h = [](double p) { return fig1a_rows({p}).front().classical; };
    const double root = num::find_root(h, 1.5, 2.5, 1e-6);
    c.at_most(std::abs(root - 2.0), 0.02);
    c.note("crossing at p=" + fmt(root));
  });
  s.run("cli", "fig1b_bias", [&](Check& c) {
    const auto rows = fig1b_rows({2.0, 4.0});
    c.at_most(std::abs(rows[0].bias), 1e-6);
    c.at_least(std::abs(rows[1].bias), 1e-3);
  });
  s.run("cli", "fig2_conjecture_dips", [&](Check& c) {
    const auto alphas = s.full() ? fig2_alpha_grid() : std::vector<double>{0.1, 0.3, 0.5, 0.7, 0.9};
    double dip = -kInf;
    for (const auto& r : fig2_rows(alphas)) dip = std::max(dip, r.truth - r.conjecture);
    c.at_least(dip, 1e-3);
    c.note("max dip " + fmt(dip));
  });
  s.run("cli", "fig4_width_scaling", [&](Check& c) {
    std::vector<double> wt, wm;
    for (int n : {10, 40, 160}) {
      wt.push_back(transition_width([n](double x) { return mn_bound_thm3(0.05, x, kFig4Snr0, n).bound; }, kFig4Snr0));
      wm.push_back(transition_width([n](double x) { return main_bound(0.05, x, kFig4Snr0, n).bound; }, kFig4Snr0));
    }
    for (int i = 0; i < 2; ++i) {
      const double rt = (wt[i] / wt[i + 1]) / 2.0;
      const double rm = (wm[i] / wm[i + 1]) / 4.0;
      c.at_least(std::min(rt, 1.0 / rt), 0.5);
      c.at_least(std::min(rm, 1.0 / rm), 0.5);
    }
    c.note("thm3 W " + fmt(wt[0]) + "," + fmt(wt[1]) + "," + fmt(wt[2]) + " main W " + fmt(wm[0]) + "," + fmt(wm[1]) +
           "," + fmt(wm[2]));
  });
  s.run("cli", "fig4a_main_bound_smaller_somewhere", [&](Check& c) {
    double best = -kInf;
    for (const auto& r : fig4_rows(0.01, {1}, fig4_snr_grid())) best = std::max(best, r.thm3 - r.main);
    c.at_least(best, 1e-12);
  });
}

}  // namespace

std::vector<VerifyLine> run_verify(const VerifyOptions& opt, std::ostream& report) {
  Suite s(opt, report);
  report << "suite: " << (opt.full ? "full" : "fast") << (opt.inject_fault ? " (fault injected: c_p=0.5)" : "")
         << "\n";
  const auto t0 = std::chrono::steady_clock::now();
  specfun_checks(s);
  model_checks(s);
  estimator_checks(s);
  engine_checks(s);
  bounds_checks(s);
  info_checks(s);
  figure_checks(s);
  auto lines = s.take();
  const auto failed = std::count_if(lines.begin(), lines.end(), [](const VerifyLine& l) { return !l.passed; });
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report << "verify: " << lines.size() - failed << " passed, " << failed << " failed, " << fmt(secs) << " s\n";
  for (const auto& l : lines)
    if (!l.passed) report << "failed: " << l.module << "." << l.name << "\n";
  return lines;
}

}  // namespace mmpe::cli
