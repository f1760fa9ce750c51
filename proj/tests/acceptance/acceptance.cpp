// Acceptance criteria 1-12; one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli/cli.hpp"
#include "cli/figures.hpp"
#include "mmpe/bounds.hpp"
#include "mmpe/engine.hpp"
#include "mmpe/estimators.hpp"
#include "mmpe/infometrics.hpp"
#include "mmpe/specfun.hpp"

using namespace mmpe;
using namespace mmpe::cli;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[" << what << "] ";
    }
  }
};

int failures = 0;

void criterion(int id, const char* title, double time_limit_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << "exception: " << e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > time_limit_s) {
    o.pass = false;
    o.detail << "[runtime " << secs << " s > " << time_limit_s << " s] ";
  }
  if (!o.pass) ++failures;
  std::printf("%s %2d %-34s %8.3f s  %s\n", o.pass ? "PASS" : "FAIL", id, title, secs, o.detail.str().c_str());
  std::fflush(stdout);
}

DiscreteAtoms bpsk() { return make_scalar_atoms({-1.0, 1.0}, {0.5, 0.5}); }

double cm_error(const InputDistribution& d, double snr, double p) {
  return p_error_of(conditional_mean_estimator(d, snr), d, snr, p);
}

void c1(Outcome& o) {
  double worst = 0.0;
  for (double p : {1.0, 2.0, 3.0, 4.0})
    for (double snr : {0.0, 0.5, 1.0, 4.0}) {
      const double exact = gaussian_norm_moment(1, p) / std::pow(1.0 + snr, 0.5 * p);
      worst = std::max(worst, std::abs(mmpe_scalar(make_gaussian(1.0), snr, p).value - exact));
      worst = std::max(worst, std::abs(mmpe_gaussian_closed_form(1.0, snr, p).value - exact));
    }
  o.require(worst < 1e-6, "quadrature vs closed form");
  o.detail << "max |err| " << worst;
}

void c2(Outcome& o) {
  double worst = 0.0;
  const auto b = bpsk();
  for (double p : {1.5, 2.0, 3.0})
    for (double snr : {0.5, 1.0, 4.0})
      for (int i = 0; i <= 100; ++i) {
        const double y = -5.0 + 0.1 * i;
        const double ref = std::tanh(y * std::sqrt(snr) / (p - 1.0));
        worst = std::max(worst, std::abs(numeric_pointwise_estimator(b, snr, p, y).value - ref));
      }
  o.require(worst < 1e-6, "numeric vs tanh");
  o.detail << "max |err| " << worst;
}

void c3(Outcome& o) {
  double orth = 0.0, classical = kInf;
  for (double p : {1.3, 3.0}) {
    const auto r = diagnostics_residuals(bpsk(), 1.0, p);
    for (const auto& [name, v] : r.orthogonality) orth = std::max(orth, std::abs(v));
    classical = std::min(classical, std::abs(r.classical));
  }
  const auto rows = fig1b_rows({2.0, 4.0});
  o.require(orth < 1e-6, "orthogonality residual");
  o.require(classical > 1e-3, "classical residual");
  o.require(std::abs(rows[0].bias) < 1e-6, "bias p=2");
  o.require(std::abs(rows[1].bias) > 1e-6, "bias p=4");
  o.detail << "orth " << orth << " classical " << classical << " bias(2) " << rows[0].bias << " bias(4) "
           << rows[1].bias;
}

void c4(Outcome& o) {
  McSettings mc;
  mc.samples = 1'000'000;
  const auto cm = conditional_mmpe(bpsk(), 1.0, 2.0, 1.0, mc);
  const double target = mmpe_scalar(bpsk(), 2.0, 2.0).value;
  const double se = std::hypot(cm.raw_mc.std_error, cm.combined.std_error);
  const double z = std::abs(cm.raw_mc.value - target) / se;
  o.require(z < 4.0, "z < 4");
  o.require(std::abs(cm.combined.value - target) < 1e-9, "combined path");
  o.detail << "mc " << cm.raw_mc.value << " target " << target << " z " << z;
}

void c5(Outcome& o) {
  double worst = 0.0;
  for (double snr : {0.25, 0.5, 0.9}) {
    const double v = change_of_measure_eval(make_gaussian(1.0), snr, 1.0, 2.0, linear_estimator(snr / (1.0 + snr)));
    worst = std::max(worst, std::abs(v - 1.0 / (1.0 + snr)));
  }
  o.require(worst < 1e-6, "1/(1+snr)");
  o.detail << "max |err| " << worst;
}

void c6(Outcome& o) {
  const std::vector<InputDistribution> dists = {make_gaussian(1.0), bpsk(), make_preset("pam4"),
                                                make_preset("asym_pair"), make_preset("uniform")};
  std::size_t configs = 0, reports = 0, violations = 0;
  double worst = kInf;
  auto check = [&](const BoundReport& b) {
    ++reports;
    const double m = *b.margin();
    worst = std::min(worst, m);
    if (m < -(4.0 * b.truth_stderr + 1e-6)) {
      ++violations;
      o.detail << b.name << "@" << b.snr << "," << b.p << " ";
    }
  };
  for (const auto& d : dists)
    for (double snr : {0.25, 1.0, 4.0})
      for (double p : {1.0, 2.0, 3.0, 4.0}) {
        ++configs;
        const double truth = mmpe_scalar(d, snr, p).value;
        for (auto b : trivial_bounds(d, snr, p)) {
          b.truth = b.name.rfind("cm_error", 0) == 0 ? cm_error(d, snr, p) : truth;
          check(b);
        }
        auto gh = gaussian_hardest(hardest_sigma2(d, p), snr, p);
        gh.truth = truth;
        check(gh);
        if (const auto* a = std::get_if<DiscreteAtoms>(&d))
          for (auto b : discrete_input_bound(distance_stats(*a), a->probs, snr, p, 1)) {
            b.truth = truth;
            check(b);
          }
        if (p >= 2.0) {
          const double snr0 = 0.5 * snr;
          auto sc = scpp_bound(scpp_beta(mmpe_scalar(d, snr0, p).value, snr0, p), snr0, snr, p);
          sc.truth = std::pow(truth, 2.0 / p);
          check(sc);
        }
        auto comp = complementary_scpp(d, snr, 2.0 * snr, p);
        comp.truth = truth;
        check(comp);
      }
  o.require(configs == 60, "60 configs");
  o.require(violations == 0, "violations");
  o.detail << configs << " configs, " << reports << " bounds, " << violations << " violations, min margin " << worst;
}

void c7(Outcome& o) {
  const double snr0 = 1.0;
  const double beta = scpp_beta(1.0 / (1.0 + snr0), snr0, 2.0);
  double worst = 0.0;
  for (int i = 0; i <= 60; ++i) {
    const double snr = snr0 + 3.0 * snr0 * i / 60.0;
    worst = std::max(worst, std::abs(scpp_bound(beta, snr0, snr, 2.0).bound - 1.0 / (1.0 + snr)));
  }
  const double kerr = std::abs(complementary_kappa(1, 0.5) - std::pow(2.0, 1.0 / 6.0));
  o.require(worst < 1e-10, "scpp gaussian");
  o.require(kerr < 1e-12, "kappa_{1,1/2}");
  o.detail << "scpp max |err| " << worst << " kappa |err| " << kerr;
}

void c8(Outcome& o) {
  double dip = -kInf, dom4 = kInf, dom5 = kInf;
  for (const auto& r : fig2_rows(fig2_alpha_grid())) {
    dip = std::max(dip, r.truth - r.conjecture);
    dom4 = std::min(dom4, r.interp4 - r.truth);
    dom5 = std::min(dom5, r.interp5 - r.truth);
  }
  o.require(dip >= 1e-3, "conjecture dip");
  o.require(dom4 >= -1e-9 && dom5 >= -1e-9, "interpolation dominance");
  o.detail << "max dip " << dip << " min margins " << dom4 << ", " << dom5;
}

void c9(Outcome& o) {
  const auto rows = fig3_rows(fig3_snr_grid());
  double orig = kInf, order = kInf, sandwich = kInf;
  for (const auto& r : rows) {
    if (r.series == "original_lmmse") orig = r.gap.gap;
    if (r.series == "generalized" && r.gap.p == 6.0 && r.gap.snr >= 10.0) order = std::min(order, orig - r.gap.gap);
    if (r.series != "shaping_loss" && r.gap.exact_MI) sandwich = std::min(sandwich, *r.gap.exact_MI + 1e-6 - r.gap.lower);
  }
  o.require(order > 0.0, "p=6 gap below original");
  o.require(sandwich >= 0.0, "lower <= MI");
  o.detail << rows.size() << " rows, min gap advantage " << order << " min MI slack " << sandwich;
}

void c10(Outcome& o) {
  std::vector<double> wt, wm;
  for (int n : {10, 40, 160}) {
    wt.push_back(transition_width([n](double x) { return mn_bound_thm3(0.05, x, kFig4Snr0, n).bound; }, kFig4Snr0));
    wm.push_back(transition_width([n](double x) { return main_bound(0.05, x, kFig4Snr0, n).bound; }, kFig4Snr0));
  }
  for (int i = 0; i < 2; ++i) {
    const double rt = wt[i] / wt[i + 1] / 2.0;
    const double rm = wm[i] / wm[i + 1] / 4.0;
    o.require(rt >= 0.5 && rt <= 2.0, "thm3 n^-1/2");
    o.require(rm >= 0.5 && rm <= 2.0, "main n^-1");
  }
  o.detail << "thm3 W " << wt[0] << "," << wt[1] << "," << wt[2] << " main W " << wm[0] << "," << wm[1] << ","
           << wm[2];
}

void c11(Outcome& o) {
  McSettings mc;
  mc.samples = 1'000'000;
  double left = 0.0, worst = kInf;
  for (double snr : {0.5, 2.0}) {
    const double m = 1.0 / (1.0 + snr);
    const double cov = posterior_cov_sq_scalar(make_gaussian(1.0), snr);
    left = std::max(left, std::abs(cov - m * m));
    for (const auto& r : derivative_sandwich(m, cov, 0.0, 3.0 * m * m, snr, 1)) worst = std::min(worst, *r.margin());
    for (const auto& r : derivative_sandwich(bpsk(), snr, mc))
      worst = std::min(worst, *r.margin() + 4.0 * r.truth_stderr);
  }
  o.require(left < 1e-9, "gaussian equality");
  o.require(worst >= -1e-12, "sandwich");
  o.detail << "gaussian |mmse^2 - cov| " << left << " min slack " << worst;
}

void c12(Outcome& o) {
  const auto hi = phase_transition_binary({8, 32, 128}, 2.0, 2.0);
  const auto lo = phase_transition_binary({8, 32, 128}, 0.5, 2.0);
  o.require(hi[2].bound < 1e-6, "snr=2 n=128 below 1e-6");
  for (const auto& r : lo) o.require(std::abs(r.bound - 4.0) < 1e-12 && r.ceiling, "ceiling 4");
  o.detail << "snr=2: " << hi[0].bound << "," << hi[1].bound << "," << hi[2].bound << "; snr=0.5 n=128: " << lo[2].bound;
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion(1, "gaussian_closed_form", 10.0, c1);
  criterion(2, "bpsk_estimator", kInf, c2);
  criterion(3, "orthogonality_residuals", kInf, c3);
  criterion(4, "observation_combining", 30.0, c4);
  criterion(5, "change_of_measure_gaussian", kInf, c5);
  criterion(6, "bound_dominance_sweep", 300.0, c6);
  criterion(7, "scpp_exactness", kInf, c7);
  criterion(8, "fig2_counterexample", kInf, c8);
  criterion(9, "fig3_ordering", kInf, c9);
  criterion(10, "thm3_width_scaling", 120.0, c10);
  criterion(11, "derivative_sandwich", kInf, c11);
  criterion(12, "phase_transition_limit", kInf, c12);
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("acceptance: %d/12 passed, %.3f s\n", 12 - failures, total);
  return failures == 0 ? 0 : 1;
}
