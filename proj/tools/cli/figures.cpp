#include "cli/figures.hpp"

#include <cmath>
#include <ostream>

#include "cli/cli.hpp"
#include "mmpe/bounds.hpp"
#include "mmpe/csv.hpp"
#include "mmpe/engine.hpp"

namespace mmpe::cli {
namespace {

std::vector<double> range(double a, double step, double b) {
  std::vector<double> out;
  const long count = std::lround(std::floor((b - a) / step + 1e-9));
  for (long i = 0; i <= count; ++i) out.push_back(a + static_cast<double>(i) * step);
  return out;
}

std::vector<Fig1Row> fig1_rows(const InputDistribution& d, const std::vector<double>& ps) {
  std::vector<Fig1Row> out;
  for (double p : ps) {
    const ResidualTable t = diagnostics_residuals(d, 1.0, p, {});
    out.push_back({p, t.classical, t.bias});
  }
  return out;
}

}  // namespace

std::vector<double> fig1_p_grid() { return range(1.05, 0.05, 4.0); }
std::vector<double> fig2_alpha_grid() { return range(0.0, 0.02, 1.0); }
std::vector<double> fig3_snr_grid() { return range(3.0, 0.5, 30.0); }
std::vector<double> fig4_snr_grid() { return range(0.05, 0.05, 5.0); }

std::vector<Fig1Row> fig1a_rows(const std::vector<double>& ps) {
  return fig1_rows(make_preset("bpsk"), ps);
}

std::vector<Fig1Row> fig1b_rows(const std::vector<double>& ps) {
  return fig1_rows(make_preset("asym_pair"), ps);
}

std::vector<Fig2Row> fig2_rows(const std::vector<double>& alphas) {
  const InputDistribution d = make_preset("bpsk");
  const double snr = 1.0, p = 2.0, r = 8.0;
  InterpolationInputs in{p, p, r};
  in.mmpe_p = mmpe_scalar(d, snr, p).value;
  in.mmpe_r = mmpe_scalar(d, snr, r).value;
  in.err_fr_at_p = p_error_of(optimal_estimator(d, snr, r), d, snr, p);
  in.err_fp_at_r = p_error_of(optimal_estimator(d, snr, p), d, snr, r);
  std::vector<Fig2Row> out;
  for (double a : alphas) {
    Fig2Row row;
    row.alpha = a;
    row.q = 1.0 / (a / p + (1.0 - a) / r);
    if (a >= 1.0) row.q = p;
    if (a <= 0.0) row.q = r;
    in.q = row.q;
    const double m = row.q == p ? in.mmpe_p : (row.q == r ? in.mmpe_r : mmpe_scalar(d, snr, row.q).value);
    row.truth = std::pow(m, 1.0 / row.q);
    for (const auto& b : interpolation_bound(in)) {
      if (b.name == "interp4") row.interp4 = b.bound;
      if (b.name == "interp5") row.interp5 = b.bound;
      if (b.name == "conjecture") row.conjecture = b.bound;
    }
    out.push_back(row);
  }
  return out;
}

int fig3_points(double snr) { return static_cast<int>(std::floor(std::sqrt(1.0 + snr) + 1e-12)); }

std::vector<Fig3Row> fig3_rows(const std::vector<double>& snrs, bool with_exact_mi) {
  std::vector<Fig3Row> out;
  for (double snr : snrs) {
    const int N = fig3_points(snr);
    if (N < 2) continue;
    const DiscreteAtoms d = make_uniform_pam(N);
    GapBreakdown shaping;
    shaping.label = "shaping_loss";
    shaping.snr = snr;
    shaping.gap = shaping_loss_bits();
    shaping.H = entropy_bits(d);
    shaping.lower = std::max(shaping.H - shaping.gap, 0.0);
    out.push_back({"shaping_loss", N, shaping});
    GapBreakdown orig = ow_gap_original(d, snr, OriginalGapVariant::lmmse, with_exact_mi);
    out.push_back({"original_lmmse", N, orig});
    GapBreakdown sharp = ow_gap_original(d, snr, OriginalGapVariant::mmse, false);
    sharp.exact_MI = orig.exact_MI;
    out.push_back({"original_mmse", N, sharp});
    for (double p : {2.0, 4.0, 6.0}) {
      GapOptions opt;
      opt.with_exact_mi = false;
      GapBreakdown g = ow_gap_generalized(d, snr, p, opt);
      g.exact_MI = orig.exact_MI;
      out.push_back({"generalized", N, g});
    }
  }
  return out;
}

std::vector<Fig4Row> fig4_rows(double beta, const std::vector<int>& ns, const std::vector<double>& snrs) {
  std::vector<Fig4Row> out;
  for (int n : ns) {
    for (double snr : snrs) {
      Fig4Row row;
      row.n = n;
      row.beta = beta;
      row.snr = snr;
      row.thm3 = mn_bound_thm3(beta, snr, kFig4Snr0, n).bound;
      row.main = main_bound(beta, snr, kFig4Snr0, n).bound;
      row.gaussian = 1.0 / (1.0 + snr);
      out.push_back(row);
    }
  }
  return out;
}

std::vector<std::string> figure_ids() { return {"fig1a", "fig1b", "fig2", "fig3", "fig4a", "fig4b"}; }

void run_figure(const std::string& id, std::ostream& out) {
  auto num = [](double v) { return format_number(v); };
  if (id == "fig1a" || id == "fig1b") {
    const bool a = id == "fig1a";
    write_csv_row(out, {"p", a ? "h" : "bias"});
    for (const auto& r : a ? fig1a_rows(fig1_p_grid()) : fig1b_rows(fig1_p_grid()))
      write_csv_row(out, {num(r.p), num(a ? r.classical : r.bias)});
  } else if (id == "fig2") {
    write_csv_row(out, {"alpha", "q", "truth", "interp4", "interp5", "conjecture"});
    for (const auto& r : fig2_rows(fig2_alpha_grid()))
      write_csv_row(out, {num(r.alpha), num(r.q), num(r.truth), num(r.interp4), num(r.interp5), num(r.conjecture)});
  } else if (id == "fig3") {
    auto h = gap_csv_header();
    h.insert(h.begin(), {"series", "N"});
    write_csv_row(out, h);
    for (const auto& r : fig3_rows(fig3_snr_grid())) {
      auto row = gap_csv_row(r.gap);
      row.insert(row.begin(), {r.series, format_number(static_cast<long long>(r.N))});
      write_csv_row(out, row);
    }
  } else if (id == "fig4a" || id == "fig4b") {
    const bool a = id == "fig4a";
    const auto rows = a ? fig4_rows(0.01, {1}, fig4_snr_grid()) : fig4_rows(0.05, {1, 10, 40, 160}, fig4_snr_grid());
    write_csv_row(out, {"n", "beta", "snr0", "snr", "thm3", "main_bound", "gaussian_mmse"});
    for (const auto& r : rows)
      write_csv_row(out, {format_number(static_cast<long long>(r.n)), num(r.beta), num(kFig4Snr0), num(r.snr),
                          num(r.thm3), num(r.main), num(r.gaussian)});
  } else {
    std::string msg = "unknown figure '" + id + "'; available figures:";
    for (const auto& f : figure_ids()) msg += " " + f;
    throw UsageError(msg);
  }
}

}  // namespace mmpe::cli
