#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "cli/cli.hpp"
#include "mmpe/csv.hpp"

namespace mmpe::cli {

std::vector<std::string> preset_names() {
  return {"gaussian", "bpsk", "pam4", "asym_pair", "pmone_vector", "uniform"};
}

InputDistribution make_preset(const std::string& name, int n) {
  if (n < 1) throw UsageError("--n must be >= 1");
  const bool any_n = name == "gaussian" || name == "pmone_vector";
  if (!any_n && n != 1) throw UsageError("preset '" + name + "' is scalar; --n must be 1");
  if (name == "gaussian") return make_gaussian(1.0, n);
  if (name == "bpsk") return make_scalar_atoms({-1.0, 1.0}, {0.5, 0.5});
  if (name == "pam4") return make_uniform_pam(4);
  if (name == "asym_pair") return make_scalar_atoms({-3.0, 1.0}, {0.01, 0.99});
  if (name == "pmone_vector") return make_pm_one_vector(n);
  if (name == "uniform") return make_uniform_ball(1, 1.0);
  std::string msg = "unknown preset '" + name + "'; available presets:";
  for (const auto& p : preset_names()) msg += " " + p;
  throw UsageError(msg);
}

namespace {

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + s + "'");
  }
  while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
  if (used != s.size() || !std::isfinite(v)) throw UsageError("not a finite number: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  if (text.empty()) throw UsageError("empty grid");
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw UsageError("range grid must be a:step:b, got '" + text + "'");
    const double a = parse_double(parts[0]);
    const double step = parse_double(parts[1]);
    const double b = parse_double(parts[2]);
    if (!(step > 0.0)) throw UsageError("grid step must be positive");
    if (b < a) throw UsageError("grid end must be >= start");
    const double count = std::floor((b - a) / step + 1e-9);
    if (count > 1e6) throw UsageError("grid too large");
    for (long i = 0; i <= static_cast<long>(count); ++i) out.push_back(a + static_cast<double>(i) * step);
  } else {
    for (const auto& part : split(text, ',')) out.push_back(parse_double(part));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.empty()) throw UsageError("empty grid");
  return out;
}

NamedDistribution resolve_distribution(const RunConfig& cfg) {
  if (!cfg.preset.empty() && !cfg.dist_file.empty()) throw UsageError("use either --preset or --dist-file, not both");
  if (!cfg.preset.empty()) {
    std::string id = cfg.preset;
    if (cfg.n != 1) id += "_n" + std::to_string(cfg.n);
    return {id, make_preset(cfg.preset, cfg.n)};
  }
  if (cfg.dist_file.empty()) throw UsageError("one of --preset or --dist-file is required");
  InputDistribution d;
  try {
    d = build_distribution(load_distribution_file(cfg.dist_file));
  } catch (const std::exception& e) {
    throw UsageError(std::string("invalid distribution file: ") + e.what());
  }
  return {std::filesystem::path(cfg.dist_file).stem().string(), std::move(d)};
}

MmpeEstimate curve_point(const InputDistribution& d, double snr, double p, const RunConfig& cfg) {
  McSettings mc;
  mc.samples = cfg.samples;
  mc.seed = cfg.seed;
  mc.workers = cfg.workers;
  switch (cfg.method) {
    case CurveMethod::closed_form: {
      const auto* g = std::get_if<Gaussian>(&d);
      if (!g) throw UsageError("--method closed_form needs a Gaussian input");
      return mmpe_gaussian_closed_form(g->sigma2, snr, p, g->n);
    }
    case CurveMethod::quadrature:
      if (dimension(d) != 1) throw UsageError("--method quadrature needs n = 1");
      return mmpe_scalar(d, snr, p);
    case CurveMethod::monte_carlo:
      return mmpe_vector_mc(d, snr, p, mc);
    case CurveMethod::automatic:
      break;
  }
  return mmpe(d, snr, p, {}, mc);
}

std::vector<BoundReport> bounds_at(const InputDistribution& d, const MmpeEstimate& est, const RunConfig& cfg) {
  const double snr = est.snr;
  const double p = est.p;
  const int n = dimension(d);
  std::vector<BoundReport> out;
  std::optional<MmpeEstimate> cm_err;
  auto cm_error = [&]() -> const MmpeEstimate& {
    if (!cm_err) {
      if (n == 1) {
        MmpeEstimate e;
        e.value = p_error_of(conditional_mean_estimator(d, snr), d, snr, p);
        cm_err = e;
      } else {
        McSettings mc;
        mc.samples = cfg.samples;
        mc.seed = cfg.seed;
        mc.workers = cfg.workers;
        cm_err = p_error_of_mc(conditional_mean_estimator(d, snr), d, snr, p, mc);
      }
    }
    return *cm_err;
  };
  for (auto b : trivial_bounds(d, snr, p)) {
    if (b.name.rfind("cm_error", 0) == 0) {
      b.truth = cm_error().value;
      b.truth_stderr = cm_error().std_error;
    } else {
      b.truth = est.value;
      b.truth_stderr = est.std_error;
    }
    out.push_back(b);
  }
  if (p >= 1.0) {
    auto b = gaussian_hardest(hardest_sigma2(d, p), snr, p, n);
    b.truth = est.value;
    b.truth_stderr = est.std_error;
    out.push_back(b);
  }
  if (const auto* a = std::get_if<DiscreteAtoms>(&d); a && a->size() >= 2) {
    for (auto b : discrete_input_bound(distance_stats(*a), a->probs, snr, p, n)) {
      b.truth = est.value;
      b.truth_stderr = est.std_error;
      out.push_back(b);
    }
  }
  return out;
}

void run_curve(const RunConfig& cfg, std::ostream& out, std::ostream* bounds_out) {
  if (cfg.snr.empty() || cfg.p.empty()) throw UsageError("--snr and --p grids must be nonempty");
  if (!std::is_sorted(cfg.snr.begin(), cfg.snr.end()) || !std::is_sorted(cfg.p.begin(), cfg.p.end()))
    throw UsageError("grids must be sorted");
  for (double s : cfg.snr)
    if (!(s >= 0.0)) throw UsageError("snr values must be >= 0");
  for (double p : cfg.p)
    if (!(p > 0.0)) throw UsageError("p values must be > 0");
  if (cfg.samples < 1) throw UsageError("--samples must be >= 1");
  const NamedDistribution nd = resolve_distribution(cfg);

  write_csv_row(out, mmpe_csv_header());
  if (bounds_out) {
    auto h = bound_csv_header();
    h.insert(h.begin(), "dist_id");
    write_csv_row(*bounds_out, h);
  }
  for (double p : cfg.p) {
    for (double snr : cfg.snr) {
      MmpeEstimate e = curve_point(nd.dist, snr, p, cfg);
      e.dist_id = nd.id;
      write_csv_row(out, mmpe_csv_row(e));
      if (bounds_out) {
        for (const auto& b : bounds_at(nd.dist, e, cfg)) {
          auto row = bound_csv_row(b);
          row.insert(row.begin(), nd.id);
          write_csv_row(*bounds_out, row);
        }
      }
    }
  }
}

}  // namespace mmpe::cli
