#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>

#include <CLI11.hpp>

#include "cli/cli.hpp"

namespace mmpe::cli {
namespace {

// --out: file path, or stdout when empty or "-".
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      os_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw UsageError("cannot open output file '" + path + "'");
      os_ = file_.get();
    }
  }
  std::ostream& get() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_ = nullptr;
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimum mean p-th error: curves, figure data, and the verification suite", "mmpe"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string snr_text, p_text, out_path, bounds_path, method = "auto";
  auto* curve = app.add_subcommand("curve", "mmpe(X, snr, p) over an (snr, p) grid as CSV");
  curve->add_option("--preset", cfg.preset, "gaussian | bpsk | pam4 | asym_pair | pmone_vector | uniform");
  curve->add_option("--dist-file", cfg.dist_file, "distribution spec file (key=value or JSON)");
  curve->add_option("--snr", snr_text, "a:step:b or comma list")->required();
  curve->add_option("--p", p_text, "comma list of loss exponents")->required();
  curve->add_option("--n", cfg.n, "dimension for gaussian / pmone_vector");
  curve->add_option("--seed", cfg.seed, "Monte-Carlo master seed (default 0xC0FFEE)");
  curve->add_option("--samples", cfg.samples, "Monte-Carlo sample count");
  curve->add_option("--workers", cfg.workers, "Monte-Carlo worker threads (results do not depend on it)");
  curve->add_option("--method", method, "auto | closed_form | quadrature | monte_carlo");
  curve->add_option("--out", out_path, "output CSV (default stdout)");
  curve->add_option("--bounds-out", bounds_path, "also write applicable bounds with their truth");

  std::string fig_id, fig_out;
  auto* figure = app.add_subcommand("figure", "figure data series as CSV");
  figure->add_option("id", fig_id, "fig1a | fig1b | fig2 | fig3 | fig4a | fig4b")->required();
  figure->add_option("--out", fig_out, "output CSV (default stdout)");

  std::string suite = "fast";
  bool inject = false;
  auto* verify = app.add_subcommand("verify", "run the invariant suite; exit 1 on any failure");
  verify->add_option("suite", suite, "fast | full");
  verify->add_flag("--inject-fault", inject, "sentinel: force the SCPP constant c_p to 0.5");

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*curve) {
      cfg.snr = parse_grid(snr_text);
      cfg.p = parse_grid(p_text);
      if (method == "auto") cfg.method = CurveMethod::automatic;
      else if (method == "closed_form") cfg.method = CurveMethod::closed_form;
      else if (method == "quadrature") cfg.method = CurveMethod::quadrature;
      else if (method == "monte_carlo") cfg.method = CurveMethod::monte_carlo;
      else throw UsageError("unknown --method '" + method + "'");
      Sink sink(out_path, out);
      std::unique_ptr<Sink> bsink;
      if (!bounds_path.empty()) bsink = std::make_unique<Sink>(bounds_path, out);
      run_curve(cfg, sink.get(), bsink ? &bsink->get() : nullptr);
      return kExitOk;
    }
    if (*figure) {
      bool known = false;
      for (const auto& f : figure_ids()) known = known || f == fig_id;
      if (!known) run_figure(fig_id, out);  // throws the usage message
      Sink sink(fig_out, out);
      run_figure(fig_id, sink.get());
      return kExitOk;
    }
    if (*verify) {
      if (suite != "fast" && suite != "full") throw UsageError("verify suite must be fast or full");
      const auto lines = run_verify({suite == "full", inject}, out);
      for (const auto& l : lines)
        if (!l.passed) return kExitVerifyFailed;
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace mmpe::cli
