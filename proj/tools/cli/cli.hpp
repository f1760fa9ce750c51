#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmpe/bounds.hpp"
#include "mmpe/engine.hpp"
#include "mmpe/model.hpp"

namespace mmpe::cli {

// Bad flags, unknown presets, malformed grids: exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;

std::vector<std::string> preset_names();
// n only matters for gaussian and pmone_vector.
InputDistribution make_preset(const std::string& name, int n = 1);

// "a:step:b" (inclusive) or "v1,v2,..."; result is sorted and deduplicated.
std::vector<double> parse_grid(const std::string& text);

enum class CurveMethod { automatic, closed_form, quadrature, monte_carlo };

struct RunConfig {
  std::string preset;
  std::string dist_file;
  std::vector<double> snr;
  std::vector<double> p;
  int n = 1;
  std::uint64_t seed = kDefaultSeed;
  std::size_t samples = 1'000'000;
  unsigned workers = 1;
  CurveMethod method = CurveMethod::automatic;
};

struct NamedDistribution {
  std::string id;
  InputDistribution dist;
};
NamedDistribution resolve_distribution(const RunConfig& cfg);

MmpeEstimate curve_point(const InputDistribution& d, double snr, double p, const RunConfig& cfg);
// Bounds that apply at (snr, p) with their truth attached.
std::vector<BoundReport> bounds_at(const InputDistribution& d, const MmpeEstimate& est, const RunConfig& cfg);

void run_curve(const RunConfig& cfg, std::ostream& out, std::ostream* bounds_out = nullptr);

std::vector<std::string> figure_ids();
void run_figure(const std::string& id, std::ostream& out);

struct VerifyOptions {
  bool full = false;
  bool inject_fault = false;
};

struct VerifyLine {
  std::string module;
  std::string name;
  bool passed = false;
  double margin = 0.0;
  std::string detail;
};

std::vector<VerifyLine> run_verify(const VerifyOptions& opt, std::ostream& report);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mmpe::cli
