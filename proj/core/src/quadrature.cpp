#include "mmpe/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace mmpe::num {
namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  int depth;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const Fn1& f, double a, double b, int depth) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double s = f(c - dx) + f(c + dx);
    kron += kWgk[j] * s;
    if (j % 2 == 1) gauss += kWg[j / 2] * s;
  }
  kron *= h;
  gauss *= h;
  return {a, b, kron, std::abs(kron - gauss), depth};
}

}  // namespace

QuadResult integrate(const Fn1& f, double a, double b, const QuadOptions& opt,
                     std::span<const double> breakpoints) {
  QuadResult out;
  if (a == b) return out;
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }
  std::vector<double> cuts{a};
  for (double x : breakpoints)
    if (x > a && x < b) cuts.push_back(x);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Segment> heap;
  std::vector<Segment> done;
  double total = 0.0;
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Segment s = gk15(f, cuts[i], cuts[i + 1], 0);
    out.evaluations += 15;
    total += s.value;
    err += s.error;
    heap.push(s);
  }
  std::size_t count = heap.size();
  while (!heap.empty()) {
    const double target = std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
    if (err <= target) break;
    Segment s = heap.top();
    heap.pop();
    if (s.depth >= opt.max_depth || count >= opt.max_intervals) {
      out.converged = false;
      done.push_back(s);
      if (count >= opt.max_intervals) break;
      continue;
    }
    const double m = 0.5 * (s.a + s.b);
    Segment l = gk15(f, s.a, m, s.depth + 1);
    Segment r = gk15(f, m, s.b, s.depth + 1);
    out.evaluations += 30;
    total += l.value + r.value - s.value;
    err += l.error + r.error - s.error;
    heap.push(l);
    heap.push(r);
    ++count;
  }
  // Re-sum from the leaves to avoid drift from incremental updates.
  std::vector<double> vals;
  std::vector<double> errs;
  while (!heap.empty()) {
    vals.push_back(heap.top().value);
    errs.push_back(heap.top().error);
    heap.pop();
  }
  for (const auto& s : done) {
    vals.push_back(s.value);
    errs.push_back(s.error);
  }
  out.value = sign * pairwise_sum(vals);
  out.error = pairwise_sum(errs);
  return out;
}

double integrate_value(const Fn1& f, double a, double b, double abs_tol,
                       std::span<const double> breakpoints) {
  QuadOptions opt;
  opt.abs_tol = abs_tol;
  return integrate(f, a, b, opt, breakpoints).value;
}

double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t s = master ^ (0xD1B54A32D192ED03ULL * (stream + 1));
  splitmix64(s);
  return splitmix64(s);
}

}  // namespace mmpe::num
