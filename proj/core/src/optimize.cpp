#include "mmpe/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <boost/math/tools/toms748_solve.hpp>

namespace mmpe::num {

double find_root(const Fn1& f, double a, double b, double x_tol, int max_iter) {
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0) == (fb > 0)) throw std::domain_error("find_root: no sign change");
  std::uintmax_t iters = static_cast<std::uintmax_t>(max_iter);
  auto tol = [x_tol](double lo, double hi) { return std::abs(hi - lo) <= x_tol; };
  auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
  return 0.5 * (r.first + r.second);
}

double decreasing_root(const Fn1& f, double a, double b, double x_tol) {
  const double fa = f(a);
  if (fa <= 0.0) return a;
  const double fb = f(b);
  if (fb >= 0.0) return b;
  std::uintmax_t iters = 200;
  auto tol = [x_tol](double lo, double hi) { return std::abs(hi - lo) <= x_tol; };
  auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
  return 0.5 * (r.first + r.second);
}

MinResult minimize_scalar(const Fn1& f, double a, double b, double x_tol, int max_iter) {
  constexpr double kGold = 0.3819660112501051;
  const double eps = std::sqrt(std::numeric_limits<double>::epsilon()) * 1e-3;
  double x = a + kGold * (b - a);
  double w = x, v = x;
  double fx = f(x), fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  int it = 0;
  for (; it < max_iter; ++it) {
    const double m = 0.5 * (a + b);
    const double tol1 = eps * std::abs(x) + x_tol / 3.0;
    const double tol2 = 2.0 * tol1;
    if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) break;
    bool golden = true;
    if (std::abs(e) > tol1) {
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2.0 * (q - r);
      if (q > 0.0) p = -p;
      q = std::abs(q);
      const double etemp = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * etemp) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (m >= x) ? tol1 : -tol1;
        golden = false;
      }
    }
    if (golden) {
      e = (x >= m) ? a - x : b - x;
      d = kGold * e;
    }
    const double u = (std::abs(d) >= tol1) ? x + d : x + (d > 0 ? tol1 : -tol1);
    const double fu = f(u);
    if (fu <= fx) {
      (u >= x ? a : b) = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      (u < x ? a : b) = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  return {x, fx, it};
}

MinResult minimize_grid(const Fn1& f, double a, double b, std::size_t grid, double x_tol) {
  if (grid < 2) grid = 2;
  const double h = (b - a) / static_cast<double>(grid - 1);
  std::size_t best = 0;
  double fbest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid; ++i) {
    const double fi = f(a + h * static_cast<double>(i));
    if (fi < fbest) {
      fbest = fi;
      best = i;
    }
  }
  const double lo = a + h * static_cast<double>(best > 0 ? best - 1 : 0);
  const double hi = a + h * static_cast<double>(std::min(best + 1, grid - 1));
  MinResult r = minimize_scalar(f, lo, hi, x_tol);
  if (r.f > fbest) {
    r.x = a + h * static_cast<double>(best);
    r.f = fbest;
  }
  return r;
}

VecMinResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                         std::vector<double> x0, const NelderMeadOptions& opt) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> s(n + 1, x0);
  std::vector<double> fs(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double step = x0[i] != 0.0 ? opt.initial_step * std::max(1.0, std::abs(x0[i]))
                                     : opt.initial_step;
    s[i + 1][i] += step;
  }
  for (std::size_t i = 0; i <= n; ++i) fs[i] = f(s[i]);

  std::vector<std::size_t> idx(n + 1);
  std::vector<double> c(n), xr(n), xe(n), xc(n);
  int it = 0;
  for (; it < opt.max_iter; ++it) {
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return fs[i] < fs[j]; });
    const std::size_t lo = idx[0], hi = idx[n], nh = idx[n - 1];
    double spread = 0.0;
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        spread = std::max(spread, std::abs(s[idx[i]][k] - s[lo][k]));
    if (std::abs(fs[hi] - fs[lo]) <= opt.f_tol && spread <= opt.x_tol) break;

    std::fill(c.begin(), c.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i)
      if (i != hi)
        for (std::size_t k = 0; k < n; ++k) c[k] += s[i][k] / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) xr[k] = c[k] + (c[k] - s[hi][k]);
    const double fr = f(xr);
    if (fr < fs[lo]) {
      for (std::size_t k = 0; k < n; ++k) xe[k] = c[k] + 2.0 * (c[k] - s[hi][k]);
      const double fe = f(xe);
      if (fe < fr) {
        s[hi] = xe; fs[hi] = fe;
      } else {
        s[hi] = xr; fs[hi] = fr;
      }
    } else if (fr < fs[nh]) {
      s[hi] = xr; fs[hi] = fr;
    } else {
      const bool outside = fr < fs[hi];
      for (std::size_t k = 0; k < n; ++k)
        xc[k] = outside ? c[k] + 0.5 * (xr[k] - c[k]) : c[k] + 0.5 * (s[hi][k] - c[k]);
      const double fc = f(xc);
      if (fc < std::min(fr, fs[hi])) {
        s[hi] = xc; fs[hi] = fc;
      } else {
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == lo) continue;
          for (std::size_t k = 0; k < n; ++k) s[i][k] = s[lo][k] + 0.5 * (s[i][k] - s[lo][k]);
          fs[i] = f(s[i]);
        }
      }
    }
  }
  const auto best = std::min_element(fs.begin(), fs.end()) - fs.begin();
  return {s[static_cast<std::size_t>(best)], fs[static_cast<std::size_t>(best)], it};
}

}  // namespace mmpe::num
