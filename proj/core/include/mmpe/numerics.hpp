#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace mmpe::num {

using Fn1 = std::function<double(double)>;

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;
};

struct QuadOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  int max_depth = 40;
  std::size_t max_intervals = 20000;
};

// Adaptive 15-point Gauss-Kronrod on [a,b]; interior breakpoints split the range first.
QuadResult integrate(const Fn1& f, double a, double b, const QuadOptions& opt = {},
                     std::span<const double> breakpoints = {});

double integrate_value(const Fn1& f, double a, double b, double abs_tol,
                       std::span<const double> breakpoints = {});

// Bracketed root of a sign-changing function (TOMS 748).
double find_root(const Fn1& f, double a, double b, double x_tol = 1e-13,
                 int max_iter = 200);

// Root of a nonincreasing function on [a,b]; clamps to the boundary when no sign change.
double decreasing_root(const Fn1& f, double a, double b, double x_tol = 1e-13);

struct MinResult {
  double x = 0.0;
  double f = 0.0;
  int iterations = 0;
};

// Golden section followed by Brent parabolic steps.
MinResult minimize_scalar(const Fn1& f, double a, double b, double x_tol = 1e-10,
                          int max_iter = 200);

// Dense grid then local refinement around the best cell; suited to nonconvex objectives.
MinResult minimize_grid(const Fn1& f, double a, double b, std::size_t grid = 1024,
                        double x_tol = 1e-10);

struct NelderMeadOptions {
  double initial_step = 0.25;
  double f_tol = 1e-14;
  double x_tol = 1e-10;
  int max_iter = 4000;
};

struct VecMinResult {
  std::vector<double> x;
  double f = 0.0;
  int iterations = 0;
};

VecMinResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                         std::vector<double> x0, const NelderMeadOptions& opt = {});

double pairwise_sum(std::span<const double> xs);

std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace mmpe::num
