#pragma once

namespace mmpe {

struct MomentOrder {
  double p = 2.0;
  double q = 2.0;
  double r = 2.0;

  // Throws unless 0 < p <= q <= r.
  void validate() const;
  // alpha = (1/q - 1/r)/(1/p - 1/r); 1 when p == r.
  double alpha() const;
};

// Gamma(x; a) = integral_a^inf t^{x-1} e^{-t} dt.
double upper_incomplete_gamma(double x, double a);
double log_upper_incomplete_gamma(double x, double a);

// Qbar(x; a) = Gamma(x; a) / Gamma(x).
double generalized_q(double x, double a);
double log_generalized_q(double x, double a);

// Standard normal tail Q(x).
double gaussian_q(double x);

// ||Z||_p^p = (1/n) 2^{p/2} Gamma(n/2+p/2)/Gamma(n/2).
double gaussian_norm_moment(int n, double p);

// ||V||_p^p for V uniform on the n-ball of radius r.
double uniform_ball_moment(int n, double p, double r);

double ball_volume(int n, double r);
double log_ball_volume(int n, double r);

// k_{n,p}.
double fano_constant(int n, double p);
double log_fano_constant(int n, double p);

}  // namespace mmpe
