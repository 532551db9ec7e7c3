#pragma once

#include <cstddef>

namespace ssgauss {

enum class TailPolicy {
  analytic,    // exact map s -> 1/s of the tail onto (0, 1]
  truncation,  // integrate to a finite cutoff, add the leading power-law remainder
};

struct QuadratureSettings {
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  std::size_t max_subdivisions = 64;
  TailPolicy tail = TailPolicy::analytic;
  // Only used with TailPolicy::truncation; 0 selects the cutoff from abs_tol.
  double truncation_length = 0.0;

  void validate() const;
};

double gamma_fn(double x);
double log_gamma_fn(double x);
double beta_fn(double a, double b);

/// Gauss hypergeometric function 2F1(a, b; c; z) for z < 1.
///
/// Uses the power series for |z| <= 1/2, the Pfaff transformation for
/// negative z and the 1 - z connection formula when the transformed argument
/// is close to 1.  Relative error is about 1e-13 in the regime the kernel of
/// the Volterra representation of fBm needs (c - a - b not an integer).
double gauss_2f1(double a, double b, double c, double z);

namespace detail {
// Individual routes, exposed so that tests can cross-check them.
double hyp2f1_series(double a, double b, double c, double z);
double hyp2f1_pfaff(double a, double b, double c, double z);
double hyp2f1_connection(double a, double b, double c, double z);
// Euler integral representation, needs c > b > 0 (or c > a > 0).
double hyp2f1_euler_integral(double a, double b, double c, double z);
}  // namespace detail

/// Mandelbrot-Van Ness constant
///   (int_0^inf [(1+s)^{H-1/2} - s^{H-1/2}]^2 ds + 1/(2H))^{1/2}.
double alpha_h(double hurst, const QuadratureSettings& settings = {});

/// phi(x) = x (1-x)^{(1-x)/x} / Gamma(1-x)^{1/x}, evaluated in log domain.
double phi_fn(double x);

namespace detail {
double phi_direct(double x);
}

}  // namespace ssgauss
