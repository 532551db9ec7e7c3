#include "ssgauss/specfun.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <utility>

#include "ssgauss/errors.hpp"
#include "ssgauss/quadrature.hpp"

namespace ssgauss {

namespace {

// Gamma on the whole real line minus the poles; used by the connection
// formula where arguments such as c - a - b may be negative.
double signed_gamma(double x) {
  if (x <= 0.0 && x == std::floor(x)) {
    throw NumericError("gauss_2f1: Gamma pole at " + std::to_string(x) +
                       " (integer c-a-b is not supported)");
  }
  return boost::math::tgamma(x);
}

double reciprocal_gamma(double x) {
  if (x <= 0.0 && x == std::floor(x)) return 0.0;
  return 1.0 / boost::math::tgamma(x);
}

std::string describe(double a, double b, double c, double z) {
  std::ostringstream os;
  os.precision(17);
  os << "(a=" << a << ", b=" << b << ", c=" << c << ", z=" << z << ")";
  return os.str();
}

}  // namespace

void QuadratureSettings::validate() const {
  if (!(rel_tol > 0.0)) throw ConfigError("rel_tol", "must be positive");
  if (!(abs_tol > 0.0)) throw ConfigError("abs_tol", "must be positive");
  if (max_subdivisions < 1) throw ConfigError("max_subdivisions", "must be at least 1");
  if (truncation_length < 0.0) throw ConfigError("truncation_length", "must be non-negative");
}

double gamma_fn(double x) {
  if (!(x > 0.0)) throw DomainError("gamma_fn: argument must be positive");
  return boost::math::tgamma(x);
}

double log_gamma_fn(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma_fn: argument must be positive");
  return boost::math::lgamma(x);
}

double beta_fn(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("beta_fn: arguments must be positive");
  // Order the arguments so that B(a, b) and B(b, a) follow the same path.
  if (a > b) std::swap(a, b);
  return std::exp(boost::math::lgamma(a) + boost::math::lgamma(b) - boost::math::lgamma(a + b));
}

namespace detail {

double hyp2f1_series(double a, double b, double c, double z) {
  if (c <= 0.0 && c == std::floor(c)) {
    throw DomainError("gauss_2f1: c must not be a non-positive integer " + describe(a, b, c, z));
  }
  if (!(std::abs(z) < 1.0)) {
    throw NumericError("gauss_2f1: series requires |z| < 1 " + describe(a, b, c, z));
  }
  double term = 1.0;
  double sum = 1.0;
  double compensation = 0.0;
  const int max_terms = 200000;
  for (int k = 0; k < max_terms; ++k) {
    term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
    // Neumaier summation keeps the alternating series for negative z accurate.
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      compensation += (sum - t) + term;
    } else {
      compensation += (term - t) + sum;
    }
    sum = t;
    if (term == 0.0 || std::abs(term) < 1e-17 * std::abs(sum)) return sum + compensation;
  }
  throw NumericError("gauss_2f1: series did not converge " + describe(a, b, c, z));
}

double hyp2f1_pfaff(double a, double b, double c, double z) {
  if (!(z < 1.0)) throw DomainError("gauss_2f1: z must be < 1 " + describe(a, b, c, z));
  const double w = z / (z - 1.0);
  return std::pow(1.0 - z, -a) * hyp2f1_series(a, c - b, c, w);
}

double hyp2f1_connection(double a, double b, double c, double z) {
  if (!(z < 1.0)) throw DomainError("gauss_2f1: z must be < 1 " + describe(a, b, c, z));
  double prefactor = 1.0;
  double w = z;
  double bb = b;
  if (z < 0.0) {
    prefactor = std::pow(1.0 - z, -a);
    w = z / (z - 1.0);
    bb = c - b;
  }
  const double s = c - a - bb;
  const double y = 1.0 - w;
  const double g_c = signed_gamma(c);
  const double first = g_c * signed_gamma(s) * reciprocal_gamma(c - a) * reciprocal_gamma(c - bb) *
                       hyp2f1_series(a, bb, 1.0 - s, y);
  const double second = std::pow(y, s) * g_c * signed_gamma(-s) * reciprocal_gamma(a) *
                        reciprocal_gamma(bb) * hyp2f1_series(c - a, c - bb, 1.0 + s, y);
  return prefactor * (first + second);
}

double hyp2f1_euler_integral(double a, double b, double c, double z) {
  if (!(z < 1.0)) throw DomainError("gauss_2f1: z must be < 1 " + describe(a, b, c, z));
  if (!(b > 0.0 && c > b)) std::swap(a, b);
  if (!(b > 0.0 && c > b)) {
    throw NumericError("gauss_2f1: Euler integral needs c > b > 0 for a or b " +
                       describe(a, b, c, z));
  }
  const GradedIntegrator integrator;
  const double integral = integrator.integrate(
      [a, b, c, z](double t) {
        return std::pow(t, b - 1.0) * std::pow(1.0 - t, c - b - 1.0) * std::pow(1.0 - z * t, -a);
      },
      0.0, 1.0, b - 1.0, c - b - 1.0);
  return std::exp(boost::math::lgamma(c) - boost::math::lgamma(b) - boost::math::lgamma(c - b)) *
         integral;
}

double phi_direct(double x) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("phi_fn: x must lie in (0, 1)");
  return x * std::pow(1.0 - x, (1.0 - x) / x) / std::pow(boost::math::tgamma(1.0 - x), 1.0 / x);
}

}  // namespace detail

double gauss_2f1(double a, double b, double c, double z) {
  if (!(z < 1.0)) throw DomainError("gauss_2f1: z must be < 1 " + describe(a, b, c, z));
  if (c <= 0.0 && c == std::floor(c)) {
    throw DomainError("gauss_2f1: c must not be a non-positive integer " + describe(a, b, c, z));
  }
  if (a > b) std::swap(a, b);
  if (z == 0.0 || a == 0.0 || b == 0.0) return 1.0;
  if (std::abs(z) <= 0.5) return detail::hyp2f1_series(a, b, c, z);
  if (z < 0.0) {
    const double w = z / (z - 1.0);
    if (w <= 0.5) return detail::hyp2f1_pfaff(a, b, c, z);
  }
  const double w = z < 0.0 ? z / (z - 1.0) : z;
  const double s = z < 0.0 ? b - a : c - a - b;
  if (s == std::floor(s)) {
    // The connection formula has a Gamma pole for integer c - a - b.
    if ((b > 0.0 && c > b) || (a > 0.0 && c > a)) {
      return detail::hyp2f1_euler_integral(a, b, c, z);
    }
    if (w < 0.9) {
      return z < 0.0 ? detail::hyp2f1_pfaff(a, b, c, z) : detail::hyp2f1_series(a, b, c, z);
    }
    throw NumericError("gauss_2f1: unsupported parameter regime " + describe(a, b, c, z));
  }
  return detail::hyp2f1_connection(a, b, c, z);
}

namespace {

// The same square on [1, inf) after s = 1/u, including the Jacobian u^{-2}.
double mvn_tail_mapped(double u, double h) {
  if (u == 0.0) return 0.0;
  const double e = std::expm1(h * std::log1p(u));
  return std::pow(u, -2.0 * h - 2.0) * e * e;
}

// Integral of the square over (0, 1].  Expanding the square isolates the two
// endpoint exponents 2h and h, so each piece has a single power law at 0.
double mvn_inner_integral(double h) {
  GradedIntegrator integrator;
  const double pure = 1.0 / (2.0 * h + 1.0);
  const double smooth = std::expm1((2.0 * h + 1.0) * std::log(2.0)) / (2.0 * h + 1.0);
  const double cross = integrator.integrate(
      [h](double s) { return std::pow((1.0 + s) * s, h); }, 0.0, 1.0, h, 0.0);
  return pure + smooth - 2.0 * cross;
}

double alpha_h_squared_analytic(double hurst) {
  const double h = hurst - 0.5;
  const GradedIntegrator integrator;
  const double inner = mvn_inner_integral(h);
  const double tail = integrator.integrate([h](double u) { return mvn_tail_mapped(u, h); }, 0.0,
                                           1.0, -2.0 * h, 0.0);
  return inner + tail + 1.0 / (2.0 * hurst);
}

double alpha_h_squared_truncated(double hurst, const QuadratureSettings& settings) {
  const double h = hurst - 0.5;
  // Beyond S the integrand is h^2 s^{2H-3} (1 + O(1/s)); the leading term is
  // integrated exactly and S is chosen so that the next order is below half
  // the absolute tolerance.
  double cutoff = settings.truncation_length;
  if (cutoff == 0.0) {
    const double next = h * h * std::abs(h - 1.0) / (3.0 - 2.0 * hurst);
    cutoff = std::pow(0.5 * settings.abs_tol / next, 1.0 / (2.0 * hurst - 3.0));
    cutoff = std::max(cutoff, 2.0);
  }
  const double inner = mvn_inner_integral(h);
  // On [1, S] integrate in x = log s with adaptive Gauss-Kronrod.
  double error = 0.0;
  const double middle = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [h](double x) {
        const double s = std::exp(x);
        const double d = std::pow(s, h) * std::expm1(h * std::log1p(1.0 / s));
        return d * d * s;
      },
      0.0, std::log(cutoff), static_cast<unsigned>(settings.max_subdivisions), settings.rel_tol,
      &error);
  if (!(error <= std::max(settings.abs_tol, settings.rel_tol * std::abs(middle)) * 10.0)) {
    throw NumericError("alpha_h: truncated quadrature error estimate " + std::to_string(error) +
                       " exceeds tolerance");
  }
  const double remainder = h * h * std::pow(cutoff, 2.0 * hurst - 2.0) / (2.0 - 2.0 * hurst);
  return inner + middle + remainder + 1.0 / (2.0 * hurst);
}

}  // namespace

double alpha_h(double hurst, const QuadratureSettings& settings) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("alpha_h: H must lie in (0, 1)");
  settings.validate();
  if (hurst == 0.5) return 1.0;
  const double squared = settings.tail == TailPolicy::analytic
                             ? alpha_h_squared_analytic(hurst)
                             : alpha_h_squared_truncated(hurst, settings);
  return std::sqrt(squared);
}

double phi_fn(double x) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("phi_fn: x must lie in (0, 1)");
  const double log_phi =
      std::log(x) + (1.0 - x) / x * std::log1p(-x) - boost::math::lgamma(1.0 - x) / x;
  return std::exp(log_phi);
}

}  // namespace ssgauss
