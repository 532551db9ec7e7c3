#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace ssgauss {

/// Nodes and weights of a Gaussian rule on its reference interval.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(std::size_t n);

/// Gauss-Jacobi rule for the weight (1-x)^a (1+x)^b on [-1, 1], a, b > -1.
QuadratureRule gauss_jacobi(std::size_t n, double a, double b);

/// Generalized Gauss-Laguerre rule for x^a e^{-x} on [0, inf), a > -1.
QuadratureRule gauss_laguerre(std::size_t n, double a);

/// Integration of functions with algebraic endpoint behaviour
/// f(x) ~ (x-lo)^{left_exp} near lo and f(x) ~ (hi-x)^{right_exp} near hi.
///
/// Each half of the interval is covered by geometrically shrinking panels
/// with a Gauss-Legendre rule per panel.  The innermost panel at each end
/// uses a Gauss-Jacobi rule with the given exponent, so that a pure power
/// law there is integrated exactly.
struct GradedOptions {
  std::size_t panel_order = 12;
  std::size_t jacobi_order = 12;
  std::size_t levels = 24;  // geometric panels per half
  double ratio = 0.3;       // panel shrink factor
};

class GradedIntegrator {
 public:
  explicit GradedIntegrator(GradedOptions options = {});

  double integrate(const std::function<double(double)>& f, double lo, double hi,
                   double left_exp, double right_exp) const;

  const GradedOptions& options() const noexcept { return options_; }

 private:
  double half(const std::function<double(double)>& f, double end, double length,
              double sign, double exponent) const;

  GradedOptions options_;
  QuadratureRule legendre_;
};

/// Gauss-Legendre on [lo, hi] with a fixed rule.
double integrate_fixed(const std::function<double(double)>& f, double lo, double hi,
                       const QuadratureRule& legendre);

}  // namespace ssgauss
