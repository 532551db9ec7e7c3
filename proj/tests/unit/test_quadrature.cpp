#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ssgauss/quadrature.hpp"
#include "ssgauss/specfun.hpp"

using namespace ssgauss;

namespace {

double weighted_sum(const QuadratureRule& r, double (*f)(double)) {
  double s = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(r.nodes[i]);
  return s;
}

}  // namespace

TEST(Quadrature, LegendreExactForPolynomials) {
  const auto r = gauss_legendre(8);
  // Degree 15 is the highest integrated exactly by 8 nodes.
  EXPECT_NEAR(weighted_sum(r, [](double x) { return std::pow(x, 14); }), 2.0 / 15.0, 1e-14);
  EXPECT_NEAR(weighted_sum(r, [](double x) { return std::pow(x, 15) + x * x; }), 2.0 / 3.0, 1e-14);
}

TEST(Quadrature, JacobiWeightMass) {
  for (double a : {-0.7, -0.2, 0.5}) {
    for (double b : {-0.4, 0.0, 1.3}) {
      const auto r = gauss_jacobi(10, a, b);
      const double mass = std::exp2(a + b + 1.0) * beta_fn(a + 1.0, b + 1.0);
      EXPECT_NEAR(weighted_sum(r, [](double) { return 1.0; }), mass, 1e-12 * mass);
    }
  }
}

TEST(Quadrature, LaguerreMoments) {
  const double a = -0.35;
  const auto r = gauss_laguerre(12, a);
  double m2 = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) m2 += r.weights[i] * r.nodes[i] * r.nodes[i];
  EXPECT_NEAR(m2, gamma_fn(a + 3.0), 1e-12);
}

TEST(Quadrature, GradedEndpointSingularities) {
  const GradedIntegrator gi;
  const double v = gi.integrate([](double x) { return std::pow(x, -0.7) * std::pow(1.0 - x, -0.3); },
                                0.0, 1.0, -0.7, -0.3);
  EXPECT_NEAR(v, std::numbers::pi / std::sin(0.3 * std::numbers::pi), 1e-10);
  // Smooth factor on top of the singular weight.
  const double w = gi.integrate([](double x) { return std::cos(x) * std::pow(x, -0.5); }, 0.0, 2.0,
                                -0.5, 0.0);
  EXPECT_NEAR(w, 1.8882490336945141, 1e-11);  // mpmath
}

TEST(Quadrature, FixedRuleOnInterval) {
  const auto r = gauss_legendre(20);
  EXPECT_NEAR(integrate_fixed([](double x) { return std::exp(x); }, 1.0, 3.0, r),
              std::exp(3.0) - std::exp(1.0), 1e-12);
}
