#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "ssgauss/covariance.hpp"
#include "ssgauss/errors.hpp"
#include "ssgauss/specfun.hpp"

using namespace ssgauss;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(Specfun, GammaFamily) {
  EXPECT_LT(rel(gamma_fn(0.3), oracle::kGamma0_3), 1e-14);
  EXPECT_LT(rel(log_gamma_fn(7.5), oracle::kLogGamma7_5), 1e-14);
  EXPECT_LT(rel(beta_fn(0.7, 0.8), oracle::kBeta0_7_0_8), 1e-13);
}

TEST(Specfun, Hypergeometric) {
  EXPECT_LT(rel(gauss_2f1(-0.2, 0.2, 0.8, -0.3), oracle::kHyp_a), 1e-13);
  EXPECT_LT(rel(gauss_2f1(-0.2, 0.2, 0.8, -5.0), oracle::kHyp_b), 1e-13);
  EXPECT_LT(rel(gauss_2f1(0.3, -0.3, 1.3, -50.0), oracle::kHyp_c), 1e-13);
  EXPECT_LT(rel(gauss_2f1(0.25, 0.25, 1.25, -3.0), oracle::kHyp_d), 1e-12);
  EXPECT_LT(rel(gauss_2f1(0.5, 0.5, 1.5, 0.4), oracle::kHyp_e), 1e-13);
  EXPECT_LT(rel(gauss_2f1(-0.4, 0.4, 0.1, -0.9), oracle::kHyp_f), 1e-13);
}

TEST(Specfun, HypergeometricRoutesAgree) {
  EXPECT_LT(rel(detail::hyp2f1_series(0.5, 0.5, 1.5, 0.4), oracle::kHyp_e), 1e-14);
  EXPECT_LT(rel(detail::hyp2f1_pfaff(-0.2, 0.2, 0.8, -5.0), oracle::kHyp_b), 1e-13);
  EXPECT_LT(rel(detail::hyp2f1_euler_integral(0.25, 0.25, 1.25, -3.0), oracle::kHyp_d), 1e-10);
  // The kernel regime: a = H - 1/2, b = 1/2 - H, c = H + 1/2, z = 1 - t/s < 0.
  for (double h : {0.15, 0.3, 0.7, 0.85}) {
    for (double z : {-0.05, -0.4, -0.9}) {
      const double s = detail::hyp2f1_series(h - 0.5, 0.5 - h, h + 0.5, z);
      const double p = detail::hyp2f1_pfaff(h - 0.5, 0.5 - h, h + 0.5, z);
      EXPECT_LT(rel(p, s), 1e-12) << "H=" << h << " z=" << z;
    }
    for (double z : {-2.0, -20.0, -200.0}) {
      const double p = detail::hyp2f1_pfaff(h - 0.5, 0.5 - h, h + 0.5, z);
      const double c = detail::hyp2f1_connection(h - 0.5, 0.5 - h, h + 0.5, z);
      EXPECT_LT(rel(c, p), 1e-10) << "H=" << h << " z=" << z;
    }
  }
}

TEST(Specfun, MvnConstant) {
  EXPECT_LT(rel(alpha_h(0.1), oracle::kAlphaH1), 1e-10);
  EXPECT_LT(rel(alpha_h(0.3), oracle::kAlphaH3), 1e-10);
  EXPECT_LT(rel(alpha_h(0.7), oracle::kAlphaH7), 1e-10);
  EXPECT_LT(rel(alpha_h(0.9), oracle::kAlphaH9), 1e-10);
  EXPECT_NEAR(alpha_h(0.5), 1.0, 1e-14);
}

TEST(Specfun, MvnConstantMatchesClosedForm) {
  for (double h = 0.05; h < 1.0; h += 0.05) {
    const double a = alpha_h(h);
    EXPECT_LT(rel(a * a, c_alpha(h)), 1e-10) << "H=" << h;
  }
}

TEST(Specfun, MvnConstantTruncationPolicy) {
  QuadratureSettings s;
  s.tail = TailPolicy::truncation;
  EXPECT_LT(rel(alpha_h(0.3, s), oracle::kAlphaH3), 1e-8);
  EXPECT_LT(rel(alpha_h(0.7, s), oracle::kAlphaH7), 1e-8);
}

TEST(Specfun, Phi) {
  EXPECT_LT(rel(phi_fn(0.3), oracle::kPhi3), 1e-13);
  EXPECT_LT(rel(phi_fn(0.5), oracle::kPhi5), 1e-13);
  EXPECT_LT(rel(phi_fn(0.8), oracle::kPhi8), 1e-13);
  EXPECT_NEAR(phi_fn(0.5), 0.25 / std::numbers::pi, 1e-15);
  for (double x = 0.05; x < 0.96; x += 0.05) EXPECT_LT(rel(detail::phi_direct(x), phi_fn(x)), 1e-12);
}

TEST(Specfun, DomainErrors) {
  EXPECT_THROW(alpha_h(0.0), DomainError);
  EXPECT_THROW(alpha_h(1.0), DomainError);
  EXPECT_THROW(phi_fn(1.0), DomainError);
  EXPECT_THROW(gauss_2f1(0.1, 0.2, 0.3, 1.5), DomainError);
}
