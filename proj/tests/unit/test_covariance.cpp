#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "ssgauss/covariance.hpp"
#include "ssgauss/errors.hpp"

using namespace ssgauss;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::vector<double> unit_grid(std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = static_cast<double>(i + 1) / static_cast<double>(n);
  return g;
}

}  // namespace

TEST(Covariance, RlAgainstQuadrature) {
  EXPECT_LT(rel(cov_rl(0.4, 0.9, 0.25), oracle::kCovRl_04_09_025), 1e-10);
  EXPECT_LT(rel(cov_rl(0.9, 0.4, 0.25), oracle::kCovRl_04_09_025), 1e-10);
  EXPECT_LT(rel(cov_rl(0.3, 1.0, 0.7), oracle::kCovRl_03_10_070), 1e-10);
  EXPECT_LT(rel(detail::cov_rl_jacobi(0.4, 0.9, 0.25), detail::cov_rl_adaptive(0.4, 0.9, 0.25)), 1e-9);
}

TEST(Covariance, AuxiliaryAgainstSpectralIntegral) {
  EXPECT_LT(rel(cov_y(0.4, 0.9, 0.2), oracle::kCovY_04_09_020), 1e-12);
}

TEST(Covariance, VolterraKernel) {
  EXPECT_LT(rel(kernel_kh(1.0, 0.4, 0.3), oracle::kKernel_10_04_03), 1e-12);
  EXPECT_LT(rel(kernel_kh(1.0, 0.4, 0.7), oracle::kKernel_10_04_07), 1e-12);
  EXPECT_THROW(kernel_kh(1.0, 1.2, 0.3), DomainError);
}

TEST(Covariance, DecompositionIdentities) {
  const auto g = unit_grid(50);
  for (double h : {0.1, 0.25, 0.4}) EXPECT_LT(verify_subfbm_identity(h, g), 1e-12);
  EXPECT_LT(verify_bifbm_identity(0.6, 0.5, g), 1e-12);
  EXPECT_LT(verify_bifbm_identity(0.3, 0.8, g), 1e-12);
  EXPECT_LT(verify_bifbm_identity_scaled(0.3, 0.8, g), 1e-12);
}

TEST(Covariance, SelfSimilarityProperty) {
  const std::vector<ProcessSpec> specs = {
      ProcessSpec::fbm(0.3),          ProcessSpec::fbm(0.8),    ProcessSpec::subfbm(0.2),
      ProcessSpec::bifbm(0.6, 0.5),   ProcessSpec::riemann_liouville(0.25),
      ProcessSpec::riemann_liouville(0.7), ProcessSpec::aux_y(0.3), ProcessSpec::brownian()};
  for (const auto& spec : specs) {
    const double h2 = 2.0 * spec.self_similarity();
    for (double a : {0.3, 2.5}) {
      for (auto [s, t] : {std::pair{0.2, 0.7}, std::pair{0.5, 0.5}, std::pair{0.9, 0.1}}) {
        const double lhs = covariance(spec, a * s, a * t);
        const double rhs = std::pow(a, h2) * covariance(spec, s, t);
        EXPECT_LT(std::abs(lhs - rhs), 1e-10 * std::abs(rhs) + 1e-14) << spec.name();
      }
    }
  }
}

TEST(Covariance, VarianceIsDiagonal) {
  for (const auto& spec : {ProcessSpec::fbm(0.3), ProcessSpec::subfbm(0.7), ProcessSpec::bifbm(0.4, 0.6),
                           ProcessSpec::riemann_liouville(0.6), ProcessSpec::aux_y(0.1)}) {
    for (double t : {0.1, 0.8, 3.0}) {
      EXPECT_LT(rel(variance(spec, t), covariance(spec, t, t)), 1e-12) << spec.name();
    }
  }
}

TEST(Covariance, MatrixAndFactorization) {
  const auto g = unit_grid(32);
  const CovMatrix cm = build_cov_matrix(ProcessSpec::fbm(0.3), g);
  const auto cond = det_factorization(cm);
  double log_det = 0.0;
  for (double v : cond) {
    EXPECT_GT(v, 0.0);
    log_det += std::log(v);
  }
  EXPECT_NEAR(log_det, std::log(cm.values.determinant()), 1e-8);
  // Conditional variances shrink below the marginal ones.
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_LE(cond[i], cm.values(i, i) * (1 + 1e-12));
}

TEST(Covariance, CubicPatchMatchesValueAndSlope) {
  const double eps = 0.05;
  const auto [a1, a2] = cubic_patch(eps, 0.3, -1.7);
  EXPECT_NEAR(a1 * eps * eps + a2 * eps * eps * eps, 0.3, 1e-14);
  EXPECT_NEAR(2 * a1 * eps + 3 * a2 * eps * eps, -1.7, 1e-12);
}

TEST(Covariance, ValidationNamesField) {
  try {
    ProcessSpec::fbm(1.2).validate();
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "process.H");
  }
  EXPECT_THROW(ProcessSpec::bifbm(0.5, 1.5).validate(), ConfigError);
  EXPECT_THROW(ProcessSpec::aux_y(0.6).validate(), ConfigError);
  EXPECT_THROW(process_kind_from_string("levy"), ConfigError);
}
