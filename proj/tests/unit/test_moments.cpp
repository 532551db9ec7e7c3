#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "ssgauss/covariance.hpp"
#include "ssgauss/moments.hpp"

using namespace ssgauss;

TEST(Moments, BrownianExactMoments) {
  const ProcessSpec bm = ProcessSpec::brownian();
  EXPECT_NEAR(exact_delta_moment(bm, 1).value, std::sqrt(2.0 / std::numbers::pi), 1e-10);
  EXPECT_NEAR(exact_delta_moment(bm, 2).value, 1.0, 1e-8);
  EXPECT_NEAR(exact_delta_moment(bm, 3).value, oracle::kBmDeltaM3, 1e-6);
}

TEST(Moments, FbmAndRlExactMoments) {
  EXPECT_NEAR(exact_delta_moment(ProcessSpec::fbm(0.3), 1).value, oracle::kFbm03DeltaM1, 1e-10);
  EXPECT_NEAR(exact_delta_moment(ProcessSpec::fbm(0.3), 2).value, oracle::kFbm03DeltaM2, 1e-7);
  EXPECT_NEAR(exact_delta_moment(ProcessSpec::riemann_liouville(0.25), 1).value,
              oracle::kRl025DeltaM1, 1e-10);
}

TEST(Moments, DeltaProductExpectationAtOneTime) {
  const double v = delta_product_expectation(ProcessSpec::fbm(0.3), std::vector<double>{0.5});
  EXPECT_NEAR(v, 1.0 / std::sqrt(2.0 * std::numbers::pi * std::pow(0.5, 0.6)), 1e-14);
}

TEST(Moments, Dirichlet) {
  EXPECT_NEAR(dirichlet_simplex(2, 0.25), oracle::kDirichlet2_025, 1e-13);
  EXPECT_NEAR(dirichlet_simplex(3, 0.5), oracle::kDirichlet3_050, 1e-12);
  for (std::size_t m = 1; m <= 3; ++m) {
    for (double theta : {0.25, 0.5}) {
      EXPECT_NEAR(dirichlet_simplex_quadrature(m, theta), dirichlet_simplex(m, theta), 1e-8)
          << "m=" << m << " theta=" << theta;
    }
  }
}

TEST(Moments, ExponentialTimeRoutesAgree) {
  for (const auto& spec : {ProcessSpec::brownian(), ProcessSpec::riemann_liouville(0.25),
                           ProcessSpec::fbm(0.3)}) {
    for (std::size_t m = 1; m <= 2; ++m) {
      const auto direct = exp_time_moment(spec, m);
      const auto scaled = exp_time_moment_scaling(spec, m);
      EXPECT_NEAR(direct.value, scaled.value, 1e-6 * scaled.value) << spec.name() << " m=" << m;
    }
  }
  EXPECT_NEAR(exp_time_moment(ProcessSpec::brownian(), 1).value, std::sqrt(0.5), 1e-8);
  EXPECT_NEAR(exp_time_moment(ProcessSpec::brownian(), 2).value, 0.5, 1e-7);
}

TEST(Moments, SubadditivitySlackNonNegative) {
  for (const auto& spec : {ProcessSpec::brownian(), ProcessSpec::riemann_liouville(0.25)}) {
    for (const auto& s : subadditivity_check(spec, {{1, 1}, {1, 2}})) {
      EXPECT_GE(s.slack, -1e-4) << spec.name() << " (" << s.m << "," << s.n << ")";
    }
  }
}

TEST(Moments, RlLowerBoundBelowExact) {
  for (double alpha : {0.25, 0.4}) {
    const auto spec = ProcessSpec::riemann_liouville(alpha);
    for (std::size_t m = 1; m <= 2; ++m) {
      EXPECT_LE(rl_moment_lower_bound(alpha, 1, m), exact_delta_moment(spec, m).value)
          << "alpha=" << alpha << " m=" << m;
    }
  }
}

TEST(Moments, ShiftInequality) {
  const ProcessSpec spec = ProcessSpec::fbm(0.3);
  const std::vector<double> times = {0.3, 0.8};
  const std::vector<double> zero = {0.0, 0.0};
  const ShiftCheck none = shift_inequality_check(spec, times, zero, 0.01);
  EXPECT_NEAR(none.margin, 0.0, 1e-14);
  const std::vector<double> shifts = {0.2, -0.1};
  const ShiftCheck some = shift_inequality_check(spec, times, shifts, 0.01);
  EXPECT_TRUE(some.holds);
  EXPECT_GT(some.margin, 0.0);
  EXPECT_TRUE(shift_inequality_scan(ProcessSpec::riemann_liouville(0.25), 2, 50, 0.01, 3).holds);
}

TEST(Moments, SampleMomentAndGamma) {
  const std::vector<double> v = {1.0, 2.0, 3.0};
  const auto [m1, se1] = sample_moment(v, 1);
  EXPECT_DOUBLE_EQ(m1, 2.0);
  EXPECT_NEAR(se1, std::sqrt(1.0 / 3.0), 1e-14);
  EXPECT_NEAR(gamma_moment_of_exp(2.0), 2.0, 1e-14);
}

TEST(Moments, AgreementRule) {
  MomentReport r;
  r.exact = 1.0;
  r.exact_error = 0.0;
  r.mc = 1.05;
  r.mc_standard_error = 0.02;
  EXPECT_TRUE(r.agrees(3.0));
  EXPECT_FALSE(r.agrees(2.0));
  r.mc.reset();
  EXPECT_TRUE(r.agrees());
}
