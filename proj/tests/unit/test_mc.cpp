#include <gtest/gtest.h>

#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "ssgauss/errors.hpp"
#include "ssgauss/mc.hpp"
#include "ssgauss/parallel.hpp"

using namespace ssgauss;

namespace {

// Midpoint quantiles of |N(0, 1)|: a noise-free sample of the law.
std::vector<double> half_normal_quantiles(std::size_t n) {
  const boost::math::normal z;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    v[i] = boost::math::quantile(z, 0.5 + 0.5 * u);
  }
  return v;
}

}  // namespace

TEST(Mc, KolmogorovSurvival) {
  EXPECT_NEAR(kolmogorov_survival(1.0), oracle::kKolmogorovSf1, 1e-14);
  EXPECT_NEAR(kolmogorov_survival(0.5), oracle::kKolmogorovSf0_5, 1e-12);
  EXPECT_EQ(kolmogorov_survival(0.0), 1.0);
}

TEST(Mc, TwoSampleStatistic) {
  std::vector<double> a(150), b(120);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::pow((i + 0.5) / 150.0, 2);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = (i + 0.5) / 120.0;
  const KsResult r = ks_two_sample(a, b);
  EXPECT_NEAR(r.statistic, oracle::kKsStatistic, 1e-15);
  const double ne = 150.0 * 120.0 / 270.0;
  EXPECT_NEAR(r.p_value, kolmogorov_survival(std::sqrt(ne) * r.statistic), 1e-15);
  EXPECT_EQ(ks_two_sample(b, b).statistic, 0.0);
  EXPECT_THROW(ks_two_sample(std::vector<double>(50, 1.0), b), DomainError);
}

TEST(Mc, TailFitRecoversHalfNormal) {
  const auto v = half_normal_quantiles(100000);
  TailFitOptions o;
  o.bootstrap = 40;
  const TailFit fixed = tail_fit(v, 2.0, o);
  EXPECT_NEAR(fixed.c, 0.5, 0.005);
  EXPECT_DOUBLE_EQ(fixed.p, 2.0);
  o.free_exponent = true;
  const TailFit free = tail_fit(v, 2.0, o);
  EXPECT_NEAR(free.p, 2.0, 0.03);
  EXPECT_NEAR(free.c, 0.5, 0.02);
  ASSERT_TRUE(free.p_ci.has_value());
  EXPECT_LT(free.p_ci->first, free.p_ci->second);
}

TEST(Mc, TailFitWeibullModel) {
  // S(x) = exp(-1.3 x^3) at the mean positions i / (n + 1) of the order statistics.
  const std::size_t n = 50000;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = static_cast<double>(i + 1) / static_cast<double>(n + 1);
    v[i] = std::cbrt(-std::log(s) / 1.3);
  }
  TailFitOptions o;
  o.model = TailModel::survival_weibull;
  o.free_exponent = true;
  o.bootstrap = 0;
  o.sensitivity = false;
  const TailFit f = tail_fit(v, 3.0, o);
  EXPECT_NEAR(f.p, 3.0, 0.01);
  EXPECT_NEAR(f.c, 1.3, 0.02);
  EXPECT_NEAR(f.intercept, 0.0, 0.01);
}

TEST(Mc, TailFitNeedsATail) {
  EXPECT_THROW(tail_fit(half_normal_quantiles(200), 2.0), NumericError);
  EXPECT_THROW(tail_model_from_string("pareto"), ConfigError);
}

TEST(Mc, TailFitIndependentOfThreadCount) {
  const auto v = half_normal_quantiles(20000);
  TailFitOptions o;
  o.bootstrap = 30;
  o.seed = 4;
  set_thread_count(1);
  const TailFit a = tail_fit(v, 2.0, o);
  set_thread_count(3);
  const TailFit b = tail_fit(v, 2.0, o);
  set_thread_count(0);
  EXPECT_EQ(a.c, b.c);
  EXPECT_EQ(a.c_ci, b.c_ci);
}

TEST(Mc, MomentBridgeOnHalfNormal) {
  const auto v = half_normal_quantiles(100000);
  const MomentLimit ml = moment_limit_a(v, 0.5, 10, 0);
  EXPECT_EQ(ml.m_used, 10u);
  EXPECT_NEAR(ml.bridged_c, 0.5, 0.1);
  // a_1 = log E|N| - 0.
  EXPECT_NEAR(ml.a_m[0], std::log(std::sqrt(2.0 / std::numbers::pi)), 1e-4);
}

TEST(Mc, SmallBallRecoversConstant) {
  // P(S <= eps) = exp(-1.2 eps^{-2}).
  const std::size_t n = 200000;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    v[i] = std::sqrt(-1.2 / std::log(u));
  }
  SmallBallOptions o;
  o.bootstrap = 20;
  const SmallBallFit free = small_ball_fit(v, o);
  EXPECT_NEAR(free.exponent, 2.0, 0.05);
  EXPECT_NEAR(free.c0, 1.2, 0.06);
  o.fixed_exponent = 2.0;
  const SmallBallFit fixed = small_ball_fit(v, o);
  EXPECT_NEAR(fixed.c0, 1.2, 0.01);
  EXPECT_NEAR(fixed.intercept, 0.0, 0.01);
}

TEST(Mc, TailCurveIsDecreasing) {
  const auto curve = tail_curve(half_normal_quantiles(10000));
  ASSERT_GT(curve.size(), 10u);
  for (std::size_t i = 1; i < curve.size(); ++i) {
    EXPECT_GE(curve[i].first, curve[i - 1].first);
    EXPECT_LT(curve[i].second, curve[i - 1].second);
  }
}
