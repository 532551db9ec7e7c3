#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "ssgauss/errors.hpp"
#include "ssgauss/functionals.hpp"
#include "ssgauss/ldp.hpp"

using namespace ssgauss;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(Ldp, BrownianClosedLoop) {
  const ChdBounds b = chd_bounds(0.5, 1);
  EXPECT_NEAR(b.lo, 0.5, 1e-12);
  EXPECT_NEAR(b.hi, 0.5, 1e-12);
  EXPECT_NEAR(e1_from_chd(0.5, 0.5, 1), 0.5, 1e-14);
  const RateFromLambda r = rate_from_lambda(0.5, 0.5);
  EXPECT_NEAR(r.c, 0.5, 1e-14);
  EXPECT_DOUBLE_EQ(r.exponent, 2.0);
  for (double lambda : {0.1, 1.0, 3.0}) {
    EXPECT_NEAR(legendre_numeric(lambda, 0.5, 0.5), lambda * lambda / 2.0, 1e-8 * lambda * lambda);
  }
}

TEST(Ldp, FbmBoundsAgainstOracle) {
  const ChdBounds b = chd_bounds(0.3, 1);
  EXPECT_LT(rel(b.c_h, oracle::kCh03), 1e-13);
  EXPECT_LT(rel(b.lo, oracle::kChdLo03), 1e-12);
  EXPECT_LT(rel(b.hi, oracle::kChdHi03), 1e-12);
  EXPECT_LT(b.lo, b.hi);
}

TEST(Ldp, LegendreOracle) {
  const RateFromLambda r = rate_from_lambda(0.7, 0.3);
  EXPECT_LT(rel(rate_function(1.5, r.c, 0.3), oracle::kLegendre_07_03_15), 1e-13);
  EXPECT_LT(rel(legendre_numeric(1.5, 0.7, 0.3), oracle::kLegendre_07_03_15), 1e-10);
}

TEST(Ldp, TailConstantRoundTripProperty) {
  // e1 -> C -> e1 for every index in (0, 1).
  for (double ab = 0.05; ab < 0.96; ab += 0.05) {
    for (double e1 : {0.01, 0.3, 4.0}) {
      const double c = rate_from_lambda(e1, ab).c;
      EXPECT_LT(rel(e1_from_chd(c, ab, 1), e1), 1e-11) << "ab=" << ab;
    }
  }
}

TEST(Ldp, ScalingOfTheTailConstant) {
  // Scaling C by f scales e1 by f^{-ab/(1-ab)}.
  const double ab = 0.3;
  const double f = 2.7;
  const double ratio = e1_from_chd(f * 1.1, ab, 1) / e1_from_chd(1.1, ab, 1);
  EXPECT_LT(rel(ratio, std::pow(f, -ab / (1.0 - ab))), 1e-13);
}

TEST(Ldp, RlFactor) {
  EXPECT_LT(rel(rl_tail_factor(0.3), oracle::kRlFactor03), 1e-10);
  EXPECT_NEAR(rl_tail_factor(0.5), 1.0, 1e-14);
}

TEST(Ldp, BifbmPrefactors) {
  const BifbmPrefactors one = bifbm_prefactors(0.4, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(one.mgf, 1.0);
  EXPECT_DOUBLE_EQ(one.tail, 1.0);
  EXPECT_NEAR(bifbm_critical_lambda_prefactor(0.5, 0.5, 1.0, 4.0), 2.0, 1e-15);
  const BifbmPrefactors p = bifbm_prefactors(0.5, 0.5, 1.0);
  EXPECT_NEAR(p.mgf, std::exp2(-0.25 / 0.75), 1e-15);
  EXPECT_NEAR(p.tail, 2.0, 1e-15);
}

TEST(Ldp, IntegrabilityForBrownianLocalTime) {
  const RateConstants bm = rate_constants(ProcessSpec::brownian(), FunctionalSpec::delta());
  ASSERT_EQ(bm.provenance, Provenance::closed_form);
  EXPECT_DOUBLE_EQ(bm.critical_p(), 2.0);
  EXPECT_EQ(integrability_classify(1.5, 10.0, bm), Integrability::finite);
  EXPECT_EQ(integrability_classify(2.5, 0.01, bm), Integrability::infinite);
  EXPECT_EQ(integrability_classify(2.0, 0.4, bm), Integrability::critical_finite);
  EXPECT_EQ(integrability_classify(2.0, 0.6, bm), Integrability::critical_infinite);
  EXPECT_EQ(integrability_classify(2.0, 0.5, bm), Integrability::unknown);
}

TEST(Ldp, IntegrabilityInsideBoundsIsUnknown) {
  const RateConstants f = rate_constants(ProcessSpec::fbm(0.3), FunctionalSpec::delta());
  ASSERT_EQ(f.provenance, Provenance::bounds_only);
  const double p = f.critical_p();
  const auto [lo, hi] = *f.c_bounds;
  EXPECT_EQ(integrability_classify(p, 0.5 * lo, f), Integrability::critical_finite);
  EXPECT_EQ(integrability_classify(p, 0.5 * (lo + hi), f), Integrability::unknown);
  EXPECT_EQ(integrability_classify(p, 2.0 * hi, f), Integrability::critical_infinite);
}

TEST(Ldp, ProvenanceByProcess) {
  EXPECT_EQ(rate_constants(ProcessSpec::aux_y(0.3), FunctionalSpec::delta()).provenance,
            Provenance::mc_estimated);
  EXPECT_EQ(rate_constants(ProcessSpec::brownian(), FunctionalSpec::riesz(0.5)).provenance,
            Provenance::mc_estimated);
  const RateConstants rl = rate_constants(ProcessSpec::riemann_liouville(0.3), FunctionalSpec::delta());
  const RateConstants fb = rate_constants(ProcessSpec::fbm(0.3), FunctionalSpec::delta());
  EXPECT_LT(rel(rl.c_bounds->first, fb.c_bounds->first * rl_tail_factor(0.3)), 1e-13);
}

TEST(Ldp, BridgeAndGrowth) {
  EXPECT_NEAR(moment_tail_bridge(0.0, 0.5), -0.5, 1e-15);
  EXPECT_NEAR(moment_tail_bridge(std::log(2.0) / 2.0, 0.5), -0.25, 1e-15);
  EXPECT_NEAR(mgf_growth_bound(4.0, 3.0), 0.5, 1e-15);
  EXPECT_NEAR(mgf_growth_bound(8.0, 3.0, true), 0.5, 1e-15);
  EXPECT_EQ(mgf_growth_bound(INFINITY, 3.0), 0.0);
}

TEST(Ldp, DomainChecks) {
  EXPECT_THROW(chd_bounds(0.6, 2), DomainError);
  EXPECT_THROW(e1_from_chd(-1.0, 0.3, 1), DomainError);
  EXPECT_THROW(rate_from_lambda(1.0, 1.0), DomainError);
}
