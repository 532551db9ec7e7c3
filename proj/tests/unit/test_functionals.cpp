#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "ssgauss/errors.hpp"
#include "ssgauss/functionals.hpp"
#include "ssgauss/moments.hpp"
#include "ssgauss/sampler.hpp"

using namespace ssgauss;

namespace {

PathBatch deterministic_batch(const ProcessSpec& spec, const UniformGrid& grid, double (*f)(double)) {
  PathBatch b;
  b.spec = spec;
  b.grid = grid;
  b.paths = 1;
  b.values.resize(spec.dim * grid.n);
  for (std::size_t c = 0; c < spec.dim; ++c) {
    for (std::size_t i = 0; i < grid.n; ++i) b.values[c * grid.n + i] = f(grid.time(i));
  }
  return b;
}

}  // namespace

TEST(Functionals, EpsFloorAndSchedule) {
  const UniformGrid grid{1024, 1.0};
  EXPECT_DOUBLE_EQ(eps_floor(ProcessSpec::brownian(), grid), 4.0 / 1024.0);
  const auto eps = default_eps_schedule(ProcessSpec::brownian(), grid);
  ASSERT_EQ(eps.size(), 4u);
  EXPECT_DOUBLE_EQ(eps.front(), 64.0 * 4.0 / 1024.0);
  for (std::size_t k = 1; k < eps.size(); ++k) EXPECT_DOUBLE_EQ(eps[k - 1] / eps[k], 4.0);
}

TEST(Functionals, LocalTimeOfZeroPath) {
  const UniformGrid grid{256, 1.0};
  const PathBatch b = deterministic_batch(ProcessSpec::brownian(), grid, [](double) { return 0.0; });
  const double eps = 0.01;
  const auto v = mollified_local_time(b, eps);
  EXPECT_NEAR(v[0], 1.0 / std::sqrt(2.0 * std::numbers::pi * eps), 1e-12);
}

TEST(Functionals, RieszOnPowerPath) {
  // |X_t|^{-beta} with X_t = sqrt(t) integrates to 1 / (1 - beta/2); the first
  // cell is exact and the trapezoid error elsewhere is O(h^{1 - beta/2}).
  const UniformGrid grid{4096, 1.0};
  const PathBatch b = deterministic_batch(ProcessSpec::brownian(), grid, [](double t) { return std::sqrt(t); });
  EXPECT_NEAR(riesz_functional(b, 0.5)[0], 4.0 / 3.0, 1e-4);
  EXPECT_NEAR(riesz_functional(b, 0.9)[0], 1.0 / 0.55, 1e-3);
}

TEST(Functionals, ProductKernelFactorizes) {
  const UniformGrid grid{1024, 1.0};
  const PathBatch b = deterministic_batch(ProcessSpec::brownian(2), grid, [](double t) { return std::sqrt(t); });
  // prod_j |X^j|^{-beta_j} = t^{-0.4}.
  EXPECT_NEAR(product_functional(b, {0.3, 0.5})[0], 1.0 / 0.6, 1e-3);
}

TEST(Functionals, ExpansionExponents) {
  const auto bm = expansion_exponents(ProcessSpec::brownian(), 3);
  EXPECT_EQ(bm, (std::vector<double>{0.5, 1.0, 2.0}));
  const auto rl = expansion_exponents(ProcessSpec::riemann_liouville(0.25), 3);
  EXPECT_EQ(rl, (std::vector<double>{1.0, 1.5, 2.0}));
}

TEST(Functionals, RichardsonWeightsEliminatePowers) {
  const std::vector<double> eps = {0.25, 0.0625, 0.015625, 0.00390625};
  const std::vector<double> ex = {0.5, 1.0, 2.0};
  const auto w = richardson_weights(eps, ex);
  ASSERT_EQ(w.size(), 4u);
  EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-12);
  for (double r : ex) {
    double s = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * std::pow(eps[k], r);
    EXPECT_NEAR(s, 0.0, 1e-13);
  }
}

TEST(Functionals, FittedOrderRecoversPower) {
  std::vector<double> eps, v;
  for (int k = 0; k < 4; ++k) {
    eps.push_back(std::pow(4.0, -k));
    v.push_back(1.0 - 0.3 * std::pow(eps.back(), 0.7));
  }
  EXPECT_NEAR(fit_extrapolation_order(eps, v), 0.7, 1e-10);
  const Extrapolation e = local_time_extrapolate(eps, v);
  EXPECT_NEAR(e.value, 1.0, 1e-10);
  EXPECT_FALSE(e.fallback);
}

TEST(Functionals, Validation) {
  EXPECT_THROW(FunctionalSpec::riesz(2.5).validate(ProcessSpec::brownian()), ConfigError);
  EXPECT_THROW(FunctionalSpec::delta().validate(ProcessSpec::fbm(0.6, 2)), ConfigError);
  EXPECT_THROW(FunctionalSpec::delta({0.1, 0.2}).validate(ProcessSpec::brownian()), ConfigError);
  EXPECT_THROW(FunctionalSpec::product({0.5}).validate(ProcessSpec::brownian(2)), ConfigError);
  EXPECT_THROW(FunctionalSpec::riesz(1.0).validate(ProcessSpec::brownian()), ConfigError);
  EXPECT_NO_THROW(FunctionalSpec::riesz(1.5).validate(ProcessSpec::brownian(2)));
  EXPECT_THROW(extrapolation_mode_from_string("linear"), ConfigError);
}

TEST(Functionals, BrownianLocalTimeMoments) {
  // Mean and second moment of the extrapolated local time against the exact values.
  const ProcessSpec bm = ProcessSpec::brownian();
  const UniformGrid grid{1024, 1.0};
  const auto gen = make_generator(bm, grid, SamplerMethod::circulant, 2024);
  const FunctionalSample s = evaluate_functional(*gen, FunctionalSpec::delta(), 4000);
  const auto [m1, se1] = sample_moment(s.values, 1);
  const auto [m2, se2] = sample_moment(s.values, 2);
  EXPECT_NEAR(m1, std::sqrt(2.0 / std::numbers::pi), 4 * se1);
  EXPECT_NEAR(m2, 1.0, 4 * se2);
  EXPECT_EQ(s.diagnostics.extrapolation_order, 0.5);
  EXPECT_GT(s.diagnostics.fitted_order, 0.0);
}

TEST(Functionals, StreamedEqualsStored) {
  const ProcessSpec spec = ProcessSpec::fbm(0.3);
  const UniformGrid grid{256, 1.0};
  const auto gen = make_generator(spec, grid, SamplerMethod::circulant, 8);
  const PathBatch batch = sample_batch(*gen, 50);
  const FunctionalSpec f = FunctionalSpec::riesz(0.5);
  EXPECT_EQ(evaluate_functional(batch, f).values, evaluate_functional(*gen, f, 50).values);
}
