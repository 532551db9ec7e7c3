#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "ssgauss/covariance.hpp"
#include "ssgauss/errors.hpp"
#include "ssgauss/parallel.hpp"
#include "ssgauss/sampler.hpp"

using namespace ssgauss;

namespace {

// Sample covariance of columns i and j over all paths of component 0.
double sample_cov(const PathBatch& b, std::size_t i, std::size_t j) {
  double s = 0.0;
  for (std::size_t p = 0; p < b.paths; ++p) s += b.at(p, 0, i) * b.at(p, 0, j);
  return s / static_cast<double>(b.paths);
}

// Checks Var(X_1) and Cov(X_{1/2}, X_1) within 5 standard errors.
void expect_covariance(const PathBatch& b, const ProcessSpec& spec) {
  const std::size_t n = b.grid.n;
  const std::size_t half = n / 2 - 1;
  const std::size_t last = n - 1;
  const double v = covariance(spec, 1.0, 1.0);
  const double c = covariance(spec, 0.5, 1.0);
  const double se_v = v * std::sqrt(2.0 / static_cast<double>(b.paths));
  const double se_c = std::sqrt((covariance(spec, 0.5, 0.5) * v + c * c) / static_cast<double>(b.paths));
  EXPECT_NEAR(sample_cov(b, last, last), v, 5 * se_v) << spec.name();
  EXPECT_NEAR(sample_cov(b, half, last), c, 5 * se_c) << spec.name();
}

}  // namespace

TEST(Sampler, DefaultMethods) {
  EXPECT_EQ(default_method(ProcessSpec::fbm(0.3)), SamplerMethod::circulant);
  EXPECT_EQ(default_method(ProcessSpec::brownian()), SamplerMethod::circulant);
  EXPECT_EQ(default_method(ProcessSpec::riemann_liouville(0.25)), SamplerMethod::rl_kernel);
  EXPECT_EQ(default_method(ProcessSpec::subfbm(0.3)), SamplerMethod::decomposed);
  EXPECT_EQ(default_method(ProcessSpec::bifbm(0.6, 0.5)), SamplerMethod::cholesky);
  EXPECT_EQ(sampler_method_from_string("rl-kernel"), SamplerMethod::rl_kernel);
  EXPECT_THROW(sampler_method_from_string("fourier"), ConfigError);
}

TEST(Sampler, CholeskyCovariance) {
  const UniformGrid grid{16, 1.0};
  for (const auto& spec : {ProcessSpec::bifbm(0.6, 0.5), ProcessSpec::aux_y(0.3)}) {
    expect_covariance(sample_cholesky(spec, grid, 20000, 11), spec);
  }
}

TEST(Sampler, CirculantCovariance) {
  const ProcessSpec spec = ProcessSpec::fbm(0.3);
  expect_covariance(sample_fbm_circulant(0.3, 64, 1.0, 20000, 12), spec);
  expect_covariance(sample_fbm_circulant(0.5, 64, 1.0, 20000, 13), ProcessSpec::brownian());
}

TEST(Sampler, DecomposedSubFbmCovariance) {
  const ProcessSpec spec = ProcessSpec::subfbm(0.3);
  expect_covariance(sample_subfbm_decomposed(0.3, UniformGrid{64, 1.0}, 20000, 14), spec);
}

TEST(Sampler, RlKernelImpliedCovariance) {
  const double alpha = 0.3;
  const std::size_t n = 64;
  const auto c = rl_kernel_implied_covariance(alpha, n, 1.0);
  const UniformGrid grid{n, 1.0};
  for (std::size_t i = 0; i < n; ++i) {
    const double t = grid.time(i);
    EXPECT_NEAR(c(i, i), cov_rl(t, t, alpha), 1e-12 * cov_rl(t, t, alpha));
  }
  // Off-diagonal entries converge; at coarse lags they agree to a few percent.
  EXPECT_NEAR(c(31, 63), cov_rl(0.5, 1.0, alpha), 0.03 * cov_rl(0.5, 1.0, alpha));
  expect_covariance(sample_rl_kernel(alpha, n, 1.0, 20000, 15), ProcessSpec::riemann_liouville(alpha));
}

TEST(Sampler, BitwiseIndependentOfThreadCount) {
  const UniformGrid grid{128, 1.0};
  const ProcessSpec spec = ProcessSpec::fbm(0.3, 2);
  set_thread_count(1);
  const auto gen1 = make_generator(spec, grid, SamplerMethod::circulant, 99);
  const PathBatch a = sample_batch(*gen1, 200);
  set_thread_count(3);
  const auto gen3 = make_generator(spec, grid, SamplerMethod::circulant, 99);
  const PathBatch b = sample_batch(*gen3, 200);
  set_thread_count(0);
  ASSERT_EQ(a.values.size(), b.values.size());
  EXPECT_EQ(0, std::memcmp(a.values.data(), b.values.data(), a.values.size() * sizeof(double)));
}

TEST(Sampler, StreamingMatchesBatch) {
  const UniformGrid grid{32, 1.0};
  const auto gen = make_generator(ProcessSpec::riemann_liouville(0.25), grid, SamplerMethod::rl_kernel, 5);
  const PathBatch batch = sample_batch(*gen, 10);
  std::vector<double> path(grid.n);
  gen->generate(7, 0, path);
  for (std::size_t i = 0; i < grid.n; ++i) EXPECT_EQ(path[i], batch.at(7, 0, i));
}

TEST(Sampler, DifferentSeedsDiffer) {
  const PathBatch a = sample_fbm_circulant(0.7, 16, 1.0, 4, 1);
  const PathBatch b = sample_fbm_circulant(0.7, 16, 1.0, 4, 2);
  EXPECT_NE(a.values, b.values);
}
