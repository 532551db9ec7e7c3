#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ssgauss/covariance.hpp"

namespace ssgauss {

enum class SamplerMethod { cholesky, circulant, rl_kernel, decomposed };

const char* to_string(SamplerMethod method);
SamplerMethod sampler_method_from_string(const std::string& name);

/// Default method per process: circulant for fBm and BM, rl-kernel for RL,
/// decomposed for sub-fBm with H < 1/2, Cholesky otherwise.
SamplerMethod default_method(const ProcessSpec& spec);

/// Uniform grid {T/n, 2T/n, ..., T}; the origin is implicit.
struct UniformGrid {
  std::size_t n = 1024;
  double horizon = 1.0;

  double step() const { return horizon / static_cast<double>(n); }
  double time(std::size_t i) const { return static_cast<double>(i + 1) * step(); }
  std::vector<double> times() const;
  void validate() const;
};

struct SamplerReport {
  SamplerMethod requested = SamplerMethod::cholesky;
  SamplerMethod used = SamplerMethod::cholesky;
  double jitter = 0.0;                  // diagonal jitter added before Cholesky
  std::size_t clipped_eigenvalues = 0;  // circulant eigenvalues clipped to zero
  double most_negative_eigenvalue = 0.0;
  std::vector<std::string> warnings;
};

/// Produces paths one (path, component) pair at a time.  generate() is const
/// and thread-safe; its output depends only on (seed, path, component).
class PathGenerator {
 public:
  virtual ~PathGenerator() = default;

  virtual void generate(std::uint64_t path, std::size_t component, std::span<double> out) const = 0;

  /// All d components, component-major (d * n values).
  void generate_path(std::uint64_t path, std::span<double> out) const;

  const ProcessSpec& spec() const { return spec_; }
  const UniformGrid& grid() const { return grid_; }
  std::uint64_t seed() const { return seed_; }
  const SamplerReport& report() const { return report_; }

 protected:
  PathGenerator(ProcessSpec spec, UniformGrid grid, std::uint64_t seed)
      : spec_(spec), grid_(grid), seed_(seed) {}

  ProcessSpec spec_;
  UniformGrid grid_;
  std::uint64_t seed_;
  SamplerReport report_;
};

std::unique_ptr<PathGenerator> make_generator(const ProcessSpec& spec, const UniformGrid& grid,
                                              SamplerMethod method, std::uint64_t seed);

struct PathBatch {
  ProcessSpec spec;
  UniformGrid grid;
  SamplerMethod method = SamplerMethod::cholesky;
  std::uint64_t seed = 0;
  std::size_t paths = 0;
  SamplerReport report;
  std::vector<double> values;  // (path * dim + component) * n + i

  std::span<const double> path(std::size_t p) const {
    const std::size_t stride = spec.dim * grid.n;
    return {values.data() + p * stride, stride};
  }
  double at(std::size_t p, std::size_t component, std::size_t i) const {
    return values[(p * spec.dim + component) * grid.n + i];
  }
};

PathBatch sample_batch(const PathGenerator& generator, std::size_t paths);

PathBatch sample_cholesky(const ProcessSpec& spec, const UniformGrid& grid, std::size_t paths,
                          std::uint64_t seed);
PathBatch sample_fbm_circulant(double hurst, std::size_t n, double horizon, std::size_t paths,
                               std::uint64_t seed, std::size_t dim = 1);
PathBatch sample_rl_kernel(double alpha, std::size_t n, double horizon, std::size_t paths,
                           std::uint64_t seed, std::size_t dim = 1);
PathBatch sample_subfbm_decomposed(double hurst, const UniformGrid& grid, std::size_t paths,
                                   std::uint64_t seed, std::size_t dim = 1);

/// Weights w_m of the discretized RL convolution X_{t_j} = sum_i w_{j-i} Z_i.
std::vector<double> rl_kernel_weights(double alpha, std::size_t n, double horizon);

/// Covariance implied by the rl-kernel discretization (exact diagonal).
Eigen::MatrixXd rl_kernel_implied_covariance(double alpha, std::size_t n, double horizon);

/// Scale of the sub-fBm decomposition, sqrt(H(1-2H)/Gamma(2-2H)).
double subfbm_decomposition_scale(double hurst);

}  // namespace ssgauss
