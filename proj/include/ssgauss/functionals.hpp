#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ssgauss/covariance.hpp"
#include "ssgauss/sampler.hpp"

namespace ssgauss {

enum class FunctionalKind { delta, riesz, product };

const char* to_string(FunctionalKind kind);
FunctionalKind functional_kind_from_string(const std::string& name);

/// How the eps -> 0 limit of the mollified local time is taken.
///   expansion: Richardson elimination of the powers eps^rho0, eps, eps^2, ...
///              of the small-eps expansion of the mean, rho0 = (1 - a d) / (2a);
///   fitted:    single power eps^rho with rho fitted to the batch means.
enum class ExtrapolationMode { expansion, fitted };

const char* to_string(ExtrapolationMode mode);
ExtrapolationMode extrapolation_mode_from_string(const std::string& name);

struct FunctionalSpec {
  FunctionalKind kind = FunctionalKind::delta;
  std::vector<double> eps;    // delta: strictly decreasing; empty selects the grid default
  double beta = 0.0;          // riesz
  std::vector<double> betas;  // product, one per component
  ExtrapolationMode extrapolation = ExtrapolationMode::expansion;  // delta

  static FunctionalSpec delta(std::vector<double> eps = {});
  static FunctionalSpec riesz(double beta);
  static FunctionalSpec product(std::vector<double> betas);

  /// d for delta, beta for Riesz, the sum of the betas for the product kernel.
  double effective_beta(std::size_t dim) const;

  /// Checks the family constraints and alpha_ss * effective_beta < 1.
  void validate(const ProcessSpec& process) const;
};

/// Smallest resolvable mollifier variance, 4 (T/n)^{2 alpha_ss}.
double eps_floor(const ProcessSpec& process, const UniformGrid& grid);

/// Four levels 64 eps_floor * 4^{-k}, k = 0..3.
std::vector<double> default_eps_schedule(const ProcessSpec& process, const UniformGrid& grid);

struct Extrapolation {
  double value = 0.0;
  double error = 0.0;
  double order = 0.0;  // fitted exponent rho of the eps^rho correction
  bool fallback = false;
};

/// Order rho from the last three entries of a sequence indexed by a
/// geometric eps schedule; clipped to [0.1, 3].  Returns 0 when the
/// differences are zero or change sign.
double fit_extrapolation_order(std::span<const double> eps, std::span<const double> values);

/// First `count` exponents of the small-eps expansion of E L_eps - E L:
/// (1 - a d) / (2a) merged with the integers 1, 2, 3, ...
std::vector<double> expansion_exponents(const ProcessSpec& process, std::size_t count);

/// Weights w with sum_k w_k v_k eliminating the given powers of eps; eps and
/// exponents give a square system of size exponents.size() + 1 on the last levels.
std::vector<double> richardson_weights(std::span<const double> eps, std::span<const double> exponents);

/// Richardson-style extrapolation in eps^rho using the last two levels.
/// With order <= 0 the order is fitted from the sequence itself.
Extrapolation local_time_extrapolate(std::span<const double> eps, std::span<const double> values,
                                     double order = 0.0);

struct FunctionalDiagnostics {
  double max_integrand = 0.0;
  double near_singular_fraction = 0.0;
  std::size_t zero_cells = 0;
  bool below_eps_floor = false;
  double extrapolation_order = 0.0;  // leading eliminated power (or the fitted rho)
  double fitted_order = 0.0;         // rho fitted to the batch means, always reported
  std::size_t extrapolation_fallbacks = 0;
  double discretization_error = 0.0;  // mean |I_n - I_{n/2}| for Riesz and product
  std::vector<std::string> warnings;
};

struct FunctionalSample {
  FunctionalSpec spec;
  ProcessSpec process;
  UniformGrid grid;
  std::vector<double> eps;       // delta only
  std::vector<double> per_eps;   // delta only: path * eps.size() + level
  std::vector<double> values;    // per path: extrapolated local time or potential
  std::vector<double> errors;    // per path extrapolation error bar (delta only)
  FunctionalDiagnostics diagnostics;
};

/// Per-path evaluation on the grid of one process.  Thread-safe.
class FunctionalEvaluator {
 public:
  FunctionalEvaluator(const ProcessSpec& process, const UniformGrid& grid, FunctionalSpec spec);

  /// Number of raw outputs per path: eps levels for delta, 2 otherwise
  /// (value on the grid and on the half-resolution grid).
  std::size_t outputs() const;

  struct PathStats {
    double max_integrand = 0.0;
    std::size_t near_singular = 0;
    std::size_t zero_cells = 0;
  };

  /// path holds dim * n values, component-major.
  PathStats evaluate(std::span<const double> path, std::span<double> out) const;

  const FunctionalSpec& spec() const { return spec_; }
  const std::vector<double>& eps() const { return eps_; }

 private:
  double potential(std::span<const double> path, std::size_t stride, PathStats& stats) const;
  double integrand(std::span<const double> path, std::size_t i, double& norm) const;

  ProcessSpec process_;
  UniformGrid grid_;
  FunctionalSpec spec_;
  std::vector<double> eps_;
  double alpha_ss_ = 0.5;
  double effective_beta_ = 0.0;
};

/// Single-path mollified local time: trapezoid sum of p_eps(X_t) over the
/// grid including the origin.
double mollified_local_time(std::span<const double> path, std::size_t dim, const UniformGrid& grid,
                            double eps);

/// Batch versions (one value per path).
std::vector<double> mollified_local_time(const PathBatch& batch, double eps);
std::vector<double> riesz_functional(const PathBatch& batch, double beta);
std::vector<double> product_functional(const PathBatch& batch, const std::vector<double>& betas);

/// Evaluates the functional on a stored batch.
FunctionalSample evaluate_functional(const PathBatch& batch, const FunctionalSpec& spec);

/// Streams paths from a generator without storing them.
FunctionalSample evaluate_functional(const PathGenerator& generator, const FunctionalSpec& spec,
                                     std::size_t paths);

/// Same as above and also records sup_t |X_t^1| (first component) per path.
FunctionalSample evaluate_functional(const PathGenerator& generator, const FunctionalSpec& spec,
                                     std::size_t paths, std::vector<double>* sup_abs);

struct ScalingCheck {
  double exponent = 0.0;  // 1 - alpha_ss * effective_beta
  double statistic = 0.0;
  double p_value = 0.0;
  std::size_t paths = 0;
};

/// KS comparison of a^{1 - alpha_ss beta} L_1 against L_a.  Both runs use the
/// same number of grid points, so the eps schedule scales with the grid.
ScalingCheck scaling_check(const ProcessSpec& process, const FunctionalSpec& spec, double a,
                           std::size_t paths, std::uint64_t seed, std::size_t n,
                           SamplerMethod method);

}  // namespace ssgauss
