#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ssgauss/covariance.hpp"
#include "ssgauss/functionals.hpp"
#include "ssgauss/sampler.hpp"

namespace ssgauss {

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value
/// Q_KS(sqrt(n_e) D) using the effective size n_e = n m / (n + m).
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Q_KS(x) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2).
double kolmogorov_survival(double x);

/// Shape used for the survival curve of a tail sample.
///   gamma_density:    log S(x) = a + log Q(1/p, C x^p), i.e. a density
///                     proportional to exp(-C x^p) in the tail;
///   survival_weibull: log S(x) = a - C x^p.
enum class TailModel { gamma_density, survival_weibull };

const char* to_string(TailModel m);
TailModel tail_model_from_string(const std::string& name);

struct TailFitOptions {
  TailModel model = TailModel::gamma_density;
  bool free_exponent = false;
  double q_lo = 0.90;
  double q_hi = 0.999;
  std::size_t levels = 100;
  std::size_t bootstrap = 200;
  double ci_level = 0.95;
  bool sensitivity = true;
  std::uint64_t seed = 0;
};

struct TailWindowFit {
  double q_lo = 0.0;
  double q_hi = 0.0;
  double c = 0.0;
  double p = 0.0;
};

struct TailFit {
  TailModel model = TailModel::gamma_density;
  bool free_exponent = false;
  double p = 0.0;  // fitted or fixed exponent of x
  double c = 0.0;
  double intercept = 0.0;
  double x_lo = 0.0;
  double x_hi = 0.0;
  std::optional<std::pair<double, double>> c_ci;
  std::optional<std::pair<double, double>> p_ci;
  std::size_t n = 0;
  std::size_t tail_points = 0;  // samples at or above x_lo
  std::size_t levels = 0;       // distinct survival levels used in the regression
  double residual = 0.0;        // weighted residual sum of squares
  std::vector<TailWindowFit> sensitivity;
  std::vector<std::string> warnings;
};

/// Fits the upper tail of a sample over the survival window [1 - q_hi, 1 - q_lo].
/// exponent is the theoretical power of x (used as the fixed value, and as the
/// centre of the search range in a free fit).  Throws NumericError
/// "insufficient tail" with fewer than 50 samples in the window.
TailFit tail_fit(std::span<const double> samples, double exponent, const TailFitOptions& options = {});

/// (x, log S(x)) at log-spaced survival levels of the window, plot-ready.
std::vector<std::pair<double, double>> tail_curve(std::span<const double> samples, double q_lo = 0.9,
                                                  double q_hi = 0.999, std::size_t levels = 100);

struct MomentLimit {
  std::vector<double> a_m;     // a_m for m = 1..m_used
  std::vector<double> a_m_se;  // delta-method standard errors
  std::size_t m_requested = 0;
  std::size_t m_used = 0;
  double a = 0.0;  // extrapolated limit
  double a_se = 0.0;
  std::optional<std::pair<double, double>> a_ci;  // bootstrap
  bool monotone = false;  // a_m differences of one sign
  double last_step = 0.0;
  double bridged_c = 0.0;  // ab exp(-a / ab)
  std::optional<std::pair<double, double>> bridged_c_ci;
  std::vector<std::string> warnings;
};

/// a_m = (1/m)[log E F^m - ab log m!] for m <= m_max, extrapolated in m with
/// the model a + b/m + c log(m)/m and bridged to a tail constant.
MomentLimit moment_limit_a(std::span<const double> samples, double ab, std::size_t m_max,
                           std::size_t bootstrap = 200, std::uint64_t seed = 0);

struct SmallBallOptions {
  std::vector<double> eps;  // empty: quantile-based default grid
  std::size_t grid_points = 16;
  std::optional<double> fixed_exponent;  // fit log P = a - c eps^{-e} with e fixed
  std::size_t bootstrap = 200;
  std::uint64_t seed = 0;
};

struct SmallBallFit {
  double exponent = 0.0;
  double c0 = 0.0;
  double intercept = 0.0;
  bool free_exponent = true;
  std::vector<double> eps;  // decreasing, after drops
  std::vector<double> probabilities;
  std::optional<std::pair<double, double>> c0_ci;
  std::optional<std::pair<double, double>> exponent_ci;
  std::size_t n = 0;
  std::vector<std::string> warnings;
};

/// Fit from per-path values of sup |X| on [0, 1].
SmallBallFit small_ball_fit(std::span<const double> sup_abs, const SmallBallOptions& options = {});

/// sup_t |X_t| of the first component for each of N streamed paths.
std::vector<double> sample_sup_abs(const PathGenerator& generator, std::size_t paths);

/// Streams N paths of the process and fits.
SmallBallFit small_ball_fit(const ProcessSpec& spec, const UniformGrid& grid, SamplerMethod method,
                            std::size_t paths, std::uint64_t seed,
                            const SmallBallOptions& options = {});

struct LowerBoundPoint {
  double t = 0.0;
  double eps = 0.0;     // optimized radius at t
  double bound = 0.0;   // c_d t^{1-ab} eps^{-beta} - c0 d eps^{-1/alpha}
  double margin_rate = 0.0;  // bound / t
  std::optional<double> empirical;  // (1/t) log E[exp(t^{1-ab} F) 1{sup|X| <= eps}]
  std::size_t hits = 0;
};

struct LowerBoundCheck {
  double alpha = 0.0;
  double beta = 0.0;
  double c_d = 0.0;
  double c0 = 0.0;
  double rate = 0.0;  // bound / t, constant in t
  std::vector<LowerBoundPoint> points;
  std::vector<std::string> warnings;
};

/// Event-based lower bound for E exp(int_0^t |X_s|^{-beta} ds), X = RL(alpha)
/// in one dimension.  c0 is estimated from the same paths when not given.
LowerBoundCheck lower_bound_exp_check(double alpha, double beta, const std::vector<double>& t_grid,
                                      std::size_t paths, std::size_t n, std::uint64_t seed,
                                      std::optional<double> c0 = std::nullopt);

struct ConsistencyReport {
  double hurst = 0.0;
  TailFit fbm;
  TailFit rl;
  double rl_factor = 1.0;  // alpha_H^{1/H}
  std::pair<double, double> rl_corrected_ci;  // RL constant CI divided by rl_factor
  double rl_corrected_c = 0.0;
  std::pair<double, double> chd;  // bounds on the fBm constant
  bool ci_overlap = false;
  bool fbm_meets_chd = false;
};

/// Tail constants of the delta functional for fBm(H) and RL(H), the latter
/// mapped onto the fBm scale, on the same grid and path count.
ConsistencyReport constant_consistency(double hurst, std::size_t paths, std::size_t n,
                                       std::uint64_t seed, const TailFitOptions& options = {});

}  // namespace ssgauss
