#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ssgauss/covariance.hpp"

namespace ssgauss {

enum class MomentMode { raw, factorial_scaled, power_factorial_scaled, exp_time };

const char* to_string(MomentMode mode);

struct MomentReport {
  std::size_t m = 0;
  MomentMode mode = MomentMode::raw;
  std::optional<double> exact;
  double exact_error = 0.0;  // quadrature error estimate
  std::optional<double> mc;
  double mc_standard_error = 0.0;

  /// |exact - mc| <= k * sqrt(exact_error^2 + se^2); true when either is missing.
  bool agrees(double k = 3.0) const;
};

struct QuadratureValue {
  double value = 0.0;
  double error = 0.0;  // difference between two resolutions of the rule
};

/// (2 pi)^{-m d / 2} det Cov(X_{s_1}, ..., X_{s_m})^{-d/2}: the joint density
/// of the m one-dimensional marginals at zero, raised to the d-th power.
double delta_product_expectation(const ProcessSpec& spec, std::span<const double> times);

/// E (int_0^1 delta(X_s) ds)^m for m in {1, 2, 3} by quadrature over the
/// ordered simplex, after removing the top time by self-similarity.
QuadratureValue exact_delta_moment(const ProcessSpec& spec, std::size_t m);

/// Closed form Gamma(1-theta)^m / Gamma(1 + (1-theta) m).
double dirichlet_simplex(std::size_t m, double theta);

/// Nested quadrature of the same simplex integral (m <= 3).
double dirichlet_simplex_quadrature(std::size_t m, double theta);

/// (1/m!) E (int_0^tau delta(X_s) ds)^m with tau ~ Exp(1).  m <= 2 by direct
/// quadrature on the semi-infinite ordered simplex; m = 3 by the scaling route.
QuadratureValue exp_time_moment(const ProcessSpec& spec, std::size_t m);

/// The same quantity via self-similarity: Gamma(1 + m(1-alpha d)) / m! times
/// E (int_0^1 delta)^m.
QuadratureValue exp_time_moment_scaling(const ProcessSpec& spec, std::size_t m);

struct SubadditivitySlack {
  std::size_t m = 0;
  std::size_t n = 0;
  double slack = 0.0;  // a_m + a_n - a_{m+n}
  double error = 0.0;
};

/// Slack of a_k = log((1/k!) E (int_0^tau delta)^k) for each pair (m, n).
std::vector<SubadditivitySlack> subadditivity_check(
    const ProcessSpec& spec, const std::vector<std::pair<std::size_t, std::size_t>>& pairs);

/// E[tau^q] = Gamma(1 + q) for tau ~ Exp(1).
double gamma_moment_of_exp(double q);

/// Explicit lower bound m! (2 pi C_alpha)^{-m d/2} times the Dirichlet
/// integral with theta = alpha d, valid for the RL process.
double rl_moment_lower_bound(double alpha, std::size_t dim, std::size_t m);

struct ShiftCheck {
  double unshifted = 0.0;
  double shifted = 0.0;
  double margin = 0.0;  // unshifted - shifted
  bool holds = true;
};

/// E prod_i p_eps(X_{s_i} + a_i) versus the unshifted value in closed form;
/// shifts is row-major m x d.
ShiftCheck shift_inequality_check(const ProcessSpec& spec, std::span<const double> times,
                                  std::span<const double> shifts, double eps);

/// Minimum margin over random times and shifts for orders 1..max_m.
ShiftCheck shift_inequality_scan(const ProcessSpec& spec, std::size_t max_m, std::size_t draws,
                                 double eps, std::uint64_t seed);

/// Sample moment mean(v^m) with its standard error.
std::pair<double, double> sample_moment(std::span<const double> values, std::size_t m);

}  // namespace ssgauss
