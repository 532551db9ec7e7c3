#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ssgauss {

enum class ProcessKind { fbm, subfbm, bifbm, riemann_liouville, aux_y, brownian };

struct ProcessSpec {
  ProcessKind kind = ProcessKind::brownian;
  double hurst = 0.5;  // H for fbm, subfbm, bifbm
  double k = 1.0;      // K for bifbm
  double alpha = 0.5;  // alpha for riemann_liouville and aux_y
  std::size_t dim = 1;

  static ProcessSpec fbm(double h, std::size_t d = 1);
  static ProcessSpec subfbm(double h, std::size_t d = 1);
  static ProcessSpec bifbm(double h, double k, std::size_t d = 1);
  static ProcessSpec riemann_liouville(double a, std::size_t d = 1);
  static ProcessSpec aux_y(double a, std::size_t d = 1);
  static ProcessSpec brownian(std::size_t d = 1);

  /// Throws ConfigError naming the offending field.
  void validate() const;

  /// Self-similarity exponent: H, HK, alpha or 1/2.
  double self_similarity() const;

  std::string name() const;
};

const char* to_string(ProcessKind kind);
ProcessKind process_kind_from_string(const std::string& name);

double cov_fbm(double s, double t, double hurst);
double cov_subfbm(double s, double t, double hurst);
double cov_bifbm(double s, double t, double hurst, double k);
double cov_y(double s, double t, double alpha);
double cov_rl(double s, double t, double alpha);
double cov_brownian(double s, double t);

namespace detail {
// Gauss-Jacobi based reference for the off-diagonal RL covariance and an
// adaptive tanh-sinh alternative used for cross-checks.
double cov_rl_jacobi(double s, double t, double alpha);
double cov_rl_adaptive(double s, double t, double alpha);
}  // namespace detail

/// Covariance of the one-dimensional component of the process.
double covariance(const ProcessSpec& spec, double s, double t);

/// Variance at time t (closed form for every kind).
double variance(const ProcessSpec& spec, double t);

/// Kernel of the Volterra representation of fBm, 0 < s < t.
double kernel_kh(double t, double s, double hurst);

struct CovMatrix {
  std::vector<double> times;
  Eigen::MatrixXd values;
};

/// Pairwise covariances on a strictly increasing positive grid.  Throws
/// NumericError naming the most negative eigenvalue when the matrix fails the
/// PSD check at tolerance 1e-10 times the largest diagonal entry.
CovMatrix build_cov_matrix(const ProcessSpec& spec, std::span<const double> grid);

/// Conditional variances Var(X_{s_i} | X_{s_1}, ..., X_{s_{i-1}}) from a
/// Cholesky factorization; their product is the determinant.
std::vector<double> det_factorization(const CovMatrix& cm);

/// int_0^inf [(1+u)^{a-1/2} - u^{a-1/2}]^2 du + 1/(2a) in closed form.
double c_alpha(double alpha);

/// Coefficients of p(t) = a1 t^2 + a2 t^3 with p(eps) = y, p'(eps) = m.
std::pair<double, double> cubic_patch(double eps, double y_at_eps, double m_at_eps);

/// Max residual of cov_subfbm = cov_fbm + H(1-2H)/Gamma(2-2H) cov_y(., ., H).
double verify_subfbm_identity(double hurst, std::span<const double> grid);

/// Max residual of cov_bifbm + K/(2^K Gamma(1-K)) cov_y(t^{2H}, s^{2H}, K/2)
/// = 2^{1-K} cov_fbm(., ., HK).
double verify_bifbm_identity(double hurst, double k, std::span<const double> grid);

/// The same identity in the form scaled by 2^K / 2, checked independently.
double verify_bifbm_identity_scaled(double hurst, double k, std::span<const double> grid);

}  // namespace ssgauss
