#include "ssgauss/covariance.hpp"

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ssgauss/errors.hpp"
#include "ssgauss/quadrature.hpp"
#include "ssgauss/specfun.hpp"

namespace ssgauss {

ProcessSpec ProcessSpec::fbm(double h, std::size_t d) {
  return ProcessSpec{ProcessKind::fbm, h, 1.0, 0.5, d};
}
ProcessSpec ProcessSpec::subfbm(double h, std::size_t d) {
  return ProcessSpec{ProcessKind::subfbm, h, 1.0, 0.5, d};
}
ProcessSpec ProcessSpec::bifbm(double h, double k, std::size_t d) {
  return ProcessSpec{ProcessKind::bifbm, h, k, 0.5, d};
}
ProcessSpec ProcessSpec::riemann_liouville(double a, std::size_t d) {
  return ProcessSpec{ProcessKind::riemann_liouville, 0.5, 1.0, a, d};
}
ProcessSpec ProcessSpec::aux_y(double a, std::size_t d) {
  return ProcessSpec{ProcessKind::aux_y, 0.5, 1.0, a, d};
}
ProcessSpec ProcessSpec::brownian(std::size_t d) {
  return ProcessSpec{ProcessKind::brownian, 0.5, 1.0, 0.5, d};
}

void ProcessSpec::validate() const {
  if (dim < 1) throw ConfigError("process.dim", "must be at least 1");
  switch (kind) {
    case ProcessKind::fbm:
    case ProcessKind::subfbm:
      if (!(hurst > 0.0 && hurst < 1.0)) throw ConfigError("process.H", "must lie in (0, 1)");
      break;
    case ProcessKind::bifbm:
      if (!(hurst > 0.0 && hurst < 1.0)) throw ConfigError("process.H", "must lie in (0, 1)");
      if (!(k > 0.0 && k <= 1.0)) throw ConfigError("process.K", "must lie in (0, 1]");
      break;
    case ProcessKind::riemann_liouville:
      if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("process.alpha", "must lie in (0, 1)");
      break;
    case ProcessKind::aux_y:
      if (!(alpha > 0.0 && alpha < 0.5)) {
        throw ConfigError("process.alpha", "must lie in (0, 1/2) for the auxiliary process");
      }
      break;
    case ProcessKind::brownian:
      break;
  }
}

double ProcessSpec::self_similarity() const {
  switch (kind) {
    case ProcessKind::fbm:
    case ProcessKind::subfbm:
      return hurst;
    case ProcessKind::bifbm:
      return hurst * k;
    case ProcessKind::riemann_liouville:
    case ProcessKind::aux_y:
      return alpha;
    case ProcessKind::brownian:
      return 0.5;
  }
  return 0.5;
}

std::string ProcessSpec::name() const {
  std::ostringstream os;
  os << to_string(kind);
  switch (kind) {
    case ProcessKind::fbm:
    case ProcessKind::subfbm:
      os << "(H=" << hurst << ")";
      break;
    case ProcessKind::bifbm:
      os << "(H=" << hurst << ",K=" << k << ")";
      break;
    case ProcessKind::riemann_liouville:
    case ProcessKind::aux_y:
      os << "(alpha=" << alpha << ")";
      break;
    case ProcessKind::brownian:
      break;
  }
  if (dim != 1) os << "^" << dim;
  return os.str();
}

const char* to_string(ProcessKind kind) {
  switch (kind) {
    case ProcessKind::fbm:
      return "fbm";
    case ProcessKind::subfbm:
      return "subfbm";
    case ProcessKind::bifbm:
      return "bifbm";
    case ProcessKind::riemann_liouville:
      return "rl";
    case ProcessKind::aux_y:
      return "auxy";
    case ProcessKind::brownian:
      return "bm";
  }
  return "unknown";
}

ProcessKind process_kind_from_string(const std::string& name) {
  if (name == "fbm") return ProcessKind::fbm;
  if (name == "subfbm") return ProcessKind::subfbm;
  if (name == "bifbm") return ProcessKind::bifbm;
  if (name == "rl" || name == "riemann-liouville") return ProcessKind::riemann_liouville;
  if (name == "auxy" || name == "aux-y") return ProcessKind::aux_y;
  if (name == "bm" || name == "brownian") return ProcessKind::brownian;
  throw ConfigError("process.kind", "unknown process '" + name + "'");
}

namespace {

void check_times(double s, double t) {
  if (!(s >= 0.0) || !(t >= 0.0)) throw DomainError("covariance: times must be non-negative");
}

void check_hurst(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("covariance: H must lie in (0, 1)");
}

}  // namespace

double cov_fbm(double s, double t, double hurst) {
  check_times(s, t);
  check_hurst(hurst);
  const double e = 2.0 * hurst;
  return 0.5 * (std::pow(t, e) + std::pow(s, e) - std::pow(std::abs(t - s), e));
}

double cov_subfbm(double s, double t, double hurst) {
  check_times(s, t);
  check_hurst(hurst);
  const double e = 2.0 * hurst;
  return std::pow(t, e) + std::pow(s, e) -
         0.5 * (std::pow(t + s, e) + std::pow(std::abs(t - s), e));
}

double cov_bifbm(double s, double t, double hurst, double k) {
  check_times(s, t);
  check_hurst(hurst);
  if (!(k > 0.0 && k <= 1.0)) throw DomainError("cov_bifbm: K must lie in (0, 1]");
  const double e = 2.0 * hurst;
  return std::pow(2.0, -k) *
         (std::pow(std::pow(t, e) + std::pow(s, e), k) - std::pow(std::abs(t - s), e * k));
}

double cov_y(double s, double t, double alpha) {
  check_times(s, t);
  if (!(alpha > 0.0 && alpha < 0.5)) throw DomainError("cov_y: alpha must lie in (0, 1/2)");
  const double e = 2.0 * alpha;
  return boost::math::tgamma(1.0 - e) / e * (std::pow(t, e) + std::pow(s, e) - std::pow(t + s, e));
}

double cov_brownian(double s, double t) {
  check_times(s, t);
  return std::min(s, t);
}

namespace detail {

// R(s, t) = int_0^m (v (c + v))^{a} dv with a = alpha - 1/2, m = min, c = |t - s|.
// On [0, min(m, c)] the factor (c + v)^a is smooth and v^a is absorbed by a
// Gauss-Jacobi rule; on [c, m] geometric panels resolve the scale c.
double cov_rl_jacobi(double s, double t, double alpha) {
  const double m = std::min(s, t);
  const double c = std::abs(t - s);
  const double a = alpha - 0.5;
  if (m == 0.0) return 0.0;
  if (c == 0.0) return std::pow(m, 2.0 * alpha) / (2.0 * alpha);
  static const QuadratureRule legendre = gauss_legendre(20);
  thread_local std::vector<std::pair<double, QuadratureRule>> jacobi_cache;
  const QuadratureRule* rule = nullptr;
  for (const auto& entry : jacobi_cache) {
    if (entry.first == a) rule = &entry.second;
  }
  if (rule == nullptr) {
    if (jacobi_cache.size() > 16) jacobi_cache.clear();
    jacobi_cache.emplace_back(a, gauss_jacobi(24, 0.0, a));
    rule = &jacobi_cache.back().second;
  }
  const double first_end = std::min(m, c);
  double first = 0.0;
  const double scale = 0.5 * first_end;
  for (std::size_t i = 0; i < rule->nodes.size(); ++i) {
    const double v = scale * (1.0 + rule->nodes[i]);
    first += rule->weights[i] * std::pow(c + v, a);
  }
  first *= std::pow(scale, a + 1.0);
  double second = 0.0;
  double lo = c;
  while (lo < m) {
    const double hi = std::min(m, 2.0 * lo);
    second += integrate_fixed([a, c](double v) { return std::pow(v * (c + v), a); }, lo, hi,
                              legendre);
    lo = hi;
  }
  return first + second;
}

double cov_rl_adaptive(double s, double t, double alpha) {
  const double m = std::min(s, t);
  const double c = std::abs(t - s);
  const double a = alpha - 0.5;
  if (m == 0.0) return 0.0;
  if (c == 0.0) return std::pow(m, 2.0 * alpha) / (2.0 * alpha);
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(
      [a, c](double v, double v_complement) {
        (void)v_complement;
        if (v <= 0.0) return 0.0;
        return std::pow(v * (c + v), a);
      },
      0.0, m, 1e-13);
}

}  // namespace detail

double cov_rl(double s, double t, double alpha) {
  check_times(s, t);
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("cov_rl: alpha must lie in (0, 1)");
  if (alpha == 0.5) return std::min(s, t);
  return detail::cov_rl_jacobi(s, t, alpha);
}

double covariance(const ProcessSpec& spec, double s, double t) {
  switch (spec.kind) {
    case ProcessKind::fbm:
      return cov_fbm(s, t, spec.hurst);
    case ProcessKind::subfbm:
      return cov_subfbm(s, t, spec.hurst);
    case ProcessKind::bifbm:
      return cov_bifbm(s, t, spec.hurst, spec.k);
    case ProcessKind::riemann_liouville:
      return cov_rl(s, t, spec.alpha);
    case ProcessKind::aux_y:
      return cov_y(s, t, spec.alpha);
    case ProcessKind::brownian:
      return cov_brownian(s, t);
  }
  return 0.0;
}

double variance(const ProcessSpec& spec, double t) {
  if (!(t >= 0.0)) throw DomainError("variance: time must be non-negative");
  switch (spec.kind) {
    case ProcessKind::fbm:
      return std::pow(t, 2.0 * spec.hurst);
    case ProcessKind::subfbm:
      return (2.0 - std::pow(2.0, 2.0 * spec.hurst - 1.0)) * std::pow(t, 2.0 * spec.hurst);
    case ProcessKind::bifbm:
      return std::pow(t, 2.0 * spec.hurst * spec.k);
    case ProcessKind::riemann_liouville:
      return std::pow(t, 2.0 * spec.alpha) / (2.0 * spec.alpha);
    case ProcessKind::aux_y:
      return cov_y(t, t, spec.alpha);
    case ProcessKind::brownian:
      return t;
  }
  return 0.0;
}

double kernel_kh(double t, double s, double hurst) {
  check_hurst(hurst);
  if (!(s > 0.0) || !(s < t)) throw DomainError("kernel_kh: requires 0 < s < t");
  const double c_h = std::sqrt(2.0 * hurst * boost::math::tgamma(1.5 - hurst) /
                               (boost::math::tgamma(2.0 - 2.0 * hurst) *
                                boost::math::tgamma(hurst + 0.5)));
  return c_h * std::pow(t - s, hurst - 0.5) *
         gauss_2f1(hurst - 0.5, 0.5 - hurst, hurst + 0.5, 1.0 - t / s);
}

CovMatrix build_cov_matrix(const ProcessSpec& spec, std::span<const double> grid) {
  spec.validate();
  if (grid.empty()) throw DomainError("build_cov_matrix: empty grid");
  if (!(grid[0] > 0.0)) throw DomainError("build_cov_matrix: first grid point must be positive");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw DomainError("build_cov_matrix: grid must be strictly increasing");
    }
  }
  const auto n = static_cast<Eigen::Index>(grid.size());
  CovMatrix cm;
  cm.times.assign(grid.begin(), grid.end());
  cm.values.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = i == j ? variance(spec, grid[static_cast<std::size_t>(i)])
                              : covariance(spec, grid[static_cast<std::size_t>(j)],
                                           grid[static_cast<std::size_t>(i)]);
      cm.values(i, j) = v;
      cm.values(j, i) = v;
    }
  }
  const double max_diag = cm.values.diagonal().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cm.values, Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues()(0);
  if (min_eig < -1e-10 * max_diag) {
    std::ostringstream os;
    os.precision(6);
    os << "build_cov_matrix: covariance of " << spec.name()
       << " is not positive semi-definite; most negative eigenvalue " << min_eig
       << " (tolerance " << 1e-10 * max_diag << ")";
    throw NumericError(os.str());
  }
  return cm;
}

std::vector<double> det_factorization(const CovMatrix& cm) {
  const auto n = cm.values.rows();
  Eigen::LLT<Eigen::MatrixXd> llt(cm.values);
  if (llt.info() != Eigen::Success) {
    throw NumericError("det_factorization: matrix is not positive definite");
  }
  const Eigen::MatrixXd l = llt.matrixL();
  std::vector<double> factors(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) factors[static_cast<std::size_t>(i)] = l(i, i) * l(i, i);
  return factors;
}

double c_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("c_alpha: alpha must lie in (0, 1)");
  if (alpha == 0.5) return 1.0;
  // Closed form of the Mandelbrot-Van Ness integral.
  const double g = boost::math::tgamma(alpha + 0.5);
  return g * g / (boost::math::tgamma(2.0 * alpha + 1.0) * std::sin(std::numbers::pi * alpha));
}

std::pair<double, double> cubic_patch(double eps, double y_at_eps, double m_at_eps) {
  if (!(eps > 0.0)) throw DomainError("cubic_patch: eps must be positive");
  const double a1 = 3.0 * y_at_eps / (eps * eps) - m_at_eps / eps;
  const double a2 = -2.0 * y_at_eps / (eps * eps * eps) + m_at_eps / (eps * eps);
  return {a1, a2};
}

double verify_subfbm_identity(double hurst, std::span<const double> grid) {
  if (!(hurst > 0.0 && hurst < 0.5)) {
    throw DomainError("verify_subfbm_identity: H must lie in (0, 1/2)");
  }
  const double c2 = hurst * (1.0 - 2.0 * hurst) / boost::math::tgamma(2.0 - 2.0 * hurst);
  double worst = 0.0;
  for (double s : grid) {
    for (double t : grid) {
      const double lhs = cov_subfbm(s, t, hurst);
      const double rhs = cov_fbm(s, t, hurst) + c2 * cov_y(s, t, hurst);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

double verify_bifbm_identity(double hurst, double k, std::span<const double> grid) {
  if (!(k > 0.0 && k < 1.0)) throw DomainError("verify_bifbm_identity: K must lie in (0, 1)");
  const double coef = k / (std::pow(2.0, k) * boost::math::tgamma(1.0 - k));
  const double scale = std::pow(2.0, 1.0 - k);
  double worst = 0.0;
  for (double s : grid) {
    for (double t : grid) {
      const double lhs = cov_bifbm(s, t, hurst, k) +
                         coef * cov_y(std::pow(s, 2.0 * hurst), std::pow(t, 2.0 * hurst), k / 2.0);
      const double rhs = scale * cov_fbm(s, t, hurst * k);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

double verify_bifbm_identity_scaled(double hurst, double k, std::span<const double> grid) {
  if (!(k > 0.0 && k < 1.0)) {
    throw DomainError("verify_bifbm_identity_scaled: K must lie in (0, 1)");
  }
  const double coef = k / (2.0 * boost::math::tgamma(1.0 - k));
  double worst = 0.0;
  for (double s : grid) {
    for (double t : grid) {
      const double lhs =
          std::pow(2.0, k) / 2.0 * cov_bifbm(s, t, hurst, k) +
          coef * cov_y(std::pow(s, 2.0 * hurst), std::pow(t, 2.0 * hurst), k / 2.0);
      worst = std::max(worst, std::abs(lhs - cov_fbm(s, t, hurst * k)));
    }
  }
  return worst;
}

}  // namespace ssgauss
