#include "ssgauss/moments.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "ssgauss/errors.hpp"
#include "ssgauss/parallel.hpp"
#include "ssgauss/quadrature.hpp"
#include "ssgauss/rng.hpp"

namespace ssgauss {

const char* to_string(MomentMode mode) {
  switch (mode) {
    case MomentMode::raw:
      return "raw";
    case MomentMode::factorial_scaled:
      return "m!-scaled";
    case MomentMode::power_factorial_scaled:
      return "(m!)^ab-scaled";
    case MomentMode::exp_time:
      return "exp-time";
  }
  return "unknown";
}

bool MomentReport::agrees(double k) const {
  if (!exact || !mc) return true;
  const double combined = std::sqrt(exact_error * exact_error + mc_standard_error * mc_standard_error);
  return std::abs(*exact - *mc) <= k * combined;
}

namespace {

using SmallMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;

double fbm_increment_cov(double a0, double a1, double b0, double b1, double h2) {
  // Cov(X_{a1} - X_{a0}, X_{b1} - X_{b0}) for fBm with 2H = h2.
  auto p = [h2](double x) { return std::pow(std::abs(x), h2); };
  return 0.5 * (p(a1 - b0) + p(a0 - b1) - p(a1 - b1) - p(a0 - b0));
}

// log det Cov(X_{t_1}, ..., X_{t_m}) of one component.  For processes with
// stationary increments the increment covariance (same determinant, better
// conditioned near coincident times) is used.
double log_det_cov(const ProcessSpec& spec, std::span<const double> times) {
  const auto m = static_cast<Eigen::Index>(times.size());
  if (spec.kind == ProcessKind::brownian ||
      (spec.kind == ProcessKind::riemann_liouville && spec.alpha == 0.5) ||
      (spec.kind == ProcessKind::fbm && spec.hurst == 0.5)) {
    double sum = 0.0;
    double prev = 0.0;
    for (double t : times) {
      sum += std::log(t - prev);
      prev = t;
    }
    return sum;
  }
  SmallMatrix cov(m, m);
  if (spec.kind == ProcessKind::fbm) {
    const double h2 = 2.0 * spec.hurst;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double a0 = i == 0 ? 0.0 : times[static_cast<std::size_t>(i - 1)];
      const double a1 = times[static_cast<std::size_t>(i)];
      for (Eigen::Index j = 0; j <= i; ++j) {
        const double b0 = j == 0 ? 0.0 : times[static_cast<std::size_t>(j - 1)];
        const double b1 = times[static_cast<std::size_t>(j)];
        const double v = i == j ? std::pow(a1 - a0, h2) : fbm_increment_cov(a0, a1, b0, b1, h2);
        cov(i, j) = v;
        cov(j, i) = v;
      }
    }
  } else {
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j <= i; ++j) {
        const double v = i == j ? variance(spec, times[static_cast<std::size_t>(i)])
                                : covariance(spec, times[static_cast<std::size_t>(j)],
                                             times[static_cast<std::size_t>(i)]);
        cov(i, j) = v;
        cov(j, i) = v;
      }
    }
  }
  Eigen::LLT<SmallMatrix> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw NumericError("delta moments: covariance of " + spec.name() +
                       " is not positive definite at a quadrature node");
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) sum += 2.0 * std::log(llt.matrixLLT()(i, i));
  return sum;
}

GradedOptions coarse_options() {
  GradedOptions o;
  o.panel_order = 8;
  o.jacobi_order = 8;
  return o;
}

void check_moment_spec(const ProcessSpec& spec) {
  spec.validate();
  const double ad = spec.self_similarity() * static_cast<double>(spec.dim);
  if (!(ad < 1.0)) {
    throw DomainError("delta moments need alpha_ss * d < 1 (local time must exist)");
  }
}

// J_m = int over 0 < r_1 < ... < r_{m-1} < 1 of E prod delta(X_{r_i}) with r_m = 1.
double reduced_simplex_integral(const ProcessSpec& spec, std::size_t m,
                                const GradedIntegrator& integrator) {
  const double ad = spec.self_similarity() * static_cast<double>(spec.dim);
  if (m == 1) {
    const double one[1] = {1.0};
    return delta_product_expectation(spec, one);
  }
  if (m == 2) {
    return integrator.integrate(
        [&](double r) {
          const double t[2] = {r, 1.0};
          return delta_product_expectation(spec, t);
        },
        0.0, 1.0, -ad, -ad);
  }
  if (m == 3) {
    return integrator.integrate(
        [&](double r2) {
          return integrator.integrate(
              [&](double r1) {
                const double t[3] = {r1, r2, 1.0};
                return delta_product_expectation(spec, t);
              },
              0.0, r2, -ad, -ad);
        },
        0.0, 1.0, std::max(1.0 - 2.0 * ad, -0.5), -ad);
  }
  throw DomainError("exact moments are implemented for m <= 3");
}

double factorial(std::size_t m) { return std::tgamma(static_cast<double>(m) + 1.0); }

// int_0^inf e^{-s} g(s) ds with g ~ s^{left_exp} near 0.
double exp_weighted(const std::function<double(double)>& g, double left_exp,
                    const GradedIntegrator& integrator, std::size_t laguerre_order) {
  static const QuadratureRule legendre = gauss_legendre(16);
  const double head = integrator.integrate([&](double s) { return std::exp(-s) * g(s); }, 0.0,
                                           1.0, left_exp, 0.0);
  double middle = 0.0;
  const double split = 12.0;
  for (double lo = 1.0; lo < split; lo += 1.0) {
    middle += integrate_fixed([&](double s) { return std::exp(-s) * g(s); }, lo, lo + 1.0,
                              legendre);
  }
  const QuadratureRule laguerre = gauss_laguerre(laguerre_order, 0.0);
  double tail = 0.0;
  for (std::size_t i = 0; i < laguerre.nodes.size(); ++i) {
    tail += laguerre.weights[i] * g(split + laguerre.nodes[i]);
  }
  return head + middle + std::exp(-split) * tail;
}

double exp_time_direct(const ProcessSpec& spec, std::size_t m, const GradedIntegrator& integrator,
                       std::size_t laguerre_order) {
  const double ad = spec.self_similarity() * static_cast<double>(spec.dim);
  if (m == 1) {
    return exp_weighted(
        [&](double s) {
          const double t[1] = {s};
          return delta_product_expectation(spec, t);
        },
        -ad, integrator, laguerre_order);
  }
  return exp_weighted(
      [&](double s2) {
        return integrator.integrate(
            [&](double s1) {
              const double t[2] = {s1, s2};
              return delta_product_expectation(spec, t);
            },
            0.0, s2, -ad, -ad);
      },
      std::max(1.0 - 2.0 * ad, -0.5), integrator, laguerre_order);
}

}  // namespace

double delta_product_expectation(const ProcessSpec& spec, std::span<const double> times) {
  const double m = static_cast<double>(times.size());
  const double d = static_cast<double>(spec.dim);
  const double log_det = log_det_cov(spec, times);
  return std::exp(-0.5 * m * d * std::log(2.0 * std::numbers::pi) - 0.5 * d * log_det);
}

QuadratureValue exact_delta_moment(const ProcessSpec& spec, std::size_t m) {
  check_moment_spec(spec);
  if (m == 0) return {1.0, 0.0};
  if (m > 3) throw DomainError("exact_delta_moment: m must be at most 3");
  const double ad = spec.self_similarity() * static_cast<double>(spec.dim);
  const double prefactor = factorial(m) / (static_cast<double>(m) * (1.0 - ad));
  const GradedIntegrator fine;
  const GradedIntegrator coarse(coarse_options());
  const double value = prefactor * reduced_simplex_integral(spec, m, fine);
  const double rough = prefactor * reduced_simplex_integral(spec, m, coarse);
  return {value, std::abs(value - rough)};
}

double dirichlet_simplex(std::size_t m, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("dirichlet_simplex: theta in (0, 1)");
  if (m == 0) return 1.0;
  const double mm = static_cast<double>(m);
  return std::exp(mm * boost::math::lgamma(1.0 - theta) -
                  boost::math::lgamma(1.0 + (1.0 - theta) * mm));
}

double dirichlet_simplex_quadrature(std::size_t m, double theta) {
  if (!(theta > 0.0 && theta < 1.0)) throw DomainError("dirichlet_simplex: theta in (0, 1)");
  if (m == 0) return 1.0;
  if (m > 3) throw DomainError("dirichlet_simplex_quadrature: m must be at most 3");
  const GradedIntegrator integrator;
  const double mm = static_cast<double>(m);
  // Homogeneity removes the top variable: its integral is 1/(m(1-theta)).
  const double top = 1.0 / (mm * (1.0 - theta));
  auto p = [theta](double x) { return std::pow(x, -theta); };
  if (m == 1) return top;
  if (m == 2) {
    return top * integrator.integrate([&](double r) { return p(r) * p(1.0 - r); }, 0.0, 1.0,
                                      -theta, -theta);
  }
  return top * integrator.integrate(
                   [&](double r2) {
                     return p(1.0 - r2) *
                            integrator.integrate([&](double r1) { return p(r1) * p(r2 - r1); },
                                                 0.0, r2, -theta, -theta);
                   },
                   0.0, 1.0, 1.0 - 2.0 * theta, -theta);
}

QuadratureValue exp_time_moment(const ProcessSpec& spec, std::size_t m) {
  check_moment_spec(spec);
  if (m == 0) return {1.0, 0.0};
  if (m > 3) throw DomainError("exp_time_moment: m must be at most 3");
  if (m == 3) return exp_time_moment_scaling(spec, 3);
  const GradedIntegrator fine;
  const GradedIntegrator coarse(coarse_options());
  const double value = exp_time_direct(spec, m, fine, 48);
  const double rough = exp_time_direct(spec, m, coarse, 32);
  return {value, std::abs(value - rough)};
}

QuadratureValue exp_time_moment_scaling(const ProcessSpec& spec, std::size_t m) {
  check_moment_spec(spec);
  if (m == 0) return {1.0, 0.0};
  const double ad = spec.self_similarity() * static_cast<double>(spec.dim);
  const QuadratureValue unit = exact_delta_moment(spec, m);
  const double factor = gamma_moment_of_exp((1.0 - ad) * static_cast<double>(m)) / factorial(m);
  return {factor * unit.value, factor * unit.error};
}

std::vector<SubadditivitySlack> subadditivity_check(
    const ProcessSpec& spec, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  std::vector<QuadratureValue> cache(4);
  std::vector<bool> have(4, false);
  auto log_moment = [&](std::size_t k) -> QuadratureValue {
    if (k > 3) throw DomainError("subadditivity_check: m + n must be at most 3");
    if (k == 0) return {0.0, 0.0};
    if (!have[k]) {
      const QuadratureValue v = exp_time_moment(spec, k);
      cache[k] = {std::log(v.value), v.error / v.value};
      have[k] = true;
    }
    return cache[k];
  };
  std::vector<SubadditivitySlack> out;
  for (const auto& [m, n] : pairs) {
    SubadditivitySlack s;
    s.m = m;
    s.n = n;
    if (m == 0 || n == 0) {
      s.slack = 0.0;
      out.push_back(s);
      continue;
    }
    const QuadratureValue am = log_moment(m);
    const QuadratureValue an = log_moment(n);
    const QuadratureValue amn = log_moment(m + n);
    s.slack = am.value + an.value - amn.value;
    s.error = am.error + an.error + amn.error;
    out.push_back(s);
  }
  return out;
}

double gamma_moment_of_exp(double q) {
  if (!(q > 0.0)) throw DomainError("gamma_moment_of_exp: q must be positive");
  return boost::math::tgamma(1.0 + q);
}

double rl_moment_lower_bound(double alpha, std::size_t dim, std::size_t m) {
  const double ad = alpha * static_cast<double>(dim);
  if (!(ad < 1.0)) throw DomainError("rl_moment_lower_bound: alpha d must be < 1");
  const double base = 2.0 * std::numbers::pi * c_alpha(alpha);
  const double mm = static_cast<double>(m);
  return factorial(m) * std::pow(base, -0.5 * mm * static_cast<double>(dim)) *
         dirichlet_simplex(m, ad);
}

ShiftCheck shift_inequality_check(const ProcessSpec& spec, std::span<const double> times,
                                  std::span<const double> shifts, double eps) {
  spec.validate();
  if (!(eps > 0.0)) throw DomainError("shift_inequality_check: eps must be positive");
  const std::size_t m = times.size();
  const std::size_t d = spec.dim;
  if (shifts.size() != m * d) throw DomainError("shift_inequality_check: shifts must be m x d");
  const auto mm = static_cast<Eigen::Index>(m);
  Eigen::MatrixXd sigma(mm, mm);
  for (Eigen::Index i = 0; i < mm; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = i == j ? variance(spec, times[static_cast<std::size_t>(i)])
                              : covariance(spec, times[static_cast<std::size_t>(j)],
                                           times[static_cast<std::size_t>(i)]);
      sigma(i, j) = v;
      sigma(j, i) = v;
    }
    sigma(i, i) += eps;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) throw NumericError("shift_inequality_check: singular matrix");
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < mm; ++i) log_det += 2.0 * std::log(llt.matrixLLT()(i, i));
  const double dd = static_cast<double>(d);
  const double log_base =
      -0.5 * dd * (static_cast<double>(m) * std::log(2.0 * std::numbers::pi) + log_det);
  double quad = 0.0;
  for (std::size_t c = 0; c < d; ++c) {
    Eigen::VectorXd a(mm);
    for (std::size_t i = 0; i < m; ++i) a(static_cast<Eigen::Index>(i)) = shifts[i * d + c];
    const Eigen::VectorXd w = llt.matrixL().solve(a);
    quad += w.squaredNorm();
  }
  ShiftCheck out;
  out.unshifted = std::exp(log_base);
  out.shifted = out.unshifted * std::exp(-0.5 * quad);
  out.margin = out.unshifted - out.shifted;
  out.holds = out.margin >= 0.0;
  return out;
}

ShiftCheck shift_inequality_scan(const ProcessSpec& spec, std::size_t max_m, std::size_t draws,
                                 double eps, std::uint64_t seed) {
  ShiftCheck worst;
  worst.margin = std::numeric_limits<double>::infinity();
  for (std::size_t m = 1; m <= max_m; ++m) {
    for (std::size_t k = 0; k < draws; ++k) {
      StreamRng rng(derive_seed(seed, StreamSalt::synthetic, m, k));
      std::vector<double> times(m);
      for (double& t : times) t = 0.05 + 0.95 * rng.uniform();
      std::sort(times.begin(), times.end());
      for (std::size_t i = 1; i < m; ++i) times[i] = std::max(times[i], times[i - 1] + 1e-3);
      std::vector<double> shifts(m * spec.dim);
      for (double& a : shifts) a = rng.normal();
      const ShiftCheck c = shift_inequality_check(spec, times, shifts, eps);
      if (c.margin < worst.margin) worst = c;
    }
  }
  worst.holds = worst.margin >= 0.0;
  return worst;
}

std::pair<double, double> sample_moment(std::span<const double> values, std::size_t m) {
  const std::size_t n = values.size();
  if (n < 2) throw DomainError("sample_moment: need at least two values");
  std::vector<double> powers(n);
  for (std::size_t i = 0; i < n; ++i) powers[i] = std::pow(values[i], static_cast<double>(m));
  const double mean = compensated_sum(powers) / static_cast<double>(n);
  for (double& p : powers) p = (p - mean) * (p - mean);
  const double var = compensated_sum(powers) / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

}  // namespace ssgauss
