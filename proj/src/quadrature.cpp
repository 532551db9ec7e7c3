#include "ssgauss/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <map>
#include <tuple>

#include "ssgauss/errors.hpp"

namespace ssgauss {

namespace {

// Golub-Welsch: nodes are the eigenvalues of the symmetric Jacobi matrix of
// the monic three-term recurrence, weights are mu0 times the squared first
// components of the normalized eigenvectors.
QuadratureRule golub_welsch(const std::vector<double>& diag, const std::vector<double>& offdiag_sq,
                            double mu0) {
  const auto n = static_cast<Eigen::Index>(diag.size());
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    jacobi(i, i) = diag[static_cast<std::size_t>(i)];
    if (i + 1 < n) {
      const double b = std::sqrt(offdiag_sq[static_cast<std::size_t>(i)]);
      jacobi(i, i + 1) = b;
      jacobi(i + 1, i) = b;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  if (solver.info() != Eigen::Success) throw NumericError("quadrature: eigen solver failed");
  QuadratureRule rule;
  rule.nodes.resize(diag.size());
  rule.weights.resize(diag.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v0 = solver.eigenvectors()(0, i);
    rule.nodes[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    rule.weights[static_cast<std::size_t>(i)] = mu0 * v0 * v0;
  }
  return rule;
}

const QuadratureRule& cached_jacobi(std::size_t n, double a, double b) {
  thread_local std::map<std::tuple<std::size_t, double, double>, QuadratureRule> cache;
  const auto key = std::make_tuple(n, a, b);
  auto it = cache.find(key);
  if (it == cache.end()) {
    if (cache.size() > 4096) cache.clear();
    it = cache.emplace(key, gauss_jacobi(n, a, b)).first;
  }
  return it->second;
}

}  // namespace

QuadratureRule gauss_legendre(std::size_t n) {
  if (n == 0) throw DomainError("gauss_legendre: order must be positive");
  std::vector<double> diag(n, 0.0);
  std::vector<double> off(n > 0 ? n - 1 : 0);
  for (std::size_t k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    off[k - 1] = kk * kk / (4.0 * kk * kk - 1.0);
  }
  return golub_welsch(diag, off, 2.0);
}

QuadratureRule gauss_jacobi(std::size_t n, double a, double b) {
  if (n == 0) throw DomainError("gauss_jacobi: order must be positive");
  if (!(a > -1.0) || !(b > -1.0)) throw DomainError("gauss_jacobi: exponents must exceed -1");
  std::vector<double> diag(n);
  std::vector<double> off(n - 1);
  const double ab = a + b;
  diag[0] = (b - a) / (ab + 2.0);
  for (std::size_t k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    const double s = 2.0 * kk + ab;
    diag[k] = (b * b - a * a) / (s * (s + 2.0));
  }
  for (std::size_t k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    const double s = 2.0 * kk + ab;
    if (k == 1) {
      off[0] = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      off[k - 1] = 4.0 * kk * (kk + a) * (kk + b) * (kk + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
  }
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + boost::math::lgamma(a + 1.0) +
                              boost::math::lgamma(b + 1.0) - boost::math::lgamma(ab + 2.0));
  return golub_welsch(diag, off, mu0);
}

QuadratureRule gauss_laguerre(std::size_t n, double a) {
  if (n == 0) throw DomainError("gauss_laguerre: order must be positive");
  if (!(a > -1.0)) throw DomainError("gauss_laguerre: exponent must exceed -1");
  std::vector<double> diag(n);
  std::vector<double> off(n - 1);
  for (std::size_t k = 0; k < n; ++k) diag[k] = 2.0 * static_cast<double>(k) + a + 1.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    off[k - 1] = kk * (kk + a);
  }
  return golub_welsch(diag, off, boost::math::tgamma(a + 1.0));
}

double integrate_fixed(const std::function<double(double)>& f, double lo, double hi,
                       const QuadratureRule& legendre) {
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  double sum = 0.0;
  for (std::size_t i = 0; i < legendre.nodes.size(); ++i) {
    sum += legendre.weights[i] * f(mid + half * legendre.nodes[i]);
  }
  return sum * half;
}

GradedIntegrator::GradedIntegrator(GradedOptions options)
    : options_(options), legendre_(gauss_legendre(options.panel_order)) {
  if (options_.levels < 1) throw DomainError("GradedIntegrator: levels must be at least 1");
  if (!(options_.ratio > 0.0 && options_.ratio < 1.0)) {
    throw DomainError("GradedIntegrator: ratio must lie in (0, 1)");
  }
}

double GradedIntegrator::half(const std::function<double(double)>& f, double end, double length,
                              double sign, double exponent) const {
  if (!(exponent > -1.0)) throw DomainError("GradedIntegrator: endpoint exponent must exceed -1");
  double sum = 0.0;
  double outer = length;
  for (std::size_t level = 0; level < options_.levels; ++level) {
    const double inner = outer * options_.ratio;
    const double h = 0.5 * (outer - inner);
    const double mid = 0.5 * (outer + inner);
    double panel = 0.0;
    for (std::size_t i = 0; i < legendre_.nodes.size(); ++i) {
      panel += legendre_.weights[i] * f(end + sign * (mid + h * legendre_.nodes[i]));
    }
    sum += panel * h;
    outer = inner;
  }
  // Innermost panel (0, outer]: Jacobi weight (1+xi)^exponent on y = outer (1+xi)/2.
  const QuadratureRule& rule = cached_jacobi(options_.jacobi_order, 0.0, exponent);
  const double scale = 0.5 * outer;
  double panel = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double y = scale * (1.0 + rule.nodes[i]);
    if (y <= 0.0) continue;
    panel += rule.weights[i] * f(end + sign * y) * std::pow(y, -exponent);
  }
  sum += panel * std::pow(scale, exponent + 1.0);
  return sum;
}

double GradedIntegrator::integrate(const std::function<double(double)>& f, double lo, double hi,
                                   double left_exp, double right_exp) const {
  if (!(hi > lo)) {
    if (hi == lo) return 0.0;
    throw DomainError("GradedIntegrator: empty interval");
  }
  const double length = 0.5 * (hi - lo);
  return half(f, lo, length, 1.0, left_exp) + half(f, hi, length, -1.0, right_exp);
}

}  // namespace ssgauss
