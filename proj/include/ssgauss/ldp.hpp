#pragma once

#include <optional>
#include <string>
#include <utility>

#include "ssgauss/covariance.hpp"
#include "ssgauss/functionals.hpp"

namespace ssgauss {

enum class Provenance { closed_form, bounds_only, mc_estimated };

const char* to_string(Provenance p);

/// Large-deviation constants of one (process, functional) pair.
///   Lambda(theta) = e1 * theta^{1/(1-ab)},  I(lambda) = c * lambda^{1/ab}.
struct RateConstants {
  double ab = 0.0;  // alpha_ss * effective beta
  std::optional<double> e1;
  std::optional<double> c;
  std::optional<std::pair<double, double>> c_bounds;
  std::optional<std::pair<double, double>> e1_bounds;
  Provenance provenance = Provenance::mc_estimated;
  std::string source;  // which family the bounds were taken from
  std::string note;

  double critical_p() const { return 1.0 / ab; }
};

/// e1 * theta^{1/(1-ab)}.
double lambda_fn(double theta, double e1, double ab);

struct RateFromLambda {
  double c = 0.0;
  double exponent = 0.0;  // 1 / ab
};

/// Legendre dual of lambda_fn in closed form.
RateFromLambda rate_from_lambda(double e1, double ab);

/// c * lambda^{1/ab} on [0, inf).
double rate_function(double lambda, double c, double ab);

/// sup_{theta > 0} {theta lambda - e1 theta^{1/(1-ab)}} by bracketing on a log
/// grid and Brent refinement; independent of the closed form.
double legendre_numeric(double lambda, double e1, double ab);

/// -p exp(-a/p).
double moment_tail_bridge(double a, double p);

/// sqrt(2H) 2^H / sqrt(B(1-H, H+1/2)).
double c_h_constant(double hurst);

struct ChdBounds {
  double lo = 0.0;
  double hi = 0.0;
  double c_h = 0.0;
};

/// Two-sided bounds on the tail constant of the fBm local time, Hd < 1.
ChdBounds chd_bounds(double hurst, std::size_t dim);

/// Lambda coefficient implied by a tail constant c at index Hd.
double e1_from_chd(double c, double hurst, std::size_t dim);

struct BifbmPrefactors {
  double mgf = 1.0;
  double tail = 1.0;
};

/// Powers of two relating bi-fBm constants to those of fBm with index HK.
BifbmPrefactors bifbm_prefactors(double hurst, double k, double beta);

/// Prefactor 2^{p (1-K) beta / 2} of the critical lambda for bi-fBm.
double bifbm_critical_lambda_prefactor(double hurst, double k, double beta, double p);

enum class Integrability { finite, infinite, critical_finite, critical_infinite, unknown };

const char* to_string(Integrability v);

/// Finiteness of E exp(lambda F^p) given the constants of F.
Integrability integrability_classify(double p, double lambda, const RateConstants& constants);

/// b^{-1/(p-1)}; with half_convention the bound is taken at B = b/2.  An
/// infinite b gives 0.
double mgf_growth_bound(double b, double p, bool half_convention = false);

/// Constants for a (process, functional) pair: closed form or bounds where
/// the theory provides them, an mc placeholder otherwise.
RateConstants rate_constants(const ProcessSpec& process, const FunctionalSpec& functional);

/// Multiplier turning the fBm tail constant into the RL constant at the same
/// index, alpha_H^{1/H} (RL paths are alpha_H times fBm paths in the limit).
double rl_tail_factor(double hurst);

}  // namespace ssgauss
