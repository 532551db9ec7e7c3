#include "ssgauss/ldp.hpp"

#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "ssgauss/errors.hpp"
#include "ssgauss/specfun.hpp"

namespace ssgauss {

namespace {

void check_ab(double ab, const char* who) {
  if (!(ab > 0.0 && ab < 1.0)) throw DomainError(std::string(who) + ": ab must lie in (0, 1)");
}

bool same_value(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

RateConstants fbm_delta_constants(double hurst, std::size_t dim) {
  RateConstants rc;
  rc.ab = hurst * static_cast<double>(dim);
  const ChdBounds b = chd_bounds(hurst, dim);
  rc.c_bounds = {b.lo, b.hi};
  rc.e1_bounds = std::pair{e1_from_chd(b.hi, hurst, dim), e1_from_chd(b.lo, hurst, dim)};
  rc.source = "fbm";
  if (same_value(b.lo, b.hi)) {
    rc.c = b.hi;
    rc.e1 = e1_from_chd(b.hi, hurst, dim);
    rc.provenance = Provenance::closed_form;
  } else {
    rc.provenance = Provenance::bounds_only;
  }
  return rc;
}

void scale_constants(RateConstants& rc, double tail_factor, double ab) {
  // C -> f C, and e1 follows through the Legendre pair: e1 ~ C^{-ab/(1-ab)}.
  const double e1_factor = std::pow(tail_factor, -ab / (1.0 - ab));
  if (rc.c) *rc.c *= tail_factor;
  if (rc.e1) *rc.e1 *= e1_factor;
  if (rc.c_bounds) {
    rc.c_bounds->first *= tail_factor;
    rc.c_bounds->second *= tail_factor;
  }
  if (rc.e1_bounds) {
    rc.e1_bounds->first *= e1_factor;
    rc.e1_bounds->second *= e1_factor;
  }
}

}  // namespace

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::closed_form:
      return "closed-form";
    case Provenance::bounds_only:
      return "bounds-only";
    case Provenance::mc_estimated:
      return "mc-estimated";
  }
  return "?";
}

const char* to_string(Integrability v) {
  switch (v) {
    case Integrability::finite:
      return "finite";
    case Integrability::infinite:
      return "infinite";
    case Integrability::critical_finite:
      return "critical-finite";
    case Integrability::critical_infinite:
      return "critical-infinite";
    case Integrability::unknown:
      return "unknown";
  }
  return "?";
}

double lambda_fn(double theta, double e1, double ab) {
  check_ab(ab, "lambda_fn");
  if (theta < 0.0) throw DomainError("lambda_fn: theta must be non-negative");
  if (theta == 0.0) return 0.0;
  return std::exp(std::log(e1) + std::log(theta) / (1.0 - ab));
}

RateFromLambda rate_from_lambda(double e1, double ab) {
  check_ab(ab, "rate_from_lambda");
  if (!(e1 > 0.0)) throw DomainError("rate_from_lambda: e1 must be positive");
  const double inv = 1.0 / ab;
  const double log_c = (1.0 - inv) * std::log(e1) + (inv - 1.0) * std::log1p(-ab) + std::log(ab);
  return {std::exp(log_c), inv};
}

double rate_function(double lambda, double c, double ab) {
  check_ab(ab, "rate_function");
  if (lambda < 0.0) throw DomainError("rate_function: lambda must be non-negative");
  if (lambda == 0.0) return 0.0;
  return std::exp(std::log(c) + std::log(lambda) / ab);
}

double legendre_numeric(double lambda, double e1, double ab) {
  check_ab(ab, "legendre_numeric");
  if (lambda < 0.0) throw DomainError("legendre_numeric: lambda must be non-negative");
  if (lambda == 0.0) return 0.0;
  const double q = 1.0 / (1.0 - ab);
  // Objective in u = log theta; negated for the minimizer.
  auto g = [&](double u) { return -(lambda * std::exp(u) - e1 * std::exp(q * u)); };
  constexpr int kGrid = 401;
  constexpr double kLo = -60.0, kHi = 60.0;
  const double h = (kHi - kLo) / (kGrid - 1);
  int best = 0;
  double best_val = g(kLo);
  for (int i = 1; i < kGrid; ++i) {
    const double v = g(kLo + h * i);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  const double a = kLo + h * std::max(0, best - 1);
  const double b = kLo + h * std::min(kGrid - 1, best + 1);
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::brent_find_minima(g, a, b, std::numeric_limits<double>::digits,
                                                       iters);
  return -r.second;
}

double moment_tail_bridge(double a, double p) {
  if (!(p > 0.0)) throw DomainError("moment_tail_bridge: p must be positive");
  return -p * std::exp(-a / p);
}

double c_h_constant(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("c_h_constant: H must lie in (0, 1)");
  return std::sqrt(2.0 * hurst) * std::pow(2.0, hurst) / std::sqrt(beta_fn(1.0 - hurst, hurst + 0.5));
}

ChdBounds chd_bounds(double hurst, std::size_t dim) {
  const double hd = hurst * static_cast<double>(dim);
  if (!(hurst > 0.0 && hurst < 1.0) || dim == 0) throw DomainError("chd_bounds: bad H or d");
  if (!(hd < 1.0)) throw DomainError("chd_bounds: requires H d < 1");
  ChdBounds b;
  b.c_h = c_h_constant(hurst);
  const double phi = phi_fn(hd);
  const double e = 1.0 / (2.0 * hurst);
  b.lo = std::exp(e * std::log(std::numbers::pi * b.c_h * b.c_h / hurst)) * phi;
  b.hi = std::exp(e * std::log(2.0 * std::numbers::pi)) * phi;
  return b;
}

double e1_from_chd(double c, double hurst, std::size_t dim) {
  const double hd = hurst * static_cast<double>(dim);
  if (!(c > 0.0)) throw DomainError("e1_from_chd: C must be positive");
  check_ab(hd, "e1_from_chd");
  const double r = hd / (1.0 - hd);
  // C^{-r} (hd^r - hd^{r+1}) = C^{-r} hd^r (1 - hd)
  return std::exp(-r * std::log(c) + r * std::log(hd) + std::log1p(-hd));
}

BifbmPrefactors bifbm_prefactors(double hurst, double k, double beta) {
  if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("bifbm_prefactors: H must lie in (0, 1)");
  if (!(k > 0.0 && k <= 1.0)) throw DomainError("bifbm_prefactors: K must lie in (0, 1]");
  const double hkb = hurst * k * beta;
  if (!(beta > 0.0) || !(hkb < 1.0)) throw DomainError("bifbm_prefactors: requires 0 < HK beta < 1");
  BifbmPrefactors p;
  p.mgf = std::exp2(-(1.0 - k) * beta / (2.0 * (1.0 - hkb)));
  p.tail = std::exp2((1.0 - k) * beta / (2.0 * hkb));
  return p;
}

double bifbm_critical_lambda_prefactor(double hurst, double k, double beta, double p) {
  bifbm_prefactors(hurst, k, beta);  // domain checks
  return std::exp2(p * (1.0 - k) * beta / 2.0);
}

Integrability integrability_classify(double p, double lambda, const RateConstants& constants) {
  if (!(p > 0.0) || !(lambda > 0.0)) throw DomainError("integrability_classify: p, lambda > 0");
  check_ab(constants.ab, "integrability_classify");
  const double pc = constants.critical_p();
  if (!same_value(p, pc)) return p < pc ? Integrability::finite : Integrability::infinite;
  if (constants.c) {
    if (same_value(lambda, *constants.c)) return Integrability::unknown;
    return lambda < *constants.c ? Integrability::critical_finite : Integrability::critical_infinite;
  }
  if (constants.c_bounds) {
    if (lambda < constants.c_bounds->first) return Integrability::critical_finite;
    if (lambda > constants.c_bounds->second) return Integrability::critical_infinite;
  }
  return Integrability::unknown;
}

double mgf_growth_bound(double b, double p, bool half_convention) {
  if (!(p > 1.0)) throw DomainError("mgf_growth_bound: p must exceed 1");
  if (!(b > 0.0)) throw DomainError("mgf_growth_bound: b must be positive");
  if (std::isinf(b)) return 0.0;
  const double big_b = half_convention ? 0.5 * b : b;
  return std::exp(-std::log(big_b) / (p - 1.0));
}

double rl_tail_factor(double hurst) { return std::pow(alpha_h(hurst), 1.0 / hurst); }

RateConstants rate_constants(const ProcessSpec& process, const FunctionalSpec& functional) {
  process.validate();
  functional.validate(process);
  const std::size_t d = process.dim;
  const double beta = functional.effective_beta(d);
  const double ab = process.self_similarity() * beta;

  RateConstants unknown;
  unknown.ab = ab;
  unknown.provenance = Provenance::mc_estimated;
  unknown.source = process.name();

  if (functional.kind != FunctionalKind::delta) {
    unknown.note = "mc-estimated: run `verify tails` first";
    return unknown;
  }

  switch (process.kind) {
    case ProcessKind::brownian:
      return fbm_delta_constants(0.5, d);
    case ProcessKind::fbm:
      return fbm_delta_constants(process.hurst, d);
    case ProcessKind::subfbm:
      if (process.hurst < 0.5) {
        RateConstants rc = fbm_delta_constants(process.hurst, d);
        rc.note = "equal to the fBm constants for H < 1/2";
        return rc;
      }
      unknown.note = "mc-estimated: the theory covers H < 1/2 only";
      return unknown;
    case ProcessKind::bifbm: {
      RateConstants rc = fbm_delta_constants(process.hurst * process.k, d);
      const BifbmPrefactors pf = bifbm_prefactors(process.hurst, process.k, beta);
      scale_constants(rc, pf.tail, ab);
      rc.note = "fBm constants at index HK times the bi-fBm prefactors";
      return rc;
    }
    case ProcessKind::riemann_liouville: {
      RateConstants rc = fbm_delta_constants(process.alpha, d);
      scale_constants(rc, rl_tail_factor(process.alpha), ab);
      rc.source = "fbm";
      rc.note = "fBm constants times alpha_H^{1/H}";
      return rc;
    }
    case ProcessKind::aux_y:
      unknown.note = "mc-estimated: no closed form";
      return unknown;
  }
  return unknown;
}

}  // namespace ssgauss
