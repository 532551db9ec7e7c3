#include "ssgauss/mc.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <numeric>

#include "ssgauss/errors.hpp"
#include "ssgauss/ldp.hpp"
#include "ssgauss/moments.hpp"
#include "ssgauss/parallel.hpp"
#include "ssgauss/rng.hpp"
#include "ssgauss/specfun.hpp"

namespace ssgauss {

namespace {

constexpr int kBrentBits = 40;

// Minimizes f on [lo, hi]: coarse grid, then Brent on the bracketing cell.
template <class F>
std::pair<double, double> grid_brent(F&& f, double lo, double hi, int grid) {
  int best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  const double h = (hi - lo) / (grid - 1);
  for (int i = 0; i < grid; ++i) {
    const double v = f(lo + h * i);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  const double a = lo + h * std::max(0, best - 1);
  const double b = lo + h * std::min(grid - 1, best + 1);
  std::uintmax_t iters = 100;
  auto r = boost::math::tools::brent_find_minima(f, a, b, kBrentBits, iters);
  if (!(r.second <= best_val)) return {lo + h * best, best_val};
  return r;
}

std::pair<double, double> percentile_ci(std::vector<double> v, double level) {
  std::erase_if(v, [](double x) { return !std::isfinite(x); });
  if (v.empty()) return {std::nan(""), std::nan("")};
  std::sort(v.begin(), v.end());
  auto q = [&](double p) {
    const double pos = p * static_cast<double>(v.size() - 1);
    const auto i = static_cast<std::size_t>(pos);
    const double f = pos - static_cast<double>(i);
    return i + 1 < v.size() ? v[i] * (1.0 - f) + v[i + 1] * f : v[i];
  };
  return {q(0.5 * (1.0 - level)), q(0.5 * (1.0 + level))};
}

// Multiplicity of each sorted position in a bootstrap resample.
std::vector<std::uint32_t> resample_counts(std::size_t n, StreamRng& rng) {
  std::vector<std::uint32_t> counts(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
    ++counts[std::min(j, n - 1)];
  }
  return counts;
}

// ---------------------------------------------------------------- tail fit

struct TailPoints {
  std::vector<double> x, y, w;
};

double log_gamma_q(double s, double z) {
  const double q = boost::math::gamma_q(s, z);
  if (q > 1e-300) return std::log(q);
  // Leading asymptotic term of the upper incomplete gamma function.
  return (s - 1.0) * std::log(z) - z - std::lgamma(s) + std::log1p((s - 1.0) / z);
}

double model_value(TailModel model, double x, double c, double p) {
  const double z = c * std::pow(x, p);
  if (model == TailModel::survival_weibull) return -z;
  return log_gamma_q(1.0 / p, z);
}

// Weighted residual sum of squares with the intercept profiled out.
double tail_ssr(const TailPoints& pts, TailModel model, double c, double p, double* intercept) {
  const std::size_t k = pts.x.size();
  std::vector<double> r(k);
  double sw = 0.0, swr = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    r[i] = pts.y[i] - model_value(model, pts.x[i], c, p);
    sw += pts.w[i];
    swr += pts.w[i] * r[i];
  }
  const double a = swr / sw;
  double ssr = 0.0;
  for (std::size_t i = 0; i < k; ++i) ssr += pts.w[i] * (r[i] - a) * (r[i] - a);
  if (intercept != nullptr) *intercept = a;
  return std::isfinite(ssr) ? ssr : std::numeric_limits<double>::max();
}

// Survival levels log-spaced over [1 - q_hi, 1 - q_lo].  top(r) returns the
// r-th largest value (r >= 1).
template <class Top>
TailPoints tail_points(std::size_t n, double q_lo, double q_hi, std::size_t levels, Top&& top) {
  TailPoints pts;
  const double s_hi = std::log(1.0 - q_lo);
  const double s_lo = std::log(1.0 - q_hi);
  std::size_t last_r = 0;
  for (std::size_t k = 0; k < levels; ++k) {
    const double frac = levels > 1 ? static_cast<double>(k) / static_cast<double>(levels - 1) : 0.0;
    const double s = std::exp(s_hi + (s_lo - s_hi) * frac);
    const auto r = static_cast<std::size_t>(
        std::max<long long>(1, std::llround(s * static_cast<double>(n))));
    if (r == last_r) continue;
    last_r = r;
    const double surv = static_cast<double>(r) / static_cast<double>(n);
    if (surv >= 1.0) continue;
    pts.x.push_back(top(r));
    pts.y.push_back(std::log(surv));
    pts.w.push_back(static_cast<double>(n) * surv / (1.0 - surv));
  }
  return pts;
}

struct TailSolution {
  double c = 0.0, p = 0.0, intercept = 0.0, ssr = 0.0;
};

TailSolution solve_fixed(const TailPoints& pts, TailModel model, double p, double log_c_lo,
                         double log_c_hi, int grid) {
  auto f = [&](double u) { return tail_ssr(pts, model, std::exp(u), p, nullptr); };
  const auto [u, ssr] = grid_brent(f, log_c_lo, log_c_hi, grid);
  TailSolution s;
  s.c = std::exp(u);
  s.p = p;
  s.ssr = tail_ssr(pts, model, s.c, p, &s.intercept);
  return s;
}

double natural_log_c(const TailPoints& pts, double p) {
  return std::log(-pts.y.back() / std::pow(pts.x.back(), p));
}

TailSolution solve_tail(const TailPoints& pts, TailModel model, double p0, bool free_exponent,
                        const TailSolution* near) {
  if (!free_exponent) {
    const double centre = near ? std::log(near->c) : natural_log_c(pts, p0);
    const double width = near ? 2.0 : 8.0;
    return solve_fixed(pts, model, p0, centre - width, centre + width, near ? 9 : 33);
  }
  const double v_centre = near ? std::log(near->p) : std::log(p0);
  const double v_width = near ? 0.5 : std::log(4.0);
  auto inner = [&](double v) {
    const double p = std::exp(v);
    const double centre = natural_log_c(pts, p);
    return solve_fixed(pts, model, p, centre - 8.0, centre + 8.0, near ? 9 : 33);
  };
  auto f = [&](double v) { return inner(v).ssr; };
  const auto [v, ssr] = grid_brent(f, v_centre - v_width, v_centre + v_width, near ? 9 : 25);
  (void)ssr;
  return inner(v);
}

}  // namespace

// ---------------------------------------------------------------- KS

double kolmogorov_survival(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.18) return 1.0;  // the series is 1 to double precision here
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += sign * term;
    if (term < 1e-18) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 100 || b.size() < 100) throw DomainError("ks_two_sample: need >= 100 samples each");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  KsResult r;
  r.statistic = d;
  r.p_value = kolmogorov_survival(std::sqrt(na * nb / (na + nb)) * d);
  return r;
}

// ---------------------------------------------------------------- tail fit

const char* to_string(TailModel m) {
  return m == TailModel::gamma_density ? "gamma_density" : "survival_weibull";
}

TailModel tail_model_from_string(const std::string& name) {
  if (name == "gamma_density") return TailModel::gamma_density;
  if (name == "survival_weibull") return TailModel::survival_weibull;
  throw ConfigError("tail.model", "unknown tail model '" + name + "'");
}

TailFit tail_fit(std::span<const double> samples, double exponent, const TailFitOptions& options) {
  if (!(exponent > 0.0)) throw DomainError("tail_fit: exponent must be positive");
  if (!(options.q_lo > 0.0 && options.q_lo < options.q_hi && options.q_hi < 1.0))
    throw DomainError("tail_fit: need 0 < q_lo < q_hi < 1");
  if (options.levels < 3) throw DomainError("tail_fit: need at least 3 levels");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();

  TailFit fit;
  fit.model = options.model;
  fit.free_exponent = options.free_exponent;
  fit.n = n;
  if (n < 10000) fit.warnings.push_back("fewer than 1e4 samples");

  auto top = [&](std::size_t r) { return sorted[n - r]; };
  const double tail_count = std::floor((1.0 - options.q_lo) * static_cast<double>(n));
  if (tail_count < 50.0) throw NumericError("insufficient tail");
  const TailPoints pts = tail_points(n, options.q_lo, options.q_hi, options.levels, top);
  if (pts.x.size() < 3) throw NumericError("insufficient tail");
  if (!(pts.x.front() > 0.0)) throw NumericError("tail_fit: tail window contains non-positive values");

  fit.x_lo = pts.x.front();
  fit.x_hi = pts.x.back();
  fit.levels = pts.x.size();
  fit.tail_points = static_cast<std::size_t>(
      std::distance(std::lower_bound(sorted.begin(), sorted.end(), fit.x_lo), sorted.end()));

  const TailSolution sol = solve_tail(pts, options.model, exponent, options.free_exponent, nullptr);
  fit.c = sol.c;
  fit.p = sol.p;
  fit.intercept = sol.intercept;
  fit.residual = sol.ssr;

  if (options.bootstrap > 0 && n >= 1000) {
    std::vector<double> cs(options.bootstrap), ps(options.bootstrap);
    parallel_for(options.bootstrap, [&](std::size_t b) {
      StreamRng rng(derive_seed(options.seed, StreamSalt::bootstrap, b));
      const auto counts = resample_counts(n, rng);
      // Order statistics of the resample from suffix counts.
      std::vector<std::size_t> cum(n + 1, 0);
      for (std::size_t i = n; i-- > 0;) cum[i] = cum[i + 1] + counts[i];
      auto fast_top = [&](std::size_t r) {
        std::size_t lo = 0, hi = n;  // largest i with cum[i] >= r
        while (hi - lo > 1) {
          const std::size_t mid = (lo + hi) / 2;
          if (cum[mid] >= r)
            lo = mid;
          else
            hi = mid;
        }
        return sorted[lo];
      };
      const TailPoints bp = tail_points(n, options.q_lo, options.q_hi, options.levels, fast_top);
      if (bp.x.size() < 3 || !(bp.x.front() > 0.0)) {
        cs[b] = ps[b] = std::nan("");
        return;
      }
      const TailSolution bs = solve_tail(bp, options.model, exponent, options.free_exponent, &sol);
      cs[b] = bs.c;
      ps[b] = bs.p;
    });
    fit.c_ci = percentile_ci(cs, options.ci_level);
    if (options.free_exponent) fit.p_ci = percentile_ci(ps, options.ci_level);
  }

  if (options.sensitivity) {
    const std::pair<double, double> windows[] = {
        {0.80, 0.99}, {0.90, 0.99}, {0.90, 0.999}, {0.95, 0.999}, {0.99, 0.9999}};
    for (const auto& [lo, hi] : windows) {
      if ((1.0 - lo) * static_cast<double>(n) < 50.0 || (1.0 - hi) * static_cast<double>(n) < 1.0) {
        fit.warnings.push_back("sensitivity window skipped: too few samples");
        continue;
      }
      const TailPoints wp = tail_points(n, lo, hi, options.levels, top);
      if (wp.x.size() < 3 || !(wp.x.front() > 0.0)) continue;
      const TailSolution ws = solve_tail(wp, options.model, exponent, options.free_exponent, nullptr);
      fit.sensitivity.push_back({lo, hi, ws.c, ws.p});
    }
  }
  return fit;
}

std::vector<std::pair<double, double>> tail_curve(std::span<const double> samples, double q_lo,
                                                  double q_hi, std::size_t levels) {
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  if (n == 0) return {};
  const TailPoints pts =
      tail_points(n, q_lo, q_hi, levels, [&](std::size_t r) { return sorted[n - r]; });
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < pts.x.size(); ++i) out.emplace_back(pts.x[i], pts.y[i]);
  return out;
}

// ---------------------------------------------------------------- moments

namespace {

struct AFit {
  double a = 0.0;
  double se = 0.0;
};

// Weighted fit of a + b/m + c log(m)/m over m >= 2; falls back to the last
// term when there are too few orders.
AFit extrapolate_a(const std::vector<double>& a_m, const std::vector<double>& se) {
  const std::size_t mu = a_m.size();
  if (mu < 5) return {a_m.back(), se.back()};
  const std::size_t rows = mu - 1;
  Eigen::MatrixXd x(rows, 3);
  Eigen::VectorXd y(rows), w(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const double m = static_cast<double>(i + 2);
    x(i, 0) = 1.0;
    x(i, 1) = 1.0 / m;
    x(i, 2) = std::log(m) / m;
    y(i) = a_m[i + 1];
    const double s = std::max(se[i + 1], 1e-12);
    w(i) = 1.0 / (s * s);
  }
  const Eigen::MatrixXd xtw = x.transpose() * w.asDiagonal();
  const Eigen::MatrixXd normal = xtw * x;
  const Eigen::VectorXd beta = normal.ldlt().solve(xtw * y);
  const Eigen::MatrixXd cov = normal.inverse();
  return {beta(0), std::sqrt(std::max(0.0, cov(0, 0)))};
}

std::vector<double> a_sequence(const std::vector<double>& means, double ab) {
  std::vector<double> a(means.size());
  for (std::size_t i = 0; i < means.size(); ++i) {
    const double m = static_cast<double>(i + 1);
    a[i] = (std::log(means[i]) - ab * std::lgamma(m + 1.0)) / m;
  }
  return a;
}

}  // namespace

MomentLimit moment_limit_a(std::span<const double> samples, double ab, std::size_t m_max,
                           std::size_t bootstrap, std::uint64_t seed) {
  if (!(ab > 0.0 && ab < 1.0)) throw DomainError("moment_limit_a: ab must lie in (0, 1)");
  if (m_max < 1 || m_max > 12) throw DomainError("moment_limit_a: m_max must lie in [1, 12]");
  if (samples.size() < 100) throw DomainError("moment_limit_a: need >= 100 samples");
  for (double v : samples)
    if (!(v >= 0.0)) throw DomainError("moment_limit_a: samples must be non-negative");

  MomentLimit out;
  out.m_requested = m_max;
  std::vector<double> means;
  for (std::size_t m = 1; m <= m_max; ++m) {
    const auto [mean, se] = sample_moment(samples, m);
    if (!(mean > 0.0) || se / mean > 0.5) {
      out.warnings.push_back("m_max truncated to " + std::to_string(m - 1) +
                             ": relative standard error above 50%");
      break;
    }
    means.push_back(mean);
    out.a_m_se.push_back(se / mean / static_cast<double>(m));
  }
  if (means.empty()) throw NumericError("moment_limit_a: first moment is not resolved");
  out.m_used = means.size();
  out.a_m = a_sequence(means, ab);

  const AFit af = extrapolate_a(out.a_m, out.a_m_se);
  out.a = af.a;
  out.a_se = af.se;
  out.bridged_c = -moment_tail_bridge(out.a, ab);

  if (out.a_m.size() >= 2) {
    bool up = true, down = true;
    for (std::size_t i = 1; i < out.a_m.size(); ++i) {
      const double step = out.a_m[i] - out.a_m[i - 1];
      up = up && step >= 0.0;
      down = down && step <= 0.0;
    }
    out.monotone = up || down;
    out.last_step = out.a_m.back() - out.a_m[out.a_m.size() - 2];
  }

  if (bootstrap > 0) {
    const std::size_t n = samples.size();
    const std::size_t mu = out.m_used;
    std::vector<double> as(bootstrap);
    parallel_for(bootstrap, [&](std::size_t b) {
      StreamRng rng(derive_seed(seed, StreamSalt::bootstrap, b, 1));
      std::vector<double> sums(mu, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
        const double v = samples[std::min(j, n - 1)];
        double pw = 1.0;
        for (std::size_t m = 0; m < mu; ++m) {
          pw *= v;
          sums[m] += pw;
        }
      }
      for (double& s : sums) s /= static_cast<double>(n);
      bool ok = true;
      for (double s : sums) ok = ok && s > 0.0;
      as[b] = ok ? extrapolate_a(a_sequence(sums, ab), out.a_m_se).a : std::nan("");
    });
    out.a_ci = percentile_ci(as, 0.95);
    out.bridged_c_ci = std::pair{-moment_tail_bridge(out.a_ci->second, ab),
                                 -moment_tail_bridge(out.a_ci->first, ab)};
  }
  return out;
}

// ---------------------------------------------------------------- small ball

namespace {

struct SbSolution {
  double a = 0.0, c = 0.0, e = 0.0, ssr = 0.0;
};

SbSolution small_ball_linear(const std::vector<double>& eps, const std::vector<double>& logp,
                             const std::vector<double>& w, double e) {
  // log P = a - c eps^{-e}: weighted least squares in (1, -eps^{-e}).
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const double x = -std::pow(eps[i], -e);
    sw += w[i];
    sx += w[i] * x;
    sy += w[i] * logp[i];
    sxx += w[i] * x * x;
    sxy += w[i] * x * logp[i];
  }
  SbSolution s;
  s.e = e;
  const double det = sw * sxx - sx * sx;
  s.c = (sw * sxy - sx * sy) / det;
  s.a = (sy - s.c * sx) / sw;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    const double r = logp[i] - s.a + s.c * std::pow(eps[i], -e);
    s.ssr += w[i] * r * r;
  }
  if (!std::isfinite(s.ssr)) s.ssr = std::numeric_limits<double>::max();
  return s;
}

SbSolution small_ball_solve(const std::vector<double>& eps, const std::vector<double>& logp,
                            const std::vector<double>& w, std::optional<double> fixed,
                            std::optional<double> near) {
  if (fixed) return small_ball_linear(eps, logp, w, *fixed);
  auto f = [&](double v) { return small_ball_linear(eps, logp, w, std::exp(v)).ssr; };
  const double lo = near ? std::log(*near) - 0.7 : std::log(0.2);
  const double hi = near ? std::log(*near) + 0.7 : std::log(20.0);
  const auto [v, ssr] = grid_brent(f, lo, hi, near ? 9 : 41);
  (void)ssr;
  return small_ball_linear(eps, logp, w, std::exp(v));
}

}  // namespace

SmallBallFit small_ball_fit(std::span<const double> sup_abs, const SmallBallOptions& options) {
  std::vector<double> sorted(sup_abs.begin(), sup_abs.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  if (n < 100) throw DomainError("small_ball_fit: need >= 100 samples");
  const double nd = static_cast<double>(n);

  SmallBallFit fit;
  fit.n = n;
  fit.free_exponent = !options.fixed_exponent;

  std::vector<double> grid = options.eps;
  if (grid.empty()) {
    auto quantile = [&](double q) {
      const auto i = static_cast<std::size_t>(std::floor(q * nd));
      return sorted[std::min(i, n - 1)];
    };
    const double e_hi = quantile(0.05);
    const double e_lo = quantile(std::max(100.0 / nd, 1e-4));
    const std::size_t k = std::max<std::size_t>(options.grid_points, 3);
    for (std::size_t i = 0; i < k; ++i) {
      const double f = static_cast<double>(i) / static_cast<double>(k - 1);
      grid.push_back(std::exp(std::log(e_hi) + (std::log(e_lo) - std::log(e_hi)) * f));
    }
  }
  std::sort(grid.begin(), grid.end(), std::greater<>());

  std::vector<std::size_t> pos;
  std::vector<double> logp, w;
  for (double e : grid) {
    const auto count = static_cast<std::size_t>(
        std::distance(sorted.begin(), std::upper_bound(sorted.begin(), sorted.end(), e)));
    if (count == 0) {
      fit.warnings.push_back("zero hits at eps=" + std::to_string(e) + ", dropped");
      continue;
    }
    const double p = static_cast<double>(count) / nd;
    if (p < 10.0 / nd) {
      fit.warnings.push_back("fewer than 10 hits at eps=" + std::to_string(e) + ", dropped");
      continue;
    }
    if (p >= 1.0) {
      fit.warnings.push_back("probability 1 at eps=" + std::to_string(e) + ", dropped");
      continue;
    }
    fit.eps.push_back(e);
    fit.probabilities.push_back(p);
    pos.push_back(count);
    logp.push_back(std::log(p));
    w.push_back(nd * p / (1.0 - p));
  }
  const std::size_t need = options.fixed_exponent ? 2 : 3;
  if (fit.eps.size() < need) throw NumericError("small_ball_fit: too few resolved eps levels");

  const SbSolution sol = small_ball_solve(fit.eps, logp, w, options.fixed_exponent, std::nullopt);
  fit.exponent = sol.e;
  fit.c0 = sol.c;
  fit.intercept = sol.a;

  if (options.bootstrap > 0) {
    const std::size_t k = fit.eps.size();
    std::vector<double> cs(options.bootstrap), es(options.bootstrap);
    parallel_for(options.bootstrap, [&](std::size_t b) {
      StreamRng rng(derive_seed(options.seed, StreamSalt::bootstrap, b, 2));
      // pos is decreasing; bin each draw by the smallest level it falls under.
      std::vector<std::size_t> bins(k + 1, 0);
      for (std::size_t i = 0; i < n; ++i) {
        auto j = static_cast<std::size_t>(rng.uniform() * nd);
        j = std::min(j, n - 1);
        std::size_t lo = 0;
        while (lo < k && j < pos[lo]) ++lo;
        ++bins[lo];
      }
      std::vector<double> blogp(k), bw(k);
      bool ok = true;
      // Draws under level l are those binned above l.
      std::size_t c = bins[k];
      for (std::size_t l = k; l-- > 0;) {
        const double p = static_cast<double>(c) / nd;
        c += bins[l];
        if (!(p > 0.0 && p < 1.0)) {
          ok = false;
          break;
        }
        blogp[l] = std::log(p);
        bw[l] = nd * p / (1.0 - p);
      }
      if (!ok) {
        cs[b] = es[b] = std::nan("");
        return;
      }
      const SbSolution bs = small_ball_solve(fit.eps, blogp, bw, options.fixed_exponent, sol.e);
      cs[b] = bs.c;
      es[b] = bs.e;
    });
    fit.c0_ci = percentile_ci(cs, 0.95);
    if (!options.fixed_exponent) fit.exponent_ci = percentile_ci(es, 0.95);
  }
  return fit;
}

std::vector<double> sample_sup_abs(const PathGenerator& generator, std::size_t paths) {
  const std::size_t n = generator.grid().n;
  std::vector<double> sup(paths, 0.0);
  parallel_chunks(paths, [&](std::size_t, std::size_t begin, std::size_t end) {
    std::vector<double> path(n);
    for (std::size_t p = begin; p < end; ++p) {
      generator.generate(p, 0, path);
      double s = 0.0;
      for (double v : path) s = std::max(s, std::abs(v));
      sup[p] = s;
    }
  });
  return sup;
}

SmallBallFit small_ball_fit(const ProcessSpec& spec, const UniformGrid& grid, SamplerMethod method,
                            std::size_t paths, std::uint64_t seed, const SmallBallOptions& options) {
  spec.validate();
  grid.validate();
  const auto generator = make_generator(spec, grid, method, seed);
  const std::vector<double> sup = sample_sup_abs(*generator, paths);
  return small_ball_fit(sup, options);
}

// ---------------------------------------------------------------- lower bound

LowerBoundCheck lower_bound_exp_check(double alpha, double beta, const std::vector<double>& t_grid,
                                      std::size_t paths, std::size_t n, std::uint64_t seed,
                                      std::optional<double> c0) {
  const ProcessSpec spec = ProcessSpec::riemann_liouville(alpha, 1);
  spec.validate();
  const FunctionalSpec functional = FunctionalSpec::riesz(beta);
  functional.validate(spec);
  const double ab = alpha * beta;
  const UniformGrid grid{n, 1.0};
  const auto generator = make_generator(spec, grid, default_method(spec), seed);
  std::vector<double> sup;
  const FunctionalSample sample = evaluate_functional(*generator, functional, paths, &sup);

  LowerBoundCheck check;
  check.alpha = alpha;
  check.beta = beta;
  const double d = 1.0;
  check.c_d = std::pow(d, -beta / 2.0);
  if (c0) {
    check.c0 = *c0;
  } else {
    SmallBallOptions sb;
    sb.fixed_exponent = 1.0 / alpha;
    sb.bootstrap = 0;
    check.c0 = small_ball_fit(sup, sb).c0;
  }
  if (!(check.c0 > 0.0)) throw NumericError("lower_bound_exp_check: small-ball constant not positive");
  if (beta == 0.0) check.warnings.push_back("beta = 0: the integrand is constant");

  const double r = 2.0 * check.c0 * d / check.c_d;
  check.rate = 0.5 * check.c_d * std::pow(r, -ab / (1.0 - ab));
  for (double t : t_grid) {
    if (!(t > 0.0)) throw DomainError("lower_bound_exp_check: t must be positive");
    LowerBoundPoint pt;
    pt.t = t;
    pt.eps = std::pow(r, alpha / (1.0 - ab)) * std::pow(t, -alpha);
    pt.bound = check.c_d * std::pow(t, 1.0 - ab) * std::pow(pt.eps, -beta) -
               check.c0 * d * std::pow(pt.eps, -1.0 / alpha);
    pt.margin_rate = pt.bound / t;
    const double scale = std::pow(t, 1.0 - ab);
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < sup.size(); ++p)
      if (sup[p] <= pt.eps) {
        ++pt.hits;
        mx = std::max(mx, scale * sample.values[p]);
      }
    if (pt.hits > 0) {
      double acc = 0.0;
      for (std::size_t p = 0; p < sup.size(); ++p)
        if (sup[p] <= pt.eps) acc += std::exp(scale * sample.values[p] - mx);
      pt.empirical = (mx + std::log(acc) - std::log(static_cast<double>(sup.size()))) / t;
    }
    check.points.push_back(pt);
  }
  return check;
}

// ---------------------------------------------------------------- consistency

ConsistencyReport constant_consistency(double hurst, std::size_t paths, std::size_t n,
                                       std::uint64_t seed, const TailFitOptions& options) {
  ConsistencyReport rep;
  rep.hurst = hurst;
  const UniformGrid grid{n, 1.0};
  const FunctionalSpec delta = FunctionalSpec::delta();
  TailFitOptions opts = options;
  opts.free_exponent = false;
  const double exponent = 1.0 / hurst;

  const ProcessSpec fbm = ProcessSpec::fbm(hurst);
  const auto gen_fbm = make_generator(fbm, grid, default_method(fbm), seed);
  const FunctionalSample s_fbm = evaluate_functional(*gen_fbm, delta, paths);
  rep.fbm = tail_fit(s_fbm.values, exponent, opts);

  const ProcessSpec rl = ProcessSpec::riemann_liouville(hurst);
  const auto gen_rl = make_generator(rl, grid, default_method(rl), seed);
  const FunctionalSample s_rl = evaluate_functional(*gen_rl, delta, paths);
  rep.rl = tail_fit(s_rl.values, exponent, opts);

  rep.rl_factor = rl_tail_factor(hurst);
  rep.rl_corrected_c = rep.rl.c / rep.rl_factor;
  const ChdBounds b = chd_bounds(hurst, 1);
  rep.chd = {b.lo, b.hi};
  if (rep.fbm.c_ci && rep.rl.c_ci) {
    rep.rl_corrected_ci = {rep.rl.c_ci->first / rep.rl_factor, rep.rl.c_ci->second / rep.rl_factor};
    rep.ci_overlap = rep.fbm.c_ci->first <= rep.rl_corrected_ci.second &&
                     rep.rl_corrected_ci.first <= rep.fbm.c_ci->second;
    rep.fbm_meets_chd = rep.fbm.c_ci->first <= b.hi && b.lo <= rep.fbm.c_ci->second;
  }
  return rep;
}

}  // namespace ssgauss
