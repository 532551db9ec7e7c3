#include "ssgauss/functionals.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ssgauss/errors.hpp"
#include "ssgauss/mc.hpp"
#include "ssgauss/parallel.hpp"
#include "ssgauss/rng.hpp"

namespace ssgauss {

const char* to_string(FunctionalKind kind) {
  switch (kind) {
    case FunctionalKind::delta:
      return "delta";
    case FunctionalKind::riesz:
      return "riesz";
    case FunctionalKind::product:
      return "product";
  }
  return "unknown";
}

FunctionalKind functional_kind_from_string(const std::string& name) {
  if (name == "delta" || name == "local-time") return FunctionalKind::delta;
  if (name == "riesz") return FunctionalKind::riesz;
  if (name == "product") return FunctionalKind::product;
  throw ConfigError("functional.kind", "unknown functional '" + name + "'");
}

const char* to_string(ExtrapolationMode mode) {
  return mode == ExtrapolationMode::expansion ? "expansion" : "fitted";
}

ExtrapolationMode extrapolation_mode_from_string(const std::string& name) {
  if (name == "expansion") return ExtrapolationMode::expansion;
  if (name == "fitted") return ExtrapolationMode::fitted;
  throw ConfigError("functional.extrapolation", "unknown mode '" + name + "'");
}

FunctionalSpec FunctionalSpec::delta(std::vector<double> eps) {
  FunctionalSpec f;
  f.kind = FunctionalKind::delta;
  f.eps = std::move(eps);
  return f;
}

FunctionalSpec FunctionalSpec::riesz(double beta) {
  FunctionalSpec f;
  f.kind = FunctionalKind::riesz;
  f.beta = beta;
  return f;
}

FunctionalSpec FunctionalSpec::product(std::vector<double> betas) {
  FunctionalSpec f;
  f.kind = FunctionalKind::product;
  f.betas = std::move(betas);
  return f;
}

double FunctionalSpec::effective_beta(std::size_t dim) const {
  switch (kind) {
    case FunctionalKind::delta:
      return static_cast<double>(dim);
    case FunctionalKind::riesz:
      return beta;
    case FunctionalKind::product: {
      double sum = 0.0;
      for (double b : betas) sum += b;
      return sum;
    }
  }
  return 0.0;
}

void FunctionalSpec::validate(const ProcessSpec& process) const {
  const double d = static_cast<double>(process.dim);
  switch (kind) {
    case FunctionalKind::delta:
      for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0.0)) throw ConfigError("functional.eps", "values must be positive");
        if (i > 0 && !(eps[i] < eps[i - 1])) {
          throw ConfigError("functional.eps", "schedule must be strictly decreasing");
        }
      }
      break;
    case FunctionalKind::riesz:
      if (!(beta > 0.0 && beta < d)) throw ConfigError("functional.beta", "must lie in (0, d)");
      break;
    case FunctionalKind::product:
      if (betas.size() != process.dim) {
        throw ConfigError("functional.betas", "needs one exponent per component");
      }
      for (double b : betas) {
        if (!(b > 0.0 && b < 1.0)) throw ConfigError("functional.betas", "each must lie in (0, 1)");
      }
      break;
  }
  const double product = process.self_similarity() * effective_beta(process.dim);
  if (!(product < 1.0)) {
    std::ostringstream os;
    os << "alpha_ss * beta = " << product
       << " violates the integrability condition alpha_ss * beta < 1";
    throw ConfigError(kind == FunctionalKind::delta ? "process.dim" : "functional.beta", os.str());
  }
}

double eps_floor(const ProcessSpec& process, const UniformGrid& grid) {
  return 4.0 * std::pow(grid.step(), 2.0 * process.self_similarity());
}

std::vector<double> default_eps_schedule(const ProcessSpec& process, const UniformGrid& grid) {
  const double floor = eps_floor(process, grid);
  std::vector<double> eps(4);
  for (std::size_t k = 0; k < eps.size(); ++k) {
    eps[k] = 64.0 * floor * std::pow(0.25, static_cast<double>(k));
  }
  return eps;
}

double fit_extrapolation_order(std::span<const double> eps, std::span<const double> values) {
  const std::size_t k = values.size();
  if (k < 3 || eps.size() != k) throw DomainError("extrapolation needs at least 3 levels");
  const double d1 = values[k - 2] - values[k - 3];
  const double d2 = values[k - 1] - values[k - 2];
  if (d1 == 0.0 || d2 == 0.0 || (d1 > 0.0) != (d2 > 0.0)) return 0.0;
  const double ratio = eps[k - 1] / eps[k - 2];
  const double rho = std::log(d2 / d1) / std::log(ratio);
  if (!std::isfinite(rho)) return 0.0;
  return std::clamp(rho, 0.1, 3.0);
}

std::vector<double> expansion_exponents(const ProcessSpec& process, std::size_t count) {
  const double a = process.self_similarity();
  const double rho0 = (1.0 - a * static_cast<double>(process.dim)) / (2.0 * a);
  std::vector<double> out;
  bool placed = false;
  for (double j = 1.0; out.size() < count; j += 1.0) {
    if (!placed && rho0 <= j) {
      out.push_back(rho0);
      placed = true;
      // A coincident integer gives an eps^j log eps term; keep one power only.
      if (std::abs(rho0 - j) < 1e-12) continue;
      if (out.size() == count) break;
    }
    out.push_back(j);
  }
  return out;
}

std::vector<double> richardson_weights(std::span<const double> eps, std::span<const double> exponents) {
  const std::size_t m = exponents.size() + 1;
  if (eps.size() < m) throw DomainError("richardson_weights: too few eps levels");
  const std::size_t first = eps.size() - m;
  // Rows are levels; v_k = L + sum_j c_j eps_k^{r_j}.  The weights are the
  // first row of the inverse, i.e. the solution of A^T w = e_0.
  Eigen::MatrixXd a(m, m);
  const double scale = eps[eps.size() - 1];
  for (std::size_t k = 0; k < m; ++k) {
    a(static_cast<Eigen::Index>(k), 0) = 1.0;
    for (std::size_t j = 0; j < exponents.size(); ++j)
      a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j + 1)) =
          std::pow(eps[first + k] / scale, exponents[j]);
  }
  Eigen::VectorXd e0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  e0(0) = 1.0;
  const Eigen::VectorXd w = a.transpose().fullPivLu().solve(e0);
  std::vector<double> out(eps.size(), 0.0);
  for (std::size_t k = 0; k < m; ++k) out[first + k] = w(static_cast<Eigen::Index>(k));
  return out;
}

Extrapolation local_time_extrapolate(std::span<const double> eps, std::span<const double> values,
                                     double order) {
  const std::size_t k = values.size();
  if (k < 3 || eps.size() != k) throw DomainError("extrapolation needs at least 3 levels");
  Extrapolation out;
  const double last = values[k - 1];
  const double prev = values[k - 2];
  bool constant = true;
  for (std::size_t i = 1; i < k; ++i) constant = constant && values[i] == values[0];
  if (constant) {
    out.value = last;
    return out;
  }
  const double rho = order > 0.0 ? order : fit_extrapolation_order(eps, values);
  if (rho <= 0.0) {
    out.fallback = true;
    out.value = last;
    for (std::size_t i = k - 3; i < k; ++i) {
      out.error = std::max(out.error, 2.0 * std::abs(values[i] - last));
    }
    return out;
  }
  const double q = std::pow(eps[k - 1] / eps[k - 2], rho);
  out.order = rho;
  out.value = (last - q * prev) / (1.0 - q);
  out.error = std::abs(out.value - last);
  return out;
}

FunctionalEvaluator::FunctionalEvaluator(const ProcessSpec& process, const UniformGrid& grid,
                                         FunctionalSpec spec)
    : process_(process), grid_(grid), spec_(std::move(spec)) {
  process_.validate();
  grid_.validate();
  spec_.validate(process_);
  alpha_ss_ = process_.self_similarity();
  effective_beta_ = spec_.effective_beta(process_.dim);
  if (spec_.kind == FunctionalKind::delta) {
    eps_ = spec_.eps.empty() ? default_eps_schedule(process_, grid_) : spec_.eps;
  }
}

std::size_t FunctionalEvaluator::outputs() const {
  return spec_.kind == FunctionalKind::delta ? eps_.size() : 2;
}

double FunctionalEvaluator::integrand(std::span<const double> path, std::size_t i,
                                      double& norm) const {
  const std::size_t n = grid_.n;
  if (spec_.kind == FunctionalKind::riesz) {
    if (process_.dim == 1) {
      norm = std::abs(path[i]);
    } else {
      double r2 = 0.0;
      for (std::size_t c = 0; c < process_.dim; ++c) r2 += path[c * n + i] * path[c * n + i];
      norm = std::sqrt(r2);
    }
    return norm == 0.0 ? 0.0 : std::pow(norm, -spec_.beta);
  }
  double value = 1.0;
  norm = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < process_.dim; ++c) {
    const double x = std::abs(path[c * n + i]);
    norm = std::min(norm, x);
    value *= std::pow(x, -spec_.betas[c]);
  }
  return norm == 0.0 ? 0.0 : value;
}

double FunctionalEvaluator::potential(std::span<const double> path, std::size_t stride,
                                      PathStats& stats) const {
  const std::size_t m = grid_.n / stride;
  const double h = grid_.step() * static_cast<double>(stride);
  thread_local std::vector<double> f;
  thread_local std::vector<char> zero;
  f.assign(m, 0.0);
  zero.assign(m, 0);
  const double tiny = 1e-3 * std::pow(grid_.step(), alpha_ss_);
  bool any_zero = false;
  for (std::size_t j = 0; j < m; ++j) {
    double norm = 0.0;
    f[j] = integrand(path, (j + 1) * stride - 1, norm);
    if (norm == 0.0) {
      zero[j] = 1;
      any_zero = true;
    }
    if (stride == 1 && norm < tiny) ++stats.near_singular;
  }
  if (any_zero) {
    // A value of exactly zero has probability zero; use the neighbouring cells.
    for (std::size_t j = 0; j < m; ++j) {
      if (!zero[j]) continue;
      double sum = 0.0;
      int count = 0;
      if (j > 0 && !zero[j - 1]) {
        sum += f[j - 1];
        ++count;
      }
      if (j + 1 < m && !zero[j + 1]) {
        sum += f[j + 1];
        ++count;
      }
      f[j] = count > 0 ? sum / count : 0.0;
      if (stride == 1) ++stats.zero_cells;
    }
  }
  if (stride == 1) {
    for (double v : f) stats.max_integrand = std::max(stats.max_integrand, v);
  }
  // First cell [0, t_1]: |X_s| ~ (s/t_1)^{alpha_ss} |X_{t_1}| integrated exactly.
  double total = f[0] * h / (1.0 - alpha_ss_ * effective_beta_);
  if (m >= 2) {
    double inner = 0.5 * (f[0] + f[m - 1]);
    for (std::size_t j = 1; j + 1 < m; ++j) inner += f[j];
    total += h * inner;
  }
  return total;
}

FunctionalEvaluator::PathStats FunctionalEvaluator::evaluate(std::span<const double> path,
                                                             std::span<double> out) const {
  PathStats stats;
  const std::size_t n = grid_.n;
  const std::size_t d = process_.dim;
  if (spec_.kind == FunctionalKind::delta) {
    const std::size_t levels = eps_.size();
    thread_local std::vector<double> sums;
    thread_local std::vector<double> inv;
    sums.assign(levels, 0.0);
    inv.resize(levels);
    for (std::size_t k = 0; k < levels; ++k) inv[k] = -0.5 / eps_[k];
    for (std::size_t i = 0; i < n; ++i) {
      double r2 = 0.0;
      if (d == 1) {
        r2 = path[i] * path[i];
      } else {
        for (std::size_t c = 0; c < d; ++c) r2 += path[c * n + i] * path[c * n + i];
      }
      const double weight = i + 1 == n ? 0.5 : 1.0;
      for (std::size_t k = 0; k < levels; ++k) {
        const double arg = r2 * inv[k];
        if (arg > -745.0) sums[k] += weight * std::exp(arg);
      }
    }
    const double h = grid_.step();
    for (std::size_t k = 0; k < levels; ++k) {
      const double norm = std::pow(2.0 * std::numbers::pi * eps_[k], -0.5 * static_cast<double>(d));
      // The origin contributes p_eps(0) with trapezoid weight 1/2.
      out[k] = h * norm * (0.5 + sums[k]);
      stats.max_integrand = std::max(stats.max_integrand, norm);
    }
    return stats;
  }
  out[0] = potential(path, 1, stats);
  out[1] = n % 2 == 0 ? potential(path, 2, stats) : out[0];
  return stats;
}

double mollified_local_time(std::span<const double> path, std::size_t dim, const UniformGrid& grid,
                            double eps) {
  if (!(eps > 0.0)) throw DomainError("mollified_local_time: eps must be positive");
  const std::size_t n = grid.n;
  double sum = 0.5;
  for (std::size_t i = 0; i < n; ++i) {
    double r2 = 0.0;
    for (std::size_t c = 0; c < dim; ++c) r2 += path[c * n + i] * path[c * n + i];
    const double weight = i + 1 == n ? 0.5 : 1.0;
    sum += weight * std::exp(-0.5 * r2 / eps);
  }
  return grid.step() * std::pow(2.0 * std::numbers::pi * eps, -0.5 * static_cast<double>(dim)) *
         sum;
}

std::vector<double> mollified_local_time(const PathBatch& batch, double eps) {
  std::vector<double> out(batch.paths);
  parallel_for(batch.paths, [&](std::size_t p) {
    out[p] = mollified_local_time(batch.path(p), batch.spec.dim, batch.grid, eps);
  });
  return out;
}

namespace {

std::vector<double> potential_values(const PathBatch& batch, const FunctionalSpec& spec) {
  const FunctionalSample sample = evaluate_functional(batch, spec);
  return sample.values;
}

struct RawResult {
  std::vector<double> raw;
  std::vector<FunctionalEvaluator::PathStats> stats;
};

FunctionalSample finish_sample(const FunctionalEvaluator& evaluator, const ProcessSpec& process,
                               const UniformGrid& grid, std::size_t paths, RawResult&& result) {
  FunctionalSample sample;
  sample.spec = evaluator.spec();
  sample.process = process;
  sample.grid = grid;
  const std::size_t outputs = evaluator.outputs();
  FunctionalDiagnostics& diag = sample.diagnostics;
  std::size_t near = 0;
  for (const auto& s : result.stats) {
    diag.max_integrand = std::max(diag.max_integrand, s.max_integrand);
    near += s.near_singular;
    diag.zero_cells += s.zero_cells;
  }
  diag.near_singular_fraction =
      paths == 0 ? 0.0 : static_cast<double>(near) / static_cast<double>(paths * grid.n);
  if (diag.zero_cells > 0) {
    diag.warnings.push_back(std::to_string(diag.zero_cells) +
                            " cells with an exact zero replaced by neighbour averages");
  }
  sample.values.resize(paths);
  if (evaluator.spec().kind == FunctionalKind::delta) {
    sample.eps = evaluator.eps();
    sample.per_eps = std::move(result.raw);
    const double floor = eps_floor(process, grid);
    if (sample.eps.back() < floor * (1.0 - 1e-12)) {
      diag.below_eps_floor = true;
      diag.warnings.push_back("smallest eps is below the grid resolution floor");
    }
    sample.errors.resize(paths);
    if (outputs >= 3) {
      std::vector<double> means(outputs);
      std::vector<double> column(paths);
      for (std::size_t k = 0; k < outputs; ++k) {
        for (std::size_t p = 0; p < paths; ++p) column[p] = sample.per_eps[p * outputs + k];
        means[k] = compensated_sum(column) / static_cast<double>(std::max<std::size_t>(paths, 1));
      }
      const double fitted = fit_extrapolation_order(sample.eps, means);
      diag.fitted_order = fitted;
      const bool expansion = evaluator.spec().extrapolation == ExtrapolationMode::expansion;
      std::vector<double> weights;
      double order = fitted;
      if (expansion) {
        const std::vector<double> exps = expansion_exponents(process, outputs - 1);
        weights = richardson_weights(sample.eps, exps);
        order = exps.front();
      } else if (order <= 0.0) {
        diag.warnings.push_back(
            "batch means are not monotone in eps; using the smallest eps with inflated errors");
      }
      diag.extrapolation_order = order;
      for (std::size_t p = 0; p < paths; ++p) {
        std::span<const double> seq(sample.per_eps.data() + p * outputs, outputs);
        Extrapolation e;
        if (expansion) {
          double v = 0.0;
          for (std::size_t k = 0; k < outputs; ++k) v += weights[k] * seq[k];
          e.value = v;
          e.order = order;
          e.error = std::abs(v - seq.back());
        } else if (order > 0.0) {
          e = local_time_extrapolate(sample.eps, seq, order);
        } else {
          e.value = seq.back();
          e.fallback = true;
          for (std::size_t k = outputs - 3; k < outputs; ++k) {
            e.error = std::max(e.error, 2.0 * std::abs(seq[k] - seq.back()));
          }
        }
        if (e.fallback) ++diag.extrapolation_fallbacks;
        if (e.value < 0.0) {
          e.error = std::max(e.error, -e.value);
          e.value = 0.0;
        }
        sample.values[p] = e.value;
        sample.errors[p] = e.error;
      }
    } else {
      for (std::size_t p = 0; p < paths; ++p) {
        sample.values[p] = sample.per_eps[p * outputs + outputs - 1];
      }
    }
  } else {
    std::vector<double> diffs(paths);
    for (std::size_t p = 0; p < paths; ++p) {
      sample.values[p] = result.raw[2 * p];
      diffs[p] = std::abs(result.raw[2 * p] - result.raw[2 * p + 1]);
    }
    diag.discretization_error =
        paths == 0 ? 0.0 : compensated_sum(diffs) / static_cast<double>(paths);
  }
  return sample;
}

}  // namespace

std::vector<double> riesz_functional(const PathBatch& batch, double beta) {
  return potential_values(batch, FunctionalSpec::riesz(beta));
}

std::vector<double> product_functional(const PathBatch& batch, const std::vector<double>& betas) {
  return potential_values(batch, FunctionalSpec::product(betas));
}

FunctionalSample evaluate_functional(const PathBatch& batch, const FunctionalSpec& spec) {
  const FunctionalEvaluator evaluator(batch.spec, batch.grid, spec);
  const std::size_t outputs = evaluator.outputs();
  RawResult result;
  result.raw.resize(batch.paths * outputs);
  result.stats.resize(batch.paths);
  parallel_for(batch.paths, [&](std::size_t p) {
    result.stats[p] = evaluator.evaluate(
        batch.path(p), std::span<double>(result.raw.data() + p * outputs, outputs));
  });
  return finish_sample(evaluator, batch.spec, batch.grid, batch.paths, std::move(result));
}

FunctionalSample evaluate_functional(const PathGenerator& generator, const FunctionalSpec& spec,
                                     std::size_t paths, std::vector<double>* sup_abs) {
  const FunctionalEvaluator evaluator(generator.spec(), generator.grid(), spec);
  const std::size_t outputs = evaluator.outputs();
  const std::size_t n = generator.grid().n;
  const std::size_t stride = generator.spec().dim * n;
  RawResult result;
  result.raw.resize(paths * outputs);
  result.stats.resize(paths);
  if (sup_abs != nullptr) sup_abs->assign(paths, 0.0);
  parallel_chunks(paths, [&](std::size_t, std::size_t begin, std::size_t end) {
    std::vector<double> path(stride);
    for (std::size_t p = begin; p < end; ++p) {
      generator.generate_path(p, path);
      result.stats[p] =
          evaluator.evaluate(path, std::span<double>(result.raw.data() + p * outputs, outputs));
      if (sup_abs != nullptr) {
        double sup = 0.0;
        for (std::size_t i = 0; i < n; ++i) sup = std::max(sup, std::abs(path[i]));
        (*sup_abs)[p] = sup;
      }
    }
  });
  return finish_sample(evaluator, generator.spec(), generator.grid(), paths, std::move(result));
}

FunctionalSample evaluate_functional(const PathGenerator& generator, const FunctionalSpec& spec,
                                     std::size_t paths) {
  return evaluate_functional(generator, spec, paths, nullptr);
}

ScalingCheck scaling_check(const ProcessSpec& process, const FunctionalSpec& spec, double a,
                           std::size_t paths, std::uint64_t seed, std::size_t n,
                           SamplerMethod method) {
  if (!(a > 0.0)) throw DomainError("scaling_check: a must be positive");
  spec.validate(process);
  const double alpha = process.self_similarity();
  ScalingCheck check;
  check.exponent = 1.0 - alpha * spec.effective_beta(process.dim);
  check.paths = paths;
  const auto unit = make_generator(process, UniformGrid{n, 1.0}, method,
                                   derive_seed(seed, StreamSalt::scaling_a, 0));
  FunctionalSample base = evaluate_functional(*unit, spec, paths);
  const double factor = std::pow(a, check.exponent);
  for (double& v : base.values) v *= factor;
  FunctionalSpec scaled_spec = spec;
  for (double& e : scaled_spec.eps) e *= std::pow(a, 2.0 * alpha);
  const auto stretched = make_generator(process, UniformGrid{n, a}, method,
                                        derive_seed(seed, StreamSalt::scaling_b, 0));
  const FunctionalSample other = evaluate_functional(*stretched, scaled_spec, paths);
  const KsResult ks = ks_two_sample(base.values, other.values);
  check.statistic = ks.statistic;
  check.p_value = ks.p_value;
  return check;
}

}  // namespace ssgauss
