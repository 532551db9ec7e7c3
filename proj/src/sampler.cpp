#include "ssgauss/sampler.hpp"

#include <fftw3.h>

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <mutex>
#include <sstream>

#include "ssgauss/errors.hpp"
#include "ssgauss/parallel.hpp"
#include "ssgauss/rng.hpp"

namespace ssgauss {

const char* to_string(SamplerMethod method) {
  switch (method) {
    case SamplerMethod::cholesky:
      return "cholesky";
    case SamplerMethod::circulant:
      return "circulant";
    case SamplerMethod::rl_kernel:
      return "rl-kernel";
    case SamplerMethod::decomposed:
      return "decomposed";
  }
  return "unknown";
}

SamplerMethod sampler_method_from_string(const std::string& name) {
  if (name == "cholesky") return SamplerMethod::cholesky;
  if (name == "circulant") return SamplerMethod::circulant;
  if (name == "rl-kernel" || name == "rl_kernel") return SamplerMethod::rl_kernel;
  if (name == "decomposed") return SamplerMethod::decomposed;
  throw ConfigError("sampler", "unknown sampler method '" + name + "'");
}

SamplerMethod default_method(const ProcessSpec& spec) {
  switch (spec.kind) {
    case ProcessKind::fbm:
    case ProcessKind::brownian:
      return SamplerMethod::circulant;
    case ProcessKind::riemann_liouville:
      return SamplerMethod::rl_kernel;
    case ProcessKind::subfbm:
      return spec.hurst < 0.5 ? SamplerMethod::decomposed : SamplerMethod::cholesky;
    case ProcessKind::bifbm:
    case ProcessKind::aux_y:
      return SamplerMethod::cholesky;
  }
  return SamplerMethod::cholesky;
}

std::vector<double> UniformGrid::times() const {
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = time(i);
  return t;
}

void UniformGrid::validate() const {
  if (n < 2) throw ConfigError("grid.n", "must be at least 2");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw ConfigError("grid.T", "must be positive and finite");
  }
}

void PathGenerator::generate_path(std::uint64_t path, std::span<double> out) const {
  const std::size_t n = grid_.n;
  for (std::size_t c = 0; c < spec_.dim; ++c) generate(path, c, out.subspan(c * n, n));
}

namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

bool is_power_of_two(std::size_t n) { return n >= 1 && (n & (n - 1)) == 0; }

// Scratch arrays with FFTW alignment, one per thread and element type.
template <typename T>
class AlignedScratch {
 public:
  ~AlignedScratch() {
    if (data_ != nullptr) fftw_free(data_);
  }
  T* get(std::size_t size) {
    if (size > size_) {
      if (data_ != nullptr) fftw_free(data_);
      data_ = static_cast<T*>(fftw_malloc(sizeof(T) * size));
      if (data_ == nullptr) throw NumericError("sampler: FFT buffer allocation failed");
      size_ = size;
    }
    return data_;
  }

 private:
  T* data_ = nullptr;
  std::size_t size_ = 0;
};

AlignedScratch<fftw_complex>& complex_scratch() {
  thread_local AlignedScratch<fftw_complex> s;
  return s;
}
AlignedScratch<double>& real_scratch() {
  thread_local AlignedScratch<double> s;
  return s;
}

// Independent increments: used for BM, fBm with H = 1/2 and RL with alpha = 1/2
// so that these coincide path by path.
class WhiteNoiseGenerator final : public PathGenerator {
 public:
  WhiteNoiseGenerator(const ProcessSpec& spec, const UniformGrid& grid, std::uint64_t seed,
                      SamplerMethod tag)
      : PathGenerator(spec, grid, seed) {
    report_.requested = tag;
    report_.used = tag;
  }

  void generate(std::uint64_t path, std::size_t component, std::span<double> out) const override {
    StreamRng rng(derive_seed(seed_, StreamSalt::white_noise, path, component));
    const double scale = std::sqrt(grid_.step());
    double x = 0.0;
    for (std::size_t i = 0; i < grid_.n; ++i) {
      x += scale * rng.normal();
      out[i] = x;
    }
  }
};

class CholeskyGenerator final : public PathGenerator {
 public:
  CholeskyGenerator(const ProcessSpec& spec, const UniformGrid& grid, std::uint64_t seed,
                    StreamSalt salt = StreamSalt::cholesky, double scale = 1.0)
      : PathGenerator(spec, grid, seed), salt_(salt), scale_(scale) {
    report_.requested = SamplerMethod::cholesky;
    report_.used = SamplerMethod::cholesky;
    const std::vector<double> times = grid.times();
    CovMatrix cm = build_cov_matrix(spec, times);
    const double max_diag = cm.values.diagonal().maxCoeff();
    Eigen::LLT<Eigen::MatrixXd> llt(cm.values);
    double jitter = 0.0;
    while (llt.info() != Eigen::Success) {
      jitter = jitter == 0.0 ? 1e-14 * max_diag : jitter * 10.0;
      if (jitter > 1e-8 * max_diag) {
        throw NumericError("sampler: Cholesky factorization of " + spec.name() +
                           " failed even with jitter; try a coarser grid");
      }
      Eigen::MatrixXd jittered = cm.values;
      jittered.diagonal().array() += jitter;
      llt.compute(jittered);
    }
    if (jitter > 0.0) {
      std::ostringstream os;
      os << "Cholesky jitter " << jitter << " added to the diagonal";
      report_.warnings.push_back(os.str());
    }
    report_.jitter = jitter;
    factor_ = llt.matrixL();
  }

  void generate(std::uint64_t path, std::size_t component, std::span<double> out) const override {
    StreamRng rng(derive_seed(seed_, salt_, path, component));
    const auto n = static_cast<Eigen::Index>(grid_.n);
    Eigen::VectorXd z(n);
    for (Eigen::Index i = 0; i < n; ++i) z(i) = rng.normal();
    Eigen::Map<Eigen::VectorXd> x(out.data(), n);
    x.noalias() = factor_.triangularView<Eigen::Lower>() * z;
    if (scale_ != 1.0) x *= scale_;
  }

 private:
  StreamSalt salt_;
  double scale_;
  Eigen::MatrixXd factor_;
};

// Davies-Harte circulant embedding of fractional Gaussian noise.
class CirculantGenerator final : public PathGenerator {
 public:
  CirculantGenerator(const ProcessSpec& spec, const UniformGrid& grid, std::uint64_t seed)
      : PathGenerator(spec, grid, seed) {
    report_.requested = SamplerMethod::circulant;
    report_.used = SamplerMethod::circulant;
    const std::size_t n = grid.n;
    if (!is_power_of_two(n)) {
      throw ConfigError("grid.n", "circulant sampler requires n to be a power of two");
    }
    const double h2 = 2.0 * spec.hurst;
    auto autocov = [h2](double k) {
      return 0.5 * (std::pow(std::abs(k + 1.0), h2) + std::pow(std::abs(k - 1.0), h2) -
                    2.0 * std::pow(std::abs(k), h2));
    };
    size_ = 2 * n;
    fftw_complex* row = fftw_alloc_complex(size_);
    {
      std::lock_guard<std::mutex> lock(fftw_planner_mutex());
      plan_ = fftw_plan_dft_1d(static_cast<int>(size_), row, row, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    for (std::size_t j = 0; j < size_; ++j) {
      const double k = static_cast<double>(j <= n ? j : size_ - j);
      row[j][0] = autocov(k);
      row[j][1] = 0.0;
    }
    fftw_execute(plan_);
    double max_eig = 0.0;
    double min_eig = 0.0;
    for (std::size_t j = 0; j < size_; ++j) {
      max_eig = std::max(max_eig, row[j][0]);
      min_eig = std::min(min_eig, row[j][0]);
    }
    report_.most_negative_eigenvalue = min_eig;
    if (min_eig < -1e-8 * max_eig) {
      fftw_free(row);
      report_.used = SamplerMethod::cholesky;
      report_.warnings.push_back("circulant embedding has a negative eigenvalue; using Cholesky");
      fallback_ = std::make_unique<CholeskyGenerator>(spec, grid, seed);
      return;
    }
    sqrt_eig_.resize(size_);
    for (std::size_t j = 0; j < size_; ++j) {
      double lambda = row[j][0];
      if (lambda < 0.0) {
        lambda = 0.0;
        ++report_.clipped_eigenvalues;
      }
      sqrt_eig_[j] = std::sqrt(lambda / static_cast<double>(size_));
    }
    if (report_.clipped_eigenvalues > 0) {
      report_.warnings.push_back(std::to_string(report_.clipped_eigenvalues) +
                                 " small negative circulant eigenvalues clipped to zero");
    }
    fftw_free(row);
    increment_scale_ = std::pow(grid.step(), spec.hurst);
  }

  ~CirculantGenerator() override {
    if (plan_ != nullptr) {
      std::lock_guard<std::mutex> lock(fftw_planner_mutex());
      fftw_destroy_plan(plan_);
    }
  }

  void generate(std::uint64_t path, std::size_t component, std::span<double> out) const override {
    if (fallback_) {
      fallback_->generate(path, component, out);
      return;
    }
    StreamRng rng(derive_seed(seed_, StreamSalt::fbm_noise, path, component));
    fftw_complex* buf = complex_scratch().get(size_);
    for (std::size_t j = 0; j < size_; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      buf[j][0] = sqrt_eig_[j] * re;
      buf[j][1] = sqrt_eig_[j] * im;
    }
    fftw_execute_dft(plan_, buf, buf);
    double x = 0.0;
    for (std::size_t i = 0; i < grid_.n; ++i) {
      x += increment_scale_ * buf[i][0];
      out[i] = x;
    }
  }

 private:
  std::size_t size_ = 0;
  fftw_plan plan_ = nullptr;
  std::vector<double> sqrt_eig_;
  double increment_scale_ = 1.0;
  std::unique_ptr<CholeskyGenerator> fallback_;
};

class RlKernelGenerator final : public PathGenerator {
 public:
  RlKernelGenerator(const ProcessSpec& spec, const UniformGrid& grid, std::uint64_t seed)
      : PathGenerator(spec, grid, seed) {
    report_.requested = SamplerMethod::rl_kernel;
    report_.used = SamplerMethod::rl_kernel;
    const std::size_t n = grid.n;
    size_ = 1;
    while (size_ < 2 * n) size_ *= 2;
    spectrum_size_ = size_ / 2 + 1;
    const std::vector<double> w = rl_kernel_weights(spec.alpha, n, grid.horizon);
    double* real = fftw_alloc_real(size_);
    fftw_complex* spec_buf = fftw_alloc_complex(spectrum_size_);
    {
      std::lock_guard<std::mutex> lock(fftw_planner_mutex());
      forward_ = fftw_plan_dft_r2c_1d(static_cast<int>(size_), real, spec_buf, FFTW_ESTIMATE);
      double* real_out = fftw_alloc_real(size_);
      fftw_complex* spec_in = fftw_alloc_complex(spectrum_size_);
      backward_ =
          fftw_plan_dft_c2r_1d(static_cast<int>(size_), spec_in, real_out, FFTW_ESTIMATE);
      fftw_free(real_out);
      fftw_free(spec_in);
    }
    for (std::size_t j = 0; j < size_; ++j) real[j] = j < n ? w[j] : 0.0;
    fftw_execute(forward_);
    kernel_spectrum_.resize(2 * spectrum_size_);
    for (std::size_t j = 0; j < spectrum_size_; ++j) {
      kernel_spectrum_[2 * j] = spec_buf[j][0] / static_cast<double>(size_);
      kernel_spectrum_[2 * j + 1] = spec_buf[j][1] / static_cast<double>(size_);
    }
    fftw_free(real);
    fftw_free(spec_buf);
  }

  ~RlKernelGenerator() override {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }

  void generate(std::uint64_t path, std::size_t component, std::span<double> out) const override {
    StreamRng rng(derive_seed(seed_, StreamSalt::white_noise, path, component));
    double* real = real_scratch().get(size_);
    fftw_complex* spectrum = complex_scratch().get(spectrum_size_);
    const std::size_t n = grid_.n;
    for (std::size_t j = 0; j < size_; ++j) real[j] = j < n ? rng.normal() : 0.0;
    fftw_execute_dft_r2c(forward_, real, spectrum);
    for (std::size_t j = 0; j < spectrum_size_; ++j) {
      const double ar = spectrum[j][0];
      const double ai = spectrum[j][1];
      const double br = kernel_spectrum_[2 * j];
      const double bi = kernel_spectrum_[2 * j + 1];
      spectrum[j][0] = ar * br - ai * bi;
      spectrum[j][1] = ar * bi + ai * br;
    }
    fftw_execute_dft_c2r(backward_, spectrum, real);
    for (std::size_t i = 0; i < n; ++i) out[i] = real[i];
  }

 private:
  std::size_t size_ = 0;
  std::size_t spectrum_size_ = 0;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
  std::vector<double> kernel_spectrum_;
};

class DecomposedSubFbmGenerator final : public PathGenerator {
 public:
  DecomposedSubFbmGenerator(const ProcessSpec& spec, const UniformGrid& grid, std::uint64_t seed)
      : PathGenerator(spec, grid, seed) {
    report_.requested = SamplerMethod::decomposed;
    report_.used = SamplerMethod::decomposed;
    const ProcessSpec fbm = ProcessSpec::fbm(spec.hurst, spec.dim);
    if (is_power_of_two(grid.n)) {
      fbm_ = std::make_unique<CirculantGenerator>(fbm, grid, seed);
    } else {
      fbm_ = std::make_unique<CholeskyGenerator>(fbm, grid, seed, StreamSalt::fbm_noise);
    }
    aux_ = std::make_unique<CholeskyGenerator>(ProcessSpec::aux_y(spec.hurst, spec.dim), grid, seed,
                                               StreamSalt::aux_y,
                                               subfbm_decomposition_scale(spec.hurst));
    for (const auto* part : {fbm_.get(), aux_.get()}) {
      for (const auto& w : part->report().warnings) report_.warnings.push_back(w);
    }
  }

  void generate(std::uint64_t path, std::size_t component, std::span<double> out) const override {
    fbm_->generate(path, component, out);
    thread_local std::vector<double> aux;
    aux.resize(grid_.n);
    aux_->generate(path, component, aux);
    for (std::size_t i = 0; i < grid_.n; ++i) out[i] += aux[i];
  }

 private:
  std::unique_ptr<PathGenerator> fbm_;
  std::unique_ptr<PathGenerator> aux_;
};

}  // namespace

std::unique_ptr<PathGenerator> make_generator(const ProcessSpec& spec, const UniformGrid& grid,
                                              SamplerMethod method, std::uint64_t seed) {
  spec.validate();
  grid.validate();
  switch (method) {
    case SamplerMethod::cholesky:
      return std::make_unique<CholeskyGenerator>(spec, grid, seed);
    case SamplerMethod::circulant:
      if (spec.kind == ProcessKind::brownian ||
          (spec.kind == ProcessKind::fbm && spec.hurst == 0.5)) {
        if (!is_power_of_two(grid.n)) {
          throw ConfigError("grid.n", "circulant sampler requires n to be a power of two");
        }
        return std::make_unique<WhiteNoiseGenerator>(spec, grid, seed, SamplerMethod::circulant);
      }
      if (spec.kind != ProcessKind::fbm) {
        throw ConfigError("sampler", "circulant sampler supports fbm and bm only");
      }
      return std::make_unique<CirculantGenerator>(spec, grid, seed);
    case SamplerMethod::rl_kernel:
      if (spec.kind != ProcessKind::riemann_liouville) {
        throw ConfigError("sampler", "rl-kernel sampler supports rl only");
      }
      if (spec.alpha == 0.5) {
        return std::make_unique<WhiteNoiseGenerator>(spec, grid, seed, SamplerMethod::rl_kernel);
      }
      return std::make_unique<RlKernelGenerator>(spec, grid, seed);
    case SamplerMethod::decomposed:
      if (spec.kind != ProcessKind::subfbm || !(spec.hurst < 0.5)) {
        throw ConfigError("sampler", "decomposed sampler supports subfbm with H < 1/2 only");
      }
      return std::make_unique<DecomposedSubFbmGenerator>(spec, grid, seed);
  }
  throw ConfigError("sampler", "unknown method");
}

PathBatch sample_batch(const PathGenerator& generator, std::size_t paths) {
  PathBatch batch;
  batch.spec = generator.spec();
  batch.grid = generator.grid();
  batch.method = generator.report().used;
  batch.seed = generator.seed();
  batch.paths = paths;
  batch.report = generator.report();
  const std::size_t stride = batch.spec.dim * batch.grid.n;
  batch.values.assign(paths * stride, 0.0);
  parallel_for(paths, [&](std::size_t p) {
    generator.generate_path(p, std::span<double>(batch.values.data() + p * stride, stride));
  });
  return batch;
}

PathBatch sample_cholesky(const ProcessSpec& spec, const UniformGrid& grid, std::size_t paths,
                          std::uint64_t seed) {
  return sample_batch(*make_generator(spec, grid, SamplerMethod::cholesky, seed), paths);
}

PathBatch sample_fbm_circulant(double hurst, std::size_t n, double horizon, std::size_t paths,
                               std::uint64_t seed, std::size_t dim) {
  return sample_batch(*make_generator(ProcessSpec::fbm(hurst, dim), UniformGrid{n, horizon},
                                      SamplerMethod::circulant, seed),
                      paths);
}

PathBatch sample_rl_kernel(double alpha, std::size_t n, double horizon, std::size_t paths,
                           std::uint64_t seed, std::size_t dim) {
  return sample_batch(*make_generator(ProcessSpec::riemann_liouville(alpha, dim),
                                      UniformGrid{n, horizon}, SamplerMethod::rl_kernel, seed),
                      paths);
}

PathBatch sample_subfbm_decomposed(double hurst, const UniformGrid& grid, std::size_t paths,
                                   std::uint64_t seed, std::size_t dim) {
  return sample_batch(
      *make_generator(ProcessSpec::subfbm(hurst, dim), grid, SamplerMethod::decomposed, seed),
      paths);
}

std::vector<double> rl_kernel_weights(double alpha, std::size_t n, double horizon) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("rl_kernel_weights: alpha in (0, 1)");
  const double step = horizon / static_cast<double>(n);
  const double e = 2.0 * alpha;
  const double base = std::pow(step, e) / e;
  std::vector<double> w(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double mm = static_cast<double>(m);
    // (m+1)^{2a} - m^{2a} without cancellation for large m.
    const double diff = m == 0 ? 1.0 : std::pow(mm, e) * std::expm1(e * std::log1p(1.0 / mm));
    w[m] = std::sqrt(base * diff);
  }
  return w;
}

Eigen::MatrixXd rl_kernel_implied_covariance(double alpha, std::size_t n, double horizon) {
  const std::vector<double> w = rl_kernel_weights(alpha, n, horizon);
  const auto nn = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd cov(nn, nn);
  for (Eigen::Index j = 0; j < nn; ++j) {
    for (Eigen::Index l = 0; l <= j; ++l) {
      double sum = 0.0;
      for (Eigen::Index i = 0; i <= l; ++i) {
        sum += w[static_cast<std::size_t>(j - i)] * w[static_cast<std::size_t>(l - i)];
      }
      cov(j, l) = sum;
      cov(l, j) = sum;
    }
  }
  return cov;
}

double subfbm_decomposition_scale(double hurst) {
  if (!(hurst > 0.0 && hurst < 0.5)) throw DomainError("sub-fBm decomposition needs H < 1/2");
  return std::sqrt(hurst * (1.0 - 2.0 * hurst) / boost::math::tgamma(2.0 - 2.0 * hurst));
}

}  // namespace ssgauss
