// Command-line front end: simulate, functional, moments, constants,
// tail-fit, small-ball, verify.

#include <CLI11.hpp>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ssgauss/errors.hpp"
#include "ssgauss/functionals.hpp"
#include "ssgauss/json_io.hpp"
#include "ssgauss/ldp.hpp"
#include "ssgauss/mc.hpp"
#include "ssgauss/moments.hpp"
#include "ssgauss/parallel.hpp"
#include "ssgauss/path_io.hpp"
#include "ssgauss/sampler.hpp"
#include "ssgauss/verify.hpp"
#include "ssgauss/version.hpp"

using namespace ssgauss;

namespace {

enum Exit { kOk = 0, kVerifyFailed = 1, kConfigError = 2, kNumericError = 3 };

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::string out;
  std::string format = "json";
  std::string input;
  std::string suite = "all";
};

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << v;
  return os.str();
}

// Effective configuration: the file with command-line overrides applied.
Json load_config(const Common& c) {
  Json cfg = Json::object();
  if (!c.config_path.empty()) {
    std::ifstream in(c.config_path);
    if (!in) throw ConfigError("--config", "cannot open '" + c.config_path + "'");
    try {
      cfg = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
    }
    if (!cfg.is_object()) throw ConfigError("--config", "top level must be an object");
  }
  if (c.seed) cfg["seed"] = *c.seed;
  return cfg;
}

std::string config_hash(const Json& cfg) { return hex(fnv1a64(cfg.dump())); }

ProcessSpec process_of(const Json& cfg) {
  if (!cfg.contains("process")) throw ConfigError("process", "missing");
  return process_from_json(cfg.at("process"));
}

UniformGrid grid_of(const Json& cfg) {
  return cfg.contains("grid") ? grid_from_json(cfg.at("grid")) : UniformGrid{};
}

FunctionalSpec functional_of(const Json& cfg) {
  if (!cfg.contains("functional")) throw ConfigError("functional", "missing");
  return functional_from_json(cfg.at("functional"));
}

std::uint64_t seed_of(const Json& cfg) {
  if (!cfg.contains("seed")) return 0;
  if (!cfg.at("seed").is_number_unsigned()) throw ConfigError("seed", "must be a non-negative integer");
  return cfg.at("seed").get<std::uint64_t>();
}

std::size_t count_of(const Json& cfg, const char* key, std::size_t fallback) {
  if (!cfg.contains(key)) return fallback;
  const Json& v = cfg.at(key);
  if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0)
    throw ConfigError(key, "must be a positive integer");
  return v.get<std::size_t>();
}

SamplerMethod method_of(const Json& cfg, const ProcessSpec& spec) {
  if (!cfg.contains("sampler")) return default_method(spec);
  if (!cfg.at("sampler").is_string()) throw ConfigError("sampler", "must be a string");
  return sampler_method_from_string(cfg.at("sampler").get<std::string>());
}

const Json& section(const Json& cfg, const char* key) {
  static const Json empty = Json::object();
  if (!cfg.contains(key)) return empty;
  if (!cfg.at(key).is_object()) throw ConfigError(key, "must be an object");
  return cfg.at(key);
}

double number_or(const Json& j, const char* key, double fallback, const std::string& field) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ConfigError(field, "must be a number");
  return j.at(key).get<double>();
}

bool bool_or(const Json& j, const char* key, bool fallback, const std::string& field) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) throw ConfigError(field, "must be a boolean");
  return j.at(key).get<bool>();
}

void stamp(Json& j, const Json& cfg) {
  j["config_hash"] = config_hash(cfg);
  j["version"] = std::string(kLibraryVersion);
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.out, std::ios::binary);
  if (!out) throw ConfigError("--out", "cannot open '" + c.out + "'");
  out << text;
}

void emit_json(const Common& c, const Json& j) { emit(c, j.dump(2) + "\n"); }

std::string csv_banner(const Json& cfg) {
  return "# ssgauss " + std::string(kLibraryVersion) + " config_hash=" + config_hash(cfg) + "\n";
}

void require_format(const Common& c) {
  if (c.format != "json" && c.format != "csv") throw ConfigError("--format", "must be csv or json");
}

// ---------------------------------------------------------------- commands

int cmd_simulate(const Common& c) {
  const Json cfg = load_config(c);
  const ProcessSpec spec = process_of(cfg);
  const UniformGrid grid = grid_of(cfg);
  const std::size_t paths = count_of(cfg, "paths", 1000);
  const SamplerMethod method = method_of(cfg, spec);
  if (c.out.empty()) throw ConfigError("--out", "simulate writes a binary file and needs --out");
  const auto gen = make_generator(spec, grid, method, seed_of(cfg));
  const PathBatch batch = sample_batch(*gen, paths);
  write_path_batch(c.out, batch, config_hash(cfg));
  for (const auto& w : batch.report.warnings) std::cerr << "warning: " << w << "\n";
  return kOk;
}

FunctionalSample functional_sample(const Json& cfg, const std::string& input) {
  const FunctionalSpec spec = functional_of(cfg);
  if (!input.empty()) {
    const PathBatch batch = read_path_batch(input);
    spec.validate(batch.spec);
    return evaluate_functional(batch, spec);
  }
  const ProcessSpec process = process_of(cfg);
  spec.validate(process);
  const auto gen = make_generator(process, grid_of(cfg), method_of(cfg, process), seed_of(cfg));
  return evaluate_functional(*gen, spec, count_of(cfg, "paths", 1000));
}

Json diagnostics_json(const FunctionalSample& s) {
  const FunctionalDiagnostics& d = s.diagnostics;
  Json j;
  j["process"] = process_to_json(s.process);
  j["grid"] = grid_to_json(s.grid);
  j["functional"] = functional_to_json(s.spec);
  j["eps"] = s.eps;
  j["max_integrand"] = d.max_integrand;
  j["near_singular_fraction"] = d.near_singular_fraction;
  j["zero_cells"] = d.zero_cells;
  j["below_eps_floor"] = d.below_eps_floor;
  j["extrapolation_order"] = d.extrapolation_order;
  j["extrapolation_fallbacks"] = d.extrapolation_fallbacks;
  j["discretization_error"] = d.discretization_error;
  j["warnings"] = d.warnings;
  return j;
}

int cmd_functional(const Common& c) {
  require_format(c);
  const Json cfg = load_config(c);
  const FunctionalSample s = functional_sample(cfg, c.input.empty() ? cfg.value("input", "") : c.input);
  Json diag = diagnostics_json(s);
  stamp(diag, cfg);
  if (c.format == "json") {
    Json j = diag;
    j["values"] = s.values;
    if (!s.errors.empty()) j["errors"] = s.errors;
    emit_json(c, j);
    return kOk;
  }
  std::string csv = csv_banner(cfg);
  const bool delta = s.spec.kind == FunctionalKind::delta;
  csv += delta ? "path,value,error" : "path,value";
  for (double e : s.eps) csv += ",eps=" + fmt(e);
  csv += "\n";
  const std::size_t levels = s.eps.size();
  for (std::size_t p = 0; p < s.values.size(); ++p) {
    csv += std::to_string(p) + "," + fmt(s.values[p]);
    if (delta) csv += "," + fmt(s.errors[p]);
    for (std::size_t k = 0; k < levels; ++k) csv += "," + fmt(s.per_eps[p * levels + k]);
    csv += "\n";
  }
  emit(c, csv);
  if (!c.out.empty()) {
    std::ofstream side(c.out + ".diag.json");
    side << diag.dump(2) << "\n";
  }
  return kOk;
}

int cmd_moments(const Common& c) {
  require_format(c);
  const Json cfg = load_config(c);
  const ProcessSpec spec = process_of(cfg);
  const Json& opts = section(cfg, "moments");
  const auto max_m = static_cast<std::size_t>(number_or(opts, "max_m", 2, "moments.max_m"));
  if (max_m < 1 || max_m > 3) throw ConfigError("moments.max_m", "must lie in [1, 3]");
  Json rows = Json::array();
  std::string csv = csv_banner(cfg) + "m,exact,exact_error,exp_time,exp_time_error\n";
  for (std::size_t m = 1; m <= max_m; ++m) {
    const QuadratureValue ex = exact_delta_moment(spec, m);
    const QuadratureValue et = exp_time_moment(spec, m);
    rows.push_back({{"m", m}, {"exact", ex.value}, {"exact_error", ex.error},
                    {"exp_time", et.value}, {"exp_time_error", et.error}});
    csv += std::to_string(m) + "," + fmt(ex.value) + "," + fmt(ex.error) + "," + fmt(et.value) + "," +
           fmt(et.error) + "\n";
  }
  if (c.format == "csv") {
    emit(c, csv);
    return kOk;
  }
  Json j;
  j["process"] = process_to_json(spec);
  j["moments"] = rows;
  if (max_m >= 2) {
    const auto slack = subadditivity_check(spec, {{1, 1}}).front();
    j["subadditivity_slack_1_1"] = slack.slack;
  }
  stamp(j, cfg);
  emit_json(c, j);
  return kOk;
}

int cmd_constants(const Common& c) {
  const Json cfg = load_config(c);
  const ProcessSpec spec = process_of(cfg);
  const FunctionalSpec functional = functional_of(cfg);
  const RateConstants rc = rate_constants(spec, functional);
  Json j;
  j["process"] = process_to_json(spec);
  j["functional"] = functional_to_json(functional);
  j["constants"] = rate_constants_to_json(rc);
  if (spec.kind == ProcessKind::bifbm) {
    const BifbmPrefactors pf = bifbm_prefactors(spec.hurst, spec.k, functional.effective_beta(spec.dim));
    j["bifbm_prefactors"] = {{"mgf", pf.mgf}, {"tail", pf.tail}};
  }
  j["integrability"] = {{"critical_p", rc.critical_p()},
                        {"below_critical_p", "finite for all lambda"},
                        {"above_critical_p", "infinite for all lambda"},
                        {"critical_lambda", rc.c ? Json(*rc.c) : Json(nullptr)},
                        {"critical_lambda_bounds", rc.c_bounds ? Json::array({rc.c_bounds->first,
                                                                              rc.c_bounds->second})
                                                               : Json(nullptr)}};
  stamp(j, cfg);
  emit_json(c, j);
  return kOk;
}

std::vector<double> read_value_column(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--input", "cannot open '" + path + "'");
  std::vector<double> out;
  std::string line;
  int column = -1;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (column < 0) {
      // Header row: pick the "value" column, or the only column.
      for (std::size_t i = 0; i < cells.size(); ++i)
        if (cells[i] == "value") column = static_cast<int>(i);
      if (column >= 0) continue;
      column = 0;
    }
    if (static_cast<std::size_t>(column) >= cells.size()) throw ConfigError("--input", "ragged CSV");
    double v = 0.0;
    const std::string& cell = cells[static_cast<std::size_t>(column)];
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc()) throw ConfigError("--input", "non-numeric value '" + cell + "'");
    out.push_back(v);
  }
  return out;
}

int cmd_tail_fit(const Common& c) {
  require_format(c);
  const Json cfg = load_config(c);
  const Json& opts = section(cfg, "tail");
  std::vector<double> samples;
  double exponent = number_or(opts, "exponent", 0.0, "tail.exponent");
  const std::string input = c.input.empty() ? cfg.value("input", "") : c.input;
  if (!input.empty()) {
    samples = read_value_column(input);
  } else {
    samples = functional_sample(cfg, "").values;
  }
  if (exponent <= 0.0) {
    const ProcessSpec spec = process_of(cfg);
    const FunctionalSpec f = functional_of(cfg);
    exponent = 1.0 / (spec.self_similarity() * f.effective_beta(spec.dim));
  }
  TailFitOptions to;
  to.model = opts.contains("model") ? tail_model_from_string(opts.value("model", "")) : to.model;
  to.free_exponent = bool_or(opts, "free", false, "tail.free");
  to.q_lo = number_or(opts, "q_lo", to.q_lo, "tail.q_lo");
  to.q_hi = number_or(opts, "q_hi", to.q_hi, "tail.q_hi");
  to.bootstrap = static_cast<std::size_t>(number_or(opts, "bootstrap", 200, "tail.bootstrap"));
  to.seed = seed_of(cfg);
  if (!(to.q_lo > 0.0 && to.q_lo < to.q_hi && to.q_hi < 1.0))
    throw ConfigError("tail.q_lo", "need 0 < q_lo < q_hi < 1");
  if (c.format == "csv") {
    std::string csv = csv_banner(cfg) + "x,log_survival\n";
    for (const auto& [x, y] : tail_curve(samples, to.q_lo, to.q_hi)) csv += fmt(x) + "," + fmt(y) + "\n";
    emit(c, csv);
    return kOk;
  }
  Json j;
  j["fit"] = tail_fit_to_json(tail_fit(samples, exponent, to));
  j["theoretical_exponent"] = exponent;
  stamp(j, cfg);
  emit_json(c, j);
  return kOk;
}

int cmd_small_ball(const Common& c) {
  require_format(c);
  const Json cfg = load_config(c);
  const ProcessSpec spec = process_of(cfg);
  const UniformGrid grid = grid_of(cfg);
  const Json& opts = section(cfg, "small_ball");
  SmallBallOptions so;
  if (opts.contains("eps")) {
    if (!opts.at("eps").is_array()) throw ConfigError("small_ball.eps", "must be an array");
    for (const Json& v : opts.at("eps")) {
      if (!v.is_number() || !(v.get<double>() > 0.0))
        throw ConfigError("small_ball.eps", "values must be positive numbers");
      so.eps.push_back(v.get<double>());
    }
  }
  if (opts.contains("fixed_exponent"))
    so.fixed_exponent = number_or(opts, "fixed_exponent", 0.0, "small_ball.fixed_exponent");
  so.seed = seed_of(cfg);
  const SmallBallFit fit =
      small_ball_fit(spec, grid, method_of(cfg, spec), count_of(cfg, "paths", 100000), so.seed, so);
  if (c.format == "csv") {
    std::string csv = csv_banner(cfg) + "eps,probability\n";
    for (std::size_t i = 0; i < fit.eps.size(); ++i)
      csv += fmt(fit.eps[i]) + "," + fmt(fit.probabilities[i]) + "\n";
    emit(c, csv);
    return kOk;
  }
  Json j;
  j["process"] = process_to_json(spec);
  j["fit"] = small_ball_to_json(fit);
  stamp(j, cfg);
  emit_json(c, j);
  return kOk;
}

int cmd_verify(const Common& c) {
  const Json cfg = load_config(c);
  VerifyOptions vo;
  if (cfg.contains("seed")) vo.seed = seed_of(cfg);
  const std::vector<SuiteReport> reports = run_suite(c.suite, vo);
  Json j;
  j["suite"] = c.suite;
  Json arr = Json::array();
  bool pass = true;
  for (const auto& r : reports) {
    arr.push_back(r.to_json());
    pass = pass && r.pass();
    for (const auto& chk : r.checks)
      std::cerr << (chk.pass ? "PASS " : "FAIL ") << chk.criterion << " " << chk.name << "\n";
  }
  j["reports"] = arr;
  j["pass"] = pass;
  stamp(j, cfg);
  emit_json(c, j);
  return pass ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-similar Gaussian process toolkit"};
  app.set_version_flag("--version", std::string(kLibraryVersion));
  app.require_subcommand(1);
  Common c;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", c.config_path, "JSON configuration file");
    sub->add_option("--seed", c.seed, "Master seed (overrides the config)");
    sub->add_option("--threads", c.threads, "Worker threads (results do not depend on it)");
    sub->add_option("--out", c.out, "Output file (stdout when omitted)");
    sub->add_option("--format", c.format, "csv or json");
  };
  struct Entry {
    const char* name;
    const char* help;
    int (*run)(const Common&);
  };
  const Entry entries[] = {
      {"simulate", "Sample paths to a binary batch file", cmd_simulate},
      {"functional", "Evaluate a functional on a batch file or streamed paths", cmd_functional},
      {"moments", "Exact moments of the mollified local time", cmd_moments},
      {"constants", "Large-deviation constants and integrability thresholds", cmd_constants},
      {"tail-fit", "Fit the upper tail of a functional", cmd_tail_fit},
      {"small-ball", "Fit small-ball probabilities", cmd_small_ball},
      {"verify", "Run acceptance suites", cmd_verify},
  };
  std::vector<std::pair<CLI::App*, int (*)(const Common&)>> subs;
  for (const Entry& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    add_common(sub);
    if (std::string(e.name) == "functional" || std::string(e.name) == "tail-fit")
      sub->add_option("--input", c.input, "Input batch (functional) or CSV (tail-fit)");
    if (std::string(e.name) == "verify")
      sub->add_option("suite", c.suite, "identities|moments|scaling|tails|smallball|constants|all");
    subs.emplace_back(sub, e.run);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (c.threads) {
      if (*c.threads == 0) throw ConfigError("--threads", "must be positive");
      set_thread_count(*c.threads);
    }
    for (const auto& [sub, run] : subs)
      if (sub->parsed()) return run(c);
  } catch (const ConfigError& e) {
    std::cerr << "config error [" << e.field() << "]: " << e.what() << "\n";
    return kConfigError;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kConfigError;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kNumericError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericError;
  }
  return kConfigError;
}
