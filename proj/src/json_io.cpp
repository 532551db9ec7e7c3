#include "ssgauss/json_io.hpp"

#include "ssgauss/errors.hpp"

namespace ssgauss {

namespace {

double number_field(const Json& j, const char* key, double fallback, const std::string& prefix) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(prefix + key, "must be a number");
  return v.get<double>();
}

}  // namespace

Json process_to_json(const ProcessSpec& spec) {
  Json j;
  j["kind"] = to_string(spec.kind);
  switch (spec.kind) {
    case ProcessKind::fbm:
    case ProcessKind::subfbm:
      j["H"] = spec.hurst;
      break;
    case ProcessKind::bifbm:
      j["H"] = spec.hurst;
      j["K"] = spec.k;
      break;
    case ProcessKind::riemann_liouville:
    case ProcessKind::aux_y:
      j["alpha"] = spec.alpha;
      break;
    case ProcessKind::brownian:
      break;
  }
  j["dim"] = spec.dim;
  return j;
}

ProcessSpec process_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("process", "must be an object");
  if (!j.contains("kind") || !j.at("kind").is_string()) {
    throw ConfigError("process.kind", "missing or not a string");
  }
  ProcessSpec spec;
  spec.kind = process_kind_from_string(j.at("kind").get<std::string>());
  spec.hurst = number_field(j, "H", 0.5, "process.");
  spec.k = number_field(j, "K", 1.0, "process.");
  spec.alpha = number_field(j, "alpha", 0.5, "process.");
  if (j.contains("dim")) {
    const Json& d = j.at("dim");
    if (!d.is_number_integer() || d.get<long long>() < 1) {
      throw ConfigError("process.dim", "must be a positive integer");
    }
    spec.dim = d.get<std::size_t>();
  }
  spec.validate();
  return spec;
}

Json grid_to_json(const UniformGrid& grid) {
  Json j;
  j["n"] = grid.n;
  j["T"] = grid.horizon;
  return j;
}

UniformGrid grid_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("grid", "must be an object");
  UniformGrid grid;
  if (j.contains("n")) {
    const Json& n = j.at("n");
    if (!n.is_number_integer() || n.get<long long>() < 2) {
      throw ConfigError("grid.n", "must be an integer >= 2");
    }
    grid.n = n.get<std::size_t>();
  }
  grid.horizon = number_field(j, "T", 1.0, "grid.");
  grid.validate();
  return grid;
}

Json sampler_report_to_json(const SamplerReport& report) {
  Json j;
  j["requested"] = to_string(report.requested);
  j["used"] = to_string(report.used);
  j["jitter"] = report.jitter;
  j["clipped_eigenvalues"] = report.clipped_eigenvalues;
  j["warnings"] = report.warnings;
  return j;
}

namespace {

Json optional_pair(const std::optional<std::pair<double, double>>& v) {
  if (!v) return nullptr;
  return Json::array({v->first, v->second});
}

std::vector<double> number_list(const Json& j, const std::string& field) {
  if (!j.is_array()) throw ConfigError(field, "must be an array of numbers");
  std::vector<double> out;
  for (const Json& v : j) {
    if (!v.is_number()) throw ConfigError(field, "must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

Json functional_to_json(const FunctionalSpec& spec) {
  Json j;
  j["kind"] = to_string(spec.kind);
  switch (spec.kind) {
    case FunctionalKind::delta:
      j["eps"] = spec.eps;
      j["extrapolation"] = to_string(spec.extrapolation);
      break;
    case FunctionalKind::riesz:
      j["beta"] = spec.beta;
      break;
    case FunctionalKind::product:
      j["betas"] = spec.betas;
      break;
  }
  return j;
}

FunctionalSpec functional_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("functional", "must be an object");
  if (!j.contains("kind") || !j.at("kind").is_string())
    throw ConfigError("functional.kind", "missing or not a string");
  const FunctionalKind kind = functional_kind_from_string(j.at("kind").get<std::string>());
  switch (kind) {
    case FunctionalKind::delta: {
      FunctionalSpec f = FunctionalSpec::delta(
          j.contains("eps") ? number_list(j.at("eps"), "functional.eps") : std::vector<double>{});
      if (j.contains("extrapolation")) {
        if (!j.at("extrapolation").is_string())
          throw ConfigError("functional.extrapolation", "must be a string");
        f.extrapolation = extrapolation_mode_from_string(j.at("extrapolation").get<std::string>());
      }
      return f;
    }
    case FunctionalKind::riesz:
      if (!j.contains("beta")) throw ConfigError("functional.beta", "required for riesz");
      return FunctionalSpec::riesz(number_field(j, "beta", 0.0, "functional."));
    case FunctionalKind::product:
      if (!j.contains("betas")) throw ConfigError("functional.betas", "required for product");
      return FunctionalSpec::product(number_list(j.at("betas"), "functional.betas"));
  }
  throw ConfigError("functional.kind", "unsupported");
}

Json rate_constants_to_json(const RateConstants& rc) {
  Json j;
  j["ab"] = rc.ab;
  j["critical_p"] = rc.critical_p();
  j["e1"] = rc.e1 ? Json(*rc.e1) : Json(nullptr);
  j["c"] = rc.c ? Json(*rc.c) : Json(nullptr);
  j["c_bounds"] = optional_pair(rc.c_bounds);
  j["e1_bounds"] = optional_pair(rc.e1_bounds);
  j["provenance"] = to_string(rc.provenance);
  j["source"] = rc.source;
  j["note"] = rc.note;
  return j;
}

Json tail_fit_to_json(const TailFit& fit) {
  Json j;
  j["model"] = to_string(fit.model);
  j["free_exponent"] = fit.free_exponent;
  j["p"] = fit.p;
  j["c"] = fit.c;
  j["intercept"] = fit.intercept;
  j["x_range"] = Json::array({fit.x_lo, fit.x_hi});
  j["c_ci"] = optional_pair(fit.c_ci);
  j["p_ci"] = optional_pair(fit.p_ci);
  j["n"] = fit.n;
  j["tail_points"] = fit.tail_points;
  j["levels"] = fit.levels;
  j["residual"] = fit.residual;
  Json sens = Json::array();
  for (const auto& w : fit.sensitivity)
    sens.push_back({{"q_lo", w.q_lo}, {"q_hi", w.q_hi}, {"c", w.c}, {"p", w.p}});
  j["sensitivity"] = sens;
  j["warnings"] = fit.warnings;
  return j;
}

Json small_ball_to_json(const SmallBallFit& fit) {
  Json j;
  j["free_exponent"] = fit.free_exponent;
  j["exponent"] = fit.exponent;
  j["c0"] = fit.c0;
  j["intercept"] = fit.intercept;
  j["exponent_ci"] = optional_pair(fit.exponent_ci);
  j["c0_ci"] = optional_pair(fit.c0_ci);
  j["eps"] = fit.eps;
  j["probabilities"] = fit.probabilities;
  j["n"] = fit.n;
  j["warnings"] = fit.warnings;
  return j;
}

Json moment_limit_to_json(const MomentLimit& ml) {
  Json j;
  j["a_m"] = ml.a_m;
  j["a_m_se"] = ml.a_m_se;
  j["m_requested"] = ml.m_requested;
  j["m_used"] = ml.m_used;
  j["a"] = ml.a;
  j["a_se"] = ml.a_se;
  j["a_ci"] = optional_pair(ml.a_ci);
  j["monotone"] = ml.monotone;
  j["last_step"] = ml.last_step;
  j["bridged_c"] = ml.bridged_c;
  j["bridged_c_ci"] = optional_pair(ml.bridged_c_ci);
  j["warnings"] = ml.warnings;
  return j;
}

}  // namespace ssgauss
