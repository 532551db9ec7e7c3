#pragma once

#include <json.hpp>

#include "ssgauss/covariance.hpp"
#include "ssgauss/functionals.hpp"
#include "ssgauss/ldp.hpp"
#include "ssgauss/mc.hpp"
#include "ssgauss/sampler.hpp"

namespace ssgauss {

using Json = nlohmann::ordered_json;

Json process_to_json(const ProcessSpec& spec);

/// Reads {kind, H, K, alpha, dim}; missing parameters take their defaults.
/// Throws ConfigError naming the field on malformed input.
ProcessSpec process_from_json(const Json& j);

Json grid_to_json(const UniformGrid& grid);
UniformGrid grid_from_json(const Json& j);

Json sampler_report_to_json(const SamplerReport& report);

Json functional_to_json(const FunctionalSpec& spec);

/// Reads {kind, eps, beta, betas}.  Throws ConfigError naming the field.
FunctionalSpec functional_from_json(const Json& j);

Json rate_constants_to_json(const RateConstants& rc);
Json tail_fit_to_json(const TailFit& fit);
Json small_ball_to_json(const SmallBallFit& fit);
Json moment_limit_to_json(const MomentLimit& ml);

}  // namespace ssgauss
