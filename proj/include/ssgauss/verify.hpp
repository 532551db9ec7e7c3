#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ssgauss/json_io.hpp"

namespace ssgauss {

struct CheckResult {
  std::string criterion;  // "AC1" .. "AC11"
  std::string name;
  bool pass = false;
  Json measured = Json::object();
  double seconds = 0.0;  // wall time, not part of the report
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  bool pass() const;
  /// Deterministic JSON (no timings, no thread counts).
  Json to_json() const;
};

struct VerifyOptions {
  std::uint64_t seed = 20240611;
};

/// identities, moments, scaling, tails, smallball, constants.
const std::vector<std::string>& suite_names();

/// Runs one suite, or all of them for "all".  Throws ConfigError for an
/// unknown name.
std::vector<SuiteReport> run_suite(const std::string& name, const VerifyOptions& options = {});

/// Criteria covered by a suite, in order.
std::vector<std::string> suite_criteria(const std::string& name);

}  // namespace ssgauss
