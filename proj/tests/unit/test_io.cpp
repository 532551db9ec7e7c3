#include <gtest/gtest.h>

#include <sstream>

#include "ssgauss/errors.hpp"
#include "ssgauss/json_io.hpp"
#include "ssgauss/path_io.hpp"
#include "ssgauss/sampler.hpp"

using namespace ssgauss;

TEST(JsonIo, ProcessRoundTrip) {
  for (const auto& spec : {ProcessSpec::bifbm(0.6, 0.5, 2), ProcessSpec::riemann_liouville(0.25),
                           ProcessSpec::brownian(3)}) {
    const ProcessSpec back = process_from_json(process_to_json(spec));
    EXPECT_EQ(back.kind, spec.kind);
    EXPECT_EQ(back.hurst, spec.hurst);
    EXPECT_EQ(back.k, spec.k);
    EXPECT_EQ(back.alpha, spec.alpha);
    EXPECT_EQ(back.dim, spec.dim);
  }
}

TEST(JsonIo, FunctionalRoundTrip) {
  FunctionalSpec d = FunctionalSpec::delta({0.1, 0.01});
  d.extrapolation = ExtrapolationMode::fitted;
  const FunctionalSpec back = functional_from_json(functional_to_json(d));
  EXPECT_EQ(back.kind, FunctionalKind::delta);
  EXPECT_EQ(back.eps, d.eps);
  EXPECT_EQ(back.extrapolation, ExtrapolationMode::fitted);
  EXPECT_EQ(functional_from_json(functional_to_json(FunctionalSpec::product({0.2, 0.3}))).betas,
            (std::vector<double>{0.2, 0.3}));
}

TEST(JsonIo, ErrorsNameTheField) {
  try {
    process_from_json(Json::parse(R"({"kind": "fbm", "H": "high"})"));
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "process.H");
  }
  try {
    functional_from_json(Json::parse(R"({"kind": "riesz"})"));
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "functional.beta");
  }
  EXPECT_THROW(grid_from_json(Json::parse(R"({"n": 0})")), ConfigError);
}

TEST(PathIo, RoundTrip) {
  const PathBatch b = sample_fbm_circulant(0.3, 32, 2.0, 5, 77, 2);
  std::stringstream ss;
  write_path_batch(ss, b, "abc123");
  const std::string text = ss.str();
  EXPECT_EQ(text.rfind("SSGPATH1\n", 0), 0u);
  EXPECT_NE(text.find("abc123"), std::string::npos);
  const PathBatch r = read_path_batch(ss);
  EXPECT_EQ(r.values, b.values);
  EXPECT_EQ(r.paths, b.paths);
  EXPECT_EQ(r.grid.n, b.grid.n);
  EXPECT_EQ(r.grid.horizon, b.grid.horizon);
  EXPECT_EQ(r.spec.dim, 2u);
  EXPECT_EQ(r.seed, 77u);
}

TEST(PathIo, RejectsTruncatedInput) {
  const PathBatch b = sample_fbm_circulant(0.3, 16, 1.0, 3, 1);
  std::stringstream ss;
  write_path_batch(ss, b, "x");
  std::string text = ss.str();
  text.resize(text.size() - 8);
  std::stringstream cut(text);
  EXPECT_ANY_THROW(read_path_batch(cut));
}
