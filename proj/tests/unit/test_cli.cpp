#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "ssgauss/json_io.hpp"

namespace fs = std::filesystem;

namespace {

struct Invocation {
  int status = -1;
  std::string out;
};

Invocation run(const std::string& args) {
  const std::string cmd = std::string(SSGAUSS_CLI) + " " + args + " 2>/dev/null";
  Invocation r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ssgauss_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string config(const std::string& name, const std::string& body) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << body;
    return p.string();
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, ConstantsForBrownianLocalTime) {
  const auto cfg = config("c.json", R"({"process": {"kind": "bm"}, "functional": {"kind": "delta"}})");
  const Invocation r = run("constants --config " + cfg);
  ASSERT_EQ(r.status, 0);
  const auto j = ssgauss::Json::parse(r.out);
  EXPECT_EQ(j["constants"]["provenance"], "closed-form");
  EXPECT_NEAR(j["constants"]["c"].get<double>(), 0.5, 1e-12);
  EXPECT_TRUE(j.contains("config_hash"));
  EXPECT_TRUE(j.contains("version"));
}

TEST_F(CliTest, ConfigErrorsExitWithTwo) {
  EXPECT_EQ(run("constants --config " + config("bad.json", R"({"process": {"kind": "fbm", "H": 1.5}})")).status, 2);
  EXPECT_EQ(run("constants --config " + config("broken.json", "{ not json")).status, 2);
  EXPECT_EQ(run("constants --config " + (dir_ / "missing.json").string()).status, 2);
  EXPECT_EQ(run("frobnicate").status, 2);
}

TEST_F(CliTest, FunctionalOutputIndependentOfThreads) {
  const auto cfg = config("f.json", R"({"process": {"kind": "fbm", "H": 0.3}, "grid": {"n": 256},
    "functional": {"kind": "delta"}, "paths": 300, "seed": 17})");
  const Invocation a = run("functional --config " + cfg + " --threads 1");
  const Invocation b = run("functional --config " + cfg + " --threads 3");
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  const Invocation c = run("functional --config " + cfg + " --threads 1 --seed 18");
  EXPECT_NE(a.out, c.out);
}

TEST_F(CliTest, SimulateThenFunctionalFromFile) {
  const auto cfg = config("s.json", R"({"process": {"kind": "bm"}, "grid": {"n": 128},
    "functional": {"kind": "riesz", "beta": 0.5}, "paths": 20, "seed": 3})");
  const std::string batch = (dir_ / "paths.bin").string();
  ASSERT_EQ(run("simulate --config " + cfg + " --out " + batch).status, 0);
  const Invocation stored = run("functional --config " + cfg + " --input " + batch + " --format csv");
  const Invocation streamed = run("functional --config " + cfg + " --format csv");
  ASSERT_EQ(stored.status, 0);
  EXPECT_EQ(stored.out.rfind("# ssgauss", 0), 0u);
  EXPECT_EQ(stored.out, streamed.out);
}

TEST_F(CliTest, VerifyIdentities) {
  const Invocation r = run("verify identities");
  ASSERT_EQ(r.status, 0);
  const auto j = ssgauss::Json::parse(r.out);
  EXPECT_TRUE(j["pass"].get<bool>());
}
