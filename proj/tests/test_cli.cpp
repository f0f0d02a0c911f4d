// Copyright 2026 The chen-explicit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "chen/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Out {
  int code;
  std::string out, err;
};

Out run(std::vector<std::string> args) {
  args.insert(args.begin(), "chen");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  int code = chen::cli::run(static_cast<int>(argv.size()), argv.data(), o, e);
  return {code, o.str(), e.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("chen-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter_++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
  static inline int counter_ = 0;
};

class CacheEnv {
 public:
  explicit CacheEnv(const fs::path& dir) { ::setenv("CHEN_CACHE_DIR", dir.c_str(), 1); }
  ~CacheEnv() { ::unsetenv("CHEN_CACHE_DIR"); }
};

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({"bounds", "--theorem", "7"}).code, 2);
  EXPECT_EQ(run({"--output-format", "xml", "constants"}).code, 2);
  EXPECT_EQ(run({"--precision-target", "1e-3", "bounds"}).code, 2);
  EXPECT_EQ(run({"--threads", "0", "bounds"}).code, 2);
  EXPECT_EQ(run({"verify"}).code, 2);
  EXPECT_EQ(run({"verify", "--N", "11"}).code, 2);
  EXPECT_EQ(run({"verify", "--N", "10", "--scan", "20"}).code, 2);
  EXPECT_EQ(run({"bounds", "--loglogN", "0.5"}).code, 2);
  EXPECT_EQ(run({"bounds", "--epsilon", "0.5"}).code, 2);
  auto h = run({"--help"});
  EXPECT_EQ(h.code, 0);
  EXPECT_NE(h.out.find("verify"), std::string::npos);
}

TEST(Cli, BoundsFinal) {
  auto r = run({"bounds", "--theorem", "final"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema"], "chen-report/1");
  EXPECT_EQ(j["subcommand"], "bounds");
  EXPECT_TRUE(j["pass"].get<bool>());
  double mid = j["reports"][0]["total"]["mid"];
  EXPECT_NEAR(mid, 0.0071633675516, 1e-10);
  // Below the crossing the final coefficient misses 0.007: a failed check.
  auto low = run({"bounds", "--theorem", "final", "--loglogN", "20"});
  EXPECT_EQ(low.code, 1);
  EXPECT_FALSE(nlohmann::json::parse(low.out)["pass"].get<bool>());
}

TEST(Cli, BoundsFormats) {
  auto csv = run({"bounds", "--theorem", "all", "--output-format", "csv"});
  ASSERT_EQ(csv.code, 0);
  EXPECT_EQ(csv.out.rfind("theorem,term,sign,mid,rad\n", 0), 0u);
  EXPECT_NE(csv.out.find("threshold,crossing_loglog_N"), std::string::npos);
  auto txt = run({"--output-format", "text", "bounds", "--theorem", "6"});
  ASSERT_EQ(txt.code, 0);
  EXPECT_NE(txt.out.find("total ="), std::string::npos);
  // Global options are accepted after the subcommand too.
  auto after = run({"bounds", "--theorem", "6", "--output-format", "text"});
  EXPECT_EQ(after.out, txt.out);
}

TEST(Cli, Constants) {
  auto r = run({"constants"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema"], "chen-report/1");
  EXPECT_TRUE(j["pass"].get<bool>());
}

TEST(Cli, Sievefun) {
  auto r = run({"--output-format", "csv", "sievefun", "--s-max", "5", "--step", "0.1"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream is(r.out);
  std::string line;
  std::getline(is, line);
  EXPECT_NE(line.find("s"), std::string::npos);
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 41);
  auto j = nlohmann::json::parse(run({"sievefun", "--s-max", "5", "--step", "0.1"}).out);
  EXPECT_TRUE(j["keystone_pass"].get<bool>());
  EXPECT_EQ(run({"sievefun", "--step", "0"}).code, 2);
}

TEST(Cli, Verify) {
  auto r = run({"verify", "--N", "10000", "--emit", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("N,pi2,S_A,Sum_S_Aq,S_B,lemma41_margin,UN,ratio\n", 0), 0u);
  auto j = nlohmann::json::parse(run({"verify", "--N", "10"}).out);
  EXPECT_EQ(j["rows"][0]["pi2"], 3);
  auto s = run({"verify", "--scan", "200", "--output-format", "csv"});
  ASSERT_EQ(s.code, 0);
  EXPECT_EQ(std::count(s.out.begin(), s.out.end(), '\n'), 1 + (200 - 6) / 2 + 1);
}

TEST(Cli, ScanDeterministicAcrossThreads) {
  auto a = run({"scan", "--N-max", "20000", "--threads", "1"});
  ASSERT_EQ(a.code, 0) << a.err;
  for (const char* th : {"4", "8"}) EXPECT_EQ(run({"scan", "--N-max", "20000", "--threads", th}).out, a.out);
  EXPECT_EQ(run({"scan", "--N-max", "20000"}).out, a.out);
  auto j = nlohmann::json::parse(a.out);
  EXPECT_GE(j["min_pi2"].get<int>(), 1);
  auto csv = run({"--output-format", "csv", "scan", "--N-max", "100"});
  EXPECT_EQ(csv.out.rfind("N,pi2,UN,ratio\n", 0), 0u);
  EXPECT_EQ(run({"scan", "--N-max", "5000000000"}).code, 2);
}

TEST(Cli, OutputFile) {
  TempDir d;
  auto path = (d.path() / "r.json").string();
  auto r = run({"bounds", "--output", path});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  EXPECT_EQ(ss.str(), run({"bounds"}).out);
}

TEST(Cli, CacheLifecycle) {
  TempDir d;
  CacheEnv env(d.path());
  auto status = [](const Out& o) { return nlohmann::json::parse(o.out)["status"].get<std::string>(); };
  auto b = run({"--table-limit", "100000", "cache"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(status(b), "built");
  EXPECT_EQ(nlohmann::json::parse(b.out)["prime_count"], 9592);
  EXPECT_EQ(status(run({"--table-limit", "100000", "cache"})), "loaded");
  auto file = d.path() / "primes-100000.bin";
  ASSERT_TRUE(fs::exists(file));
  fs::resize_file(file, 10);
  auto g = run({"--table-limit", "100000", "cache"});
  EXPECT_EQ(status(g), "regenerated");
  EXPECT_NE(g.err.find("warning"), std::string::npos);
  EXPECT_EQ(status(run({"--table-limit", "100000", "cache"})), "loaded");
  // A corrupt cache does not change the results of a command.
  auto v1 = run({"verify", "--N", "10000", "--table-limit", "100000"});
  {
    std::ofstream junk(file, std::ios::binary | std::ios::trunc);
    junk << "not a prime table";
  }
  auto v2 = run({"verify", "--N", "10000", "--table-limit", "100000"});
  EXPECT_EQ(v1.out, v2.out);
  auto c = run({"--table-limit", "100000", "cache", "--clear", "--output-format", "text"});
  EXPECT_EQ(c.code, 0);
  EXPECT_FALSE(fs::exists(file));
}

TEST(Cli, CacheNeedsDirectory) {
  ::unsetenv("CHEN_CACHE_DIR");
  EXPECT_EQ(run({"cache"}).code, 2);
}
