// Copyright 2026 The rstlab Authors
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


#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "rstlab/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "rstlab");
  std::ostringstream out, err;
  Result r;
  r.code = rstlab::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "rstlab-cli-test" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(is);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string first_line(const fs::path& p) {
  const std::string s = slurp(p);
  return s.substr(0, s.find('\n'));
}

json manifest(const fs::path& p) { return json::parse(slurp(p)); }

std::vector<double> column(const fs::path& csv, std::size_t col) {
  std::istringstream is(slurp(csv));
  std::string line;
  std::getline(is, line);
  std::vector<double> v;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string cell;
    for (std::size_t i = 0; i <= col; ++i) std::getline(ls, cell, ',');
    v.push_back(std::stod(cell));
  }
  return v;
}

}  // namespace

TEST_CASE("help and parse errors") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"explore", "--help"}).code == 0);
  CHECK(run({}).code == rstlab::cli::kConfigError);
  CHECK(run({"explore", "--no-such-flag"}).code == rstlab::cli::kConfigError);
  CHECK(run({"nonsense"}).code == rstlab::cli::kConfigError);
}

TEST_CASE("invalid configuration exits 2") {
  const std::string out = scratch("invalid").string();
  CHECK(run({"--out", out, "explore", "--dim", "1"}).code == 2);
  CHECK(run({"--out", out, "explore", "--kappa", "0.5"}).code == 2);
  CHECK(run({"--out", out, "explore", "--epsilon", "0.7"}).code == 2);
  CHECK(run({"--out", out, "explore", "--source", "bogus"}).code == 2);
  CHECK(run({"--out", out, "experiment", "deviation", "--trials", "50"}).code == 2);
  CHECK(run({"--out", out, "check", "lemmas", "--lemma", "nope"}).code == 2);
  CHECK(run({"--out", out, "check", "planarity", "--dim", "3", "--radius", "5"}).code == 2);
  CHECK(run({"--out", out, "build", "--input", "/nonexistent/points.csv"}).code == 2);
  const Result r = run({"--out", "/proc/rstlab-not-writable", "sample", "--radius", "3"});
  CHECK(r.code == 2);
  CHECK(r.err.find("config error") != std::string::npos);
}

TEST_CASE("explore writes a strictly decreasing trace") {
  const fs::path out = scratch("explore");
  const Result r = run({"--out", out.string(), "explore", "--dim", "2", "--start-norm", "100", "--seed", "7"});
  REQUIRE(r.code == 0);
  CHECK(first_line(out / "trace.csv") == "n,x1,x2,R,r,L,is_tau,is_Q,is_w,theta");
  CHECK(first_line(out / "renewal.csv") == "block,w_start,w_end,block_length,perp1,perp2");
  const auto R = column(out / "trace.csv", 3);
  REQUIRE(R.size() > 2);
  for (std::size_t i = 1; i < R.size(); ++i) CHECK(R[i] < R[i - 1]);
  const json m = manifest(out / "explore.json");
  CHECK(m["command"] == "explore");
  CHECK(m["passed"] == true);
  // Defaults are echoed after resolution.
  CHECK(m["config"]["lambda"].get<double>() == doctest::Approx(0.0015784).epsilon(1e-4));
  CHECK(m["config"]["delta"].get<double>() == doctest::Approx(0.0280931).epsilon(1e-5));
  CHECK(m["config"]["start-norm"] == 100.0);
  CHECK(m["config"]["kappa"] == 2.0);
  for (const char* key : {"command", "config", "config_hash", "results", "passed", "outputs"}) {
    CHECK(m.contains(key));
  }
  CHECK_FALSE(m["config"].contains("workers"));
}

TEST_CASE("check lemmas") {
  const fs::path out = scratch("lemmas");
  const Result r = run({"--out", out.string(), "check", "lemmas", "--instances", "100000", "--seed", "1"});
  CHECK(r.code == 0);
  const json m = manifest(out / "lemmas.json");
  CHECK(m["passed"] == true);
  CHECK_FALSE(fs::exists(out / "lemma_failures.json"));
}

TEST_CASE("deviation output is reproducible and independent of workers") {
  const fs::path a = scratch("dev-a"), b = scratch("dev-b"), c = scratch("dev-c");
  const std::vector<std::string> args{"experiment", "deviation", "--norms", "20,40", "--trials", "100",
                                      "--seed", "3"};
  auto with = [&](const fs::path& dir, const std::string& workers) {
    std::vector<std::string> v{"--out", dir.string()};
    v.insert(v.end(), args.begin(), args.end());
    v.push_back("--workers");
    v.push_back(workers);
    return run(v).code;
  };
  REQUIRE(with(a, "1") == 0);
  REQUIRE(with(b, "1") == 0);
  REQUIRE(with(c, "3") == 0);
  for (const char* f : {"deviation.csv", "deviation_trials.csv", "deviation.json"}) {
    CHECK(slurp(a / f) == slurp(b / f));
    CHECK(slurp(a / f) == slurp(c / f));
  }
  CHECK(first_line(a / "deviation.csv") == "norm,trials,exceed_rate,half_width,median_deviation");
  CHECK(first_line(a / "deviation_trials.csv") == "norm,trial,deviation_sup");
}

TEST_CASE("build from a sampled file matches build from the radius") {
  const fs::path s = scratch("sample"), b1 = scratch("build-file"), b2 = scratch("build-radius");
  REQUIRE(run({"--out", s.string(), "sample", "--dim", "3", "--radius", "6", "--seed", "4"}).code == 0);
  CHECK(first_line(s / "points.csv") == "id,x1,x2,x3");
  REQUIRE(run({"--out", b1.string(), "build", "--dim", "3", "--input", (s / "points.csv").string()}).code == 0);
  REQUIRE(run({"--out", b2.string(), "build", "--dim", "3", "--radius", "6", "--seed", "4"}).code == 0);
  CHECK(slurp(b1 / "tree.csv") == slurp(b2 / "tree.csv"));
  CHECK(first_line(b1 / "tree.csv") == "child_id,parent_id");
  CHECK(first_line(b1 / "in_degree.csv") == "in_degree,count");
  CHECK(manifest(b1 / "build.json")["passed"] == true);
  // Dimension mismatch between the file and --dim.
  CHECK(run({"--out", b1.string(), "build", "--dim", "2", "--input", (s / "points.csv").string()}).code == 2);
}

TEST_CASE("TOML config with flag override") {
  const fs::path dir = scratch("toml");
  const fs::path cfg = dir / "run.toml";
  {
    std::ofstream os(cfg);
    os << "[explore]\nstart-norm = 40.0\nseed = 5\nkappa = 1.5\n";
  }
  const fs::path out = dir / "out";
  REQUIRE(run({"--config", cfg.string(), "--out", out.string(), "explore", "--seed", "6"}).code == 0);
  const json m = manifest(out / "explore.json");
  CHECK(m["config"]["start-norm"] == 40.0);
  CHECK(m["config"]["kappa"] == 1.5);
  CHECK(m["config"]["seed"] == 6);
}

TEST_CASE("output directory from the environment") {
  const fs::path dir = scratch("env");
  ::setenv(rstlab::cli::kOutEnv, dir.string().c_str(), 1);
  const Result r = run({"check", "tree", "--radius", "4"});
  ::unsetenv(rstlab::cli::kOutEnv);
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "tree_check.json"));
}

TEST_CASE("spacing without enough renewals fails with exit 1") {
  const fs::path out = scratch("spacing");
  const Result r = run({"--out", out.string(), "experiment", "spacing", "--start-norm", "2", "--trials", "100"});
  CHECK(r.code == rstlab::cli::kAssertionFailure);
  const json m = manifest(out / "spacing.json");
  CHECK(m["results"]["insufficient_data"] == true);
  CHECK(m["passed"] == false);
  for (const char* f : {"spacing_tau.csv", "spacing_w.csv", "spacing_block_length.csv", "spacing_r_theta.csv"}) {
    CHECK(first_line(out / f) == "threshold,survival,half_width");
  }
}

TEST_CASE("remaining schemas") {
  SUBCASE("psi-tail") {
    const fs::path out = scratch("psi");
    CHECK(run({"--out", out.string(), "experiment", "psi-tail", "--x-norm", "6", "--thresholds", "0.5,1,2",
               "--trials", "200"})
              .code == 0);
    CHECK(first_line(out / "psi_tail.csv") == "threshold,survival,half_width,bound");
  }
  SUBCASE("straightness") {
    const fs::path out = scratch("straight");
    CHECK(run({"--out", out.string(), "straightness", "--radius", "12"}).code == 0);
    CHECK(first_line(out / "straightness.csv") == "vertex_id,norm,max_angle");
  }
  SUBCASE("planarity") {
    const fs::path out = scratch("planar");
    CHECK(run({"--out", out.string(), "check", "planarity", "--radius", "12"}).code == 0);
    CHECK(first_line(out / "crossings.csv") == "edge_a_child,edge_b_child");
    CHECK(manifest(out / "planarity.json")["passed"] == true);
  }
  SUBCASE("symmetry") {
    const fs::path out = scratch("sym");
    CHECK(run({"--out", out.string(), "experiment", "symmetry", "--kappa", "1.1", "--lambda", "1",
               "--start-norm", "40", "--trials", "100", "--min-applicable", "5", "--max-trials", "200"})
              .code == 0);
    CHECK(first_line(out / "symmetry.csv") ==
          "trial,seed,outcome,w_start,w_end,negation_error,first_block_outcome,first_coordinate");
  }
  SUBCASE("resampling") {
    const fs::path out = scratch("resample");
    const Result r = run({"--out", out.string(), "experiment", "resampling", "--start-norm", "12", "--step", "3",
                          "--trials", "200"});
    CHECK((r.code == 0 || r.code == 1));
    CHECK(first_line(out / "resampling.csv") == "trial,continued,resampled");
    CHECK(manifest(out / "resampling.json")["results"].contains("p_value"));
  }
}
