/*
 * Copyright 2026 The gamecf Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>
#include <string>

#include "commands.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("gamecf_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Runs the binary; returns the exit status and captures stderr.
  int run(const std::string& args) {
    const std::string cmd = std::string("\"") + GAMECF_CLI_PATH + "\" " + args + " > \"" +
                            (dir_ / "stdout.txt").string() + "\" 2> \"" +
                            (dir_ / "stderr.txt").string() + "\"";
    const int status = std::system(cmd.c_str());
    err_ = slurp(dir_ / "stderr.txt");
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path write_config(const std::string& name, const json& j) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << j.dump(2);
    return p;
  }

  static json config(const std::string& name) {
    return json::parse(slurp(fs::path(GAMECF_CONFIG_DIR) / name));
  }

  fs::path dir_;
  std::string err_;
};

TEST_F(Cli, BoundsContainTheEquilibriumPrediction) {
  const fs::path cfg = fs::path(GAMECF_CONFIG_DIR) / "entry_game.json";
  ASSERT_EQ(run("bounds --config \"" + cfg.string() + "\" --out \"" + dir_.string() + "\""), 0)
      << err_;
  const auto report = json::parse(slurp(dir_ / "bounds.json"));
  ASSERT_FALSE(report["bounds"].empty());
  for (const auto& r : report["bounds"]) {
    EXPECT_LE(r["lower"].get<double>(), r["ep"].get<double>() + 1e-9);
    EXPECT_LE(r["ep"].get<double>(), r["upper"].get<double>() + 1e-9);
  }
  EXPECT_TRUE(fs::exists(dir_ / "bounds.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "bounds.provenance.json"));
}

TEST_F(Cli, InadmissiblePolicyFailsWithOneJsonLine) {
  auto j = config("entry_game.json");
  j["policy"] = {{"type", "shift"}, {"coordinate", "eps_1"}, {"amount", 1.0}};
  const auto cfg = write_config("bad.json", j);
  EXPECT_EQ(run("bounds --config \"" + cfg.string() + "\" --out \"" + dir_.string() + "\""), 2);
  ASSERT_EQ(std::count(err_.begin(), err_.end(), '\n'), 1) << err_;
  const auto e = json::parse(err_);
  EXPECT_EQ(e["error"], "policy_not_admissible");
  EXPECT_FALSE(fs::exists(dir_ / "bounds.json"));
}

TEST_F(Cli, ConfigErrorsNameTheField) {
  auto j = config("entry_game.json");
  j["game"]["x_grid"]["weights"] = {0.3, 0.2, 0.3, 0.1};
  const auto cfg = write_config("weights.json", j);
  EXPECT_EQ(run("simulate --config \"" + cfg.string() + "\" --out \"" + dir_.string() + "\""), 2);
  const auto e = json::parse(err_);
  EXPECT_EQ(e["error"], "config_error");
  EXPECT_NE(e["message"].get<std::string>().find("game.x_grid"), std::string::npos) << err_;
}

TEST_F(Cli, SimulateNeedsASeedAndWritesProvenance) {
  auto j = config("entry_game.json");
  j.erase("seed");
  const auto cfg = write_config("noseed.json", j);
  EXPECT_EQ(run("simulate --config \"" + cfg.string() + "\" --out \"" + dir_.string() + "\""), 2);
  EXPECT_EQ(json::parse(err_)["error"], "config_error");
  ASSERT_EQ(run("simulate --config \"" + cfg.string() + "\" --seed 5 --out \"" + dir_.string() +
                "\""),
            0)
      << err_;
  const auto prov = json::parse(slurp(dir_ / "data.provenance.json"));
  EXPECT_EQ(prov["seed"], 5);
  EXPECT_EQ(prov["markets"], 1000);
}

TEST_F(Cli, MissingFilesAndUnknownCommands) {
  EXPECT_EQ(run("bounds --config \"" + (dir_ / "absent.json").string() + "\""), 2);
  EXPECT_TRUE(json::parse(err_).contains("error"));
  EXPECT_NE(run("frobnicate"), 0);
}

TEST_F(Cli, VerifyPasses) {
  ASSERT_EQ(run("verify --seed 2 --out \"" + dir_.string() + "\""), 0) << err_;
  const auto v = json::parse(slurp(dir_ / "verify.json"));
  EXPECT_TRUE(v.dump().find("\"passed\":false") == std::string::npos) << v.dump();
}

TEST_F(Cli, EstimateWritesEveryEngine) {
  auto j = config("estimate_entry.json");
  j["data"] = (fs::path(GAMECF_CONFIG_DIR) / j["data"].get<std::string>()).string();
  j["bootstrap"]["replications"] = 19;
  const auto cfg = write_config("est.json", j);
  ASSERT_EQ(run("estimate --config \"" + cfg.string() + "\" --seed 3 --out \"" + dir_.string() +
                "\""),
            0)
      << err_;
  const auto e = json::parse(slurp(dir_ / "estimates.json"));
  std::set<std::string> engines;
  for (const auto& r : e["engines"]) engines.insert(r["engine"].get<std::string>());
  EXPECT_TRUE(engines.count("ols"));
  EXPECT_TRUE(engines.count("kernel"));
  EXPECT_TRUE(engines.count("decomposition_ols"));
}

TEST(CliLibrary, ErrorLineIsSingleLineJson) {
  const auto line = gamecf::cli::error_line("config_error", "bad \"quote\"\nnext");
  EXPECT_EQ(std::count(line.begin(), line.end(), '\n'), 0);
  const auto j = json::parse(line);
  EXPECT_EQ(j["error"], "config_error");
  EXPECT_EQ(j["message"], "bad \"quote\"\nnext");
}

}  // namespace
