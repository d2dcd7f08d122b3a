/*
 * Copyright 2026 The LaPLACE Authors.
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

#include "cli.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "absl/status/status.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "laplace/bayes_net.h"
#include "laplace/inference.h"
#include "laplace/random.h"
#include "laplace/random_network.h"
#include "json.hpp"
#include "test_util.h"

namespace laplace::cli {
namespace {

namespace fs = std::filesystem;
using ::nlohmann::json;
using ::testing::HasSubstr;

struct Outcome {
  int exit_code;
  std::string out;
  std::string err;
};

std::string Slurp(const fs::path& path) {
  std::ifstream file(path, std::ios::binary);
  std::stringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::path(::testing::TempDir()) / absl::StrCat("cli_", info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  Outcome Laplace(const std::string& args, const std::string& env = "") {
    const fs::path out = dir_ / "stdout.txt";
    const fs::path err = dir_ / "stderr.txt";
    const std::string command = absl::StrCat(env, " '", LAPLACE_CLI_PATH, "' ", args, " > '",
                                             out.string(), "' 2> '", err.string(), "'");
    const int raw = std::system(command.c_str());
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, Slurp(out), Slurp(err)};
  }

  fs::path Write(const std::string& name, const std::string& text) {
    const fs::path path = dir_ / name;
    std::ofstream(path, std::ios::binary) << text;
    return path;
  }

  fs::path dir_;
};

TEST(ExitCodes, MapStatusCodes) {
  EXPECT_EQ(ExitCodeFor(absl::OkStatus()), kExitOk);
  EXPECT_EQ(ExitCodeFor(absl::InvalidArgumentError("x")), kExitData);
  EXPECT_EQ(ExitCodeFor(absl::NotFoundError("x")), kExitData);
  EXPECT_EQ(ExitCodeFor(absl::FailedPreconditionError("x")), kExitData);
  EXPECT_EQ(ExitCodeFor(absl::UnavailableError("x")), kExitAdapter);
  EXPECT_EQ(ExitCodeFor(absl::InternalError("x")), kExitInternal);
}

TEST_F(CliTest, GenerateIsDeterministic) {
  const Outcome one = Laplace("generate --network alarm --n 1 --seed 4");
  ASSERT_EQ(one.exit_code, 0) << one.err;
  EXPECT_EQ(std::count(one.out.begin(), one.out.end(), '\n'), 2);
  EXPECT_THAT(one.out, HasSubstr("Intubation"));
  EXPECT_EQ(Laplace("generate --network alarm --n 1 --seed 4").out, one.out);
  EXPECT_EQ(Laplace("generate --network alarm --n 50 --seed 4").out,
            Laplace("generate --network alarm --n 50 --seed 4").out);
}

TEST_F(CliTest, ConfigFileValuesYieldToFlags) {
  const fs::path config = Write("run.toml", "seed = 9\n");
  const std::string with_nine = Laplace("generate --network alarm --n 20 --seed 9").out;
  const std::string with_one = Laplace("generate --network alarm --n 20 --seed 1").out;
  ASSERT_NE(with_nine, with_one);
  EXPECT_EQ(Laplace(absl::StrCat("--config ", config.string(),
                                 " generate --network alarm --n 20")).out,
            with_nine);
  EXPECT_EQ(Laplace(absl::StrCat("--config ", config.string(),
                                 " generate --network alarm --n 20 --seed 1")).out,
            with_one);
}

TEST_F(CliTest, ThreadsComeFromTheEnvironment) {
  EXPECT_EQ(Laplace("generate --network alarm --n 1", "LAPLACE_THREADS=0").exit_code, 1);
  EXPECT_EQ(Laplace("generate --network alarm --n 1 --threads 1", "LAPLACE_THREADS=0").exit_code,
            0);
  EXPECT_EQ(Laplace("generate --network alarm --n 1", "LAPLACE_THREADS=abc").exit_code, 1);
  EXPECT_EQ(Laplace("generate --network alarm --n 1", "LAPLACE_THREADS=2").exit_code, 0);
}

TEST_F(CliTest, HelpListsDefaults) {
  const Outcome help = Laplace("--help");
  EXPECT_EQ(help.exit_code, 0);
  EXPECT_THAT(help.out, HasSubstr("--samples"));
  EXPECT_THAT(help.out, HasSubstr("5000"));
  EXPECT_THAT(help.out, HasSubstr("0.001"));
  EXPECT_THAT(help.out, HasSubstr("LAPLACE_THREADS"));
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(Laplace("generate --no-such-flag").exit_code, 1);
  EXPECT_EQ(Laplace("").exit_code, 1);
  const Outcome missing = Laplace("explain --data /nonexistent.csv --target y");
  EXPECT_EQ(missing.exit_code, 2);
  EXPECT_THAT(missing.err, HasSubstr("\"error\""));
  EXPECT_EQ(Laplace("explain --network alarm --target NoSuchNode").exit_code, 2);
}

TEST_F(CliTest, OracleBlanketOfSingleNodeIsEmpty) {
  const bn::BayesianNetwork lone =
      bn::RandomNetwork({.num_nodes = 1, .edge_probability = 0}, 1);
  const fs::path path = Write("lone.json", bn::NetworkToJson(lone).dump());
  const Outcome result = Laplace(
      absl::StrCat("oracle mb --network ", path.string(), " --target ", lone.variable(0).name));
  ASSERT_EQ(result.exit_code, 0) << result.err;
  EXPECT_TRUE(json::parse(result.out)["blanket"].empty());
}

TEST_F(CliTest, OracleBlanketOnAlarm) {
  const Outcome result = Laplace("oracle mb --network alarm --target Intubation");
  ASSERT_EQ(result.exit_code, 0) << result.err;
  const auto blanket = json::parse(result.out)["blanket"].get<std::vector<std::string>>();
  EXPECT_THAT(blanket, ::testing::UnorderedElementsAre("KinkedTube", "MinVol", "PulmEmbolus",
                                                       "Shunt", "Press", "VentTube", "VentLung",
                                                       "VentAlv"));
}

TEST_F(CliTest, OraclePosteriorRefusesLargeNetworks) {
  const Outcome result = Laplace("oracle posterior --network alarm --target Intubation");
  EXPECT_EQ(result.exit_code, 2);
  EXPECT_THAT(result.err, HasSubstr("network too large for exhaustive mode"));
}

TEST_F(CliTest, OraclePosteriorMatchesLibraryInference) {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const bn::BayesianNetwork network = bn::RandomNetwork(
        {.num_nodes = 6, .cardinality = 2 + trial % 2, .edge_probability = 0.5}, 100 + trial);
    const fs::path path = Write("net.json", bn::NetworkToJson(network).dump());
    const int target = static_cast<int>(rng.UniformInt(network.num_nodes()));
    bn::Evidence evidence(network.num_nodes(), bn::kUnobserved);
    std::string evidence_text;
    for (int v = 0; v < network.num_nodes(); ++v) {
      if (v == target || !rng.Bernoulli(0.4)) continue;
      evidence[v] = static_cast<int>(rng.UniformInt(network.variable(v).states.size()));
      absl::StrAppend(&evidence_text, evidence_text.empty() ? "" : ",", network.variable(v).name,
                      "=", network.variable(v).states[evidence[v]]);
    }
    const Outcome result =
        Laplace(absl::StrCat("oracle posterior --network ", path.string(), " --target ",
                             network.variable(target).name,
                             evidence_text.empty() ? "" : " --evidence " + evidence_text));
    ASSERT_EQ(result.exit_code, 0) << result.err;
    const json posterior = json::parse(result.out)["posterior"];
    LAPLACE_ASSERT_OK_AND_ASSIGN(const auto expected, bn::Posterior(network, target, evidence));
    for (size_t s = 0; s < expected.size(); ++s) {
      EXPECT_NEAR(posterior[network.variable(target).states[s]].get<double>(), expected[s],
                  1e-12);
    }
  }
}

TEST_F(CliTest, OracleRandomDagRoundTrips) {
  const Outcome result =
      Laplace("oracle random-dag --nodes 5 --cardinality 3 --seed 2");
  ASSERT_EQ(result.exit_code, 0) << result.err;
  LAPLACE_ASSERT_OK_AND_ASSIGN(const auto network, bn::NetworkFromJson(json::parse(result.out)));
  EXPECT_EQ(network.num_nodes(), 5);
  EXPECT_EQ(network.variable(0).states.size(), 3);
}

TEST_F(CliTest, ExplainAlarmWritesArtifacts) {
  const Outcome result = Laplace(absl::StrCat(
      "explain --network alarm --target Intubation --rows 5000 --trees 20 --threads 1 "
      "--sensitive MinVol,Shunt,HR --out ",
      (dir_ / "run").string()));
  ASSERT_EQ(result.exit_code, 0) << result.err;
  const json summary = json::parse(result.out);
  const auto blanket = summary["blanket"].get<std::vector<std::string>>();
  EXPECT_FALSE(blanket.empty());
  const auto flagged = summary["flagged_sensitive"].get<std::vector<std::string>>();
  EXPECT_THAT(flagged, ::testing::Contains("MinVol"));
  for (const auto& name : flagged) {
    EXPECT_THAT(blanket, ::testing::Contains(name));
    EXPECT_NE(name, "HR");
  }
  const json explanation = json::parse(Slurp(dir_ / "run" / "explanation.json"));
  EXPECT_EQ(explanation["target"], "Intubation");
  EXPECT_EQ(explanation["network"]["variables"].back()["name"], "Intubation");
  const std::string dot = Slurp(dir_ / "run" / "explanation.dot");
  EXPECT_THAT(dot, HasSubstr("digraph"));
  EXPECT_THAT(dot, HasSubstr("Intubation"));
}

std::string NoiseCsv() {
  std::string csv = "a,b,c,y\n";
  Rng rng(5);
  for (int i = 0; i < 400; ++i) {
    absl::StrAppend(&csv, rng.UniformInt(3), ",", rng.UniformInt(2) ? "u" : "v", ",",
                    rng.Uniform() * 10, ",", rng.Bernoulli(0.5) ? "yes" : "no", "\n");
  }
  return csv;
}

TEST_F(CliTest, ExternalModelProtocol) {
  const fs::path csv = Write("noise.csv", NoiseCsv());
  const std::string base = absl::StrCat("explain --data ", csv.string(),
                                        " --target y --samples 300 --out ", dir_.string(),
                                        " --model-command ");
  const Outcome constant = Laplace(base + LAPLACE_TEST_STUB_DIR "/constant_model.sh --rho 0");
  ASSERT_EQ(constant.exit_code, 0) << constant.err;
  const json summary = json::parse(constant.out);
  EXPECT_TRUE(summary["blanket"].empty());
  EXPECT_EQ(summary["predicted_class"], "yes");
  const json explanation = json::parse(Slurp(dir_ / "explanation.json"));
  EXPECT_EQ(explanation["instance"]["original"].size(), 3);

  const Outcome failing = Laplace(base + LAPLACE_TEST_STUB_DIR "/failing_model.sh");
  EXPECT_EQ(failing.exit_code, 3);
  EXPECT_THAT(failing.err, HasSubstr("model crashed"));
  EXPECT_EQ(Laplace(base + LAPLACE_TEST_STUB_DIR "/short_output_model.sh").exit_code, 3);
  EXPECT_EQ(Laplace(base + LAPLACE_TEST_STUB_DIR "/unknown_label_model.sh").exit_code, 3);
}

TEST_F(CliTest, EvaluateSetsReadsFragments) {
  const fs::path csv = Write("noise.csv", NoiseCsv());
  const fs::path fragment = Write(
      "lime.json", R"({"explainer": "LIME", "runs": [{"features": ["a", "b"]}, {"features": ["c"]}]})");
  const std::string base = absl::StrCat("evaluate-sets --data ", csv.string(),
                                        " --target y --trees 5 --out ", dir_.string(), " --sets ");
  const Outcome result = Laplace(base + fragment.string());
  ASSERT_EQ(result.exit_code, 0) << result.err;
  const json report = json::parse(Slurp(dir_ / "report.json"));
  EXPECT_EQ(report["explainer"], "LIME");
  EXPECT_EQ(report["runs"].size(), 2);
  EXPECT_NEAR(report["consistency_entropy"].get<double>(), std::log2(3), 1e-12);
  EXPECT_THAT(Slurp(dir_ / "report.md"), HasSubstr("| LIME |"));

  const fs::path bad = Write("bad.json", R"({"runs": [{"features": ["ghost"]}]})");
  const Outcome rejected = Laplace(base + bad.string());
  EXPECT_EQ(rejected.exit_code, 2);
  EXPECT_THAT(rejected.err, HasSubstr("ghost"));
}

}  // namespace
}  // namespace laplace::cli
