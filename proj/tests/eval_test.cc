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

#include "laplace/eval.h"

#include <cmath>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "laplace/random.h"
#include "laplace/random_network.h"
#include "test_util.h"

namespace laplace::eval {
namespace {

using ::testing::HasSubstr;

TEST(WeightedF1, HandCases) {
  const std::vector<std::string> actual = {"a", "a", "b", "b"};
  EXPECT_DOUBLE_EQ(WeightedF1(std::span<const std::string>(actual), actual), 1.0);
  const std::vector<std::string> all_a = {"a", "a", "a", "a"};
  EXPECT_NEAR(WeightedF1(std::span<const std::string>(all_a), actual), 1.0 / 3, 1e-12);
}

TEST(WeightedF1, MatchesReferenceOnRandomLabels) {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng.UniformInt(60));
    const int classes = 2 + static_cast<int>(rng.UniformInt(4));
    std::vector<int> predicted(n);
    std::vector<int> actual(n);
    for (int i = 0; i < n; ++i) {
      predicted[i] = static_cast<int>(rng.UniformInt(classes));
      actual[i] = static_cast<int>(rng.UniformInt(classes));
    }
    EXPECT_NEAR(WeightedF1(std::span<const int>(predicted), std::span<const int>(actual)),
                test_util::ReferenceWeightedF1(predicted, actual), 1e-9);
  }
}

TEST(ConsistencyEntropy, Anchors) {
  const std::vector<std::string> five = {"a", "b", "c", "d", "e"};
  LAPLACE_ASSERT_OK_AND_ASSIGN(const double identical,
                               ConsistencyEntropy(std::vector(100, five)));
  EXPECT_NEAR(identical, std::log2(5), 1e-9);
  std::vector<std::vector<std::string>> unique;
  for (int i = 0; i < 100; ++i) unique.push_back({absl::StrCat("f", i)});
  LAPLACE_ASSERT_OK_AND_ASSIGN(const double spread, ConsistencyEntropy(unique));
  EXPECT_NEAR(spread, std::log2(100), 1e-9);
  LAPLACE_ASSERT_OK_AND_ASSIGN(const double single, ConsistencyEntropy({{"x"}}));
  EXPECT_EQ(single, 0);
  EXPECT_FALSE(ConsistencyEntropy({{}, {}}).ok());
  EXPECT_FALSE(ConsistencyEntropy({}).ok());
}

std::vector<std::vector<std::string>> RandomSets(Rng& rng) {
  std::vector<std::vector<std::string>> sets;
  const int runs = 1 + static_cast<int>(rng.UniformInt(10));
  for (int r = 0; r < runs; ++r) {
    std::vector<std::string> set;
    for (int f = 0; f < 8; ++f) {
      if (rng.Bernoulli(0.4)) set.push_back(absl::StrCat("f", f));
    }
    if (set.empty()) set.push_back("f0");
    sets.push_back(std::move(set));
  }
  return sets;
}

TEST(ConsistencyEntropy, PermutationAndRenamingInvariant) {
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    auto sets = RandomSets(rng);
    const double base = *ConsistencyEntropy(sets);
    auto shuffled = sets;
    rng.Shuffle(shuffled);
    EXPECT_NEAR(*ConsistencyEntropy(shuffled), base, 1e-12);
    for (auto& set : shuffled) {
      for (auto& name : set) name = absl::StrCat("renamed_", 100 - name.size(), name);
    }
    EXPECT_NEAR(*ConsistencyEntropy(shuffled), base, 1e-12);
  }
}

TEST(ConsistencyEntropy, DoublingEveryRunLeavesEntropyUnchanged) {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    auto sets = RandomSets(rng);
    const double base = *ConsistencyEntropy(sets);
    const size_t runs = sets.size();
    for (size_t i = 0; i < runs; ++i) sets.push_back(sets[i]);
    EXPECT_NEAR(*ConsistencyEntropy(sets), base, 1e-12);
  }
}

TEST(RandomFeatureSets, SizeAndDeterminism) {
  const std::vector<std::string> features = {"a", "b", "c", "d", "e", "f", "g"};
  const auto sets = RandomFeatureSets(features, 5, 20, 3);
  EXPECT_EQ(sets.size(), 20);
  for (const auto& set : sets) {
    EXPECT_EQ(set.size(), 5);
    EXPECT_EQ(std::set<std::string>(set.begin(), set.end()).size(), 5);
  }
  EXPECT_EQ(sets, RandomFeatureSets(features, 5, 20, 3));
}

struct Splits {
  dataset::Dataset train;
  dataset::Dataset test;
  std::string target;
};

Splits SmallSplits(uint64_t seed) {
  const auto network = bn::RandomNetwork({.num_nodes = 7, .edge_probability = 0.5}, seed);
  const auto data = bn::ForwardSample(network, 3000, seed);
  auto [train, test] = dataset::Split(data, 0.8, seed);
  return {std::move(train), std::move(test), network.variable(3).name};
}

TEST(LocalAccuracy, FullFeatureSetEqualsBaselineAndEmptyFails) {
  const Splits s = SmallSplits(4);
  std::vector<std::string> features;
  for (const auto& name : s.train.VariableNames()) {
    if (name != s.target) features.push_back(name);
  }
  const ClassifierSettings settings{.forest = {.trees = 20, .max_depth = 0, .seed = 1}};
  LAPLACE_ASSERT_OK_AND_ASSIGN(
      const FamilyScores scores,
      LocalAccuracy(s.train, s.test, s.target, features, kAllFamilies, settings));
  const int target = *s.train.VariableIndex(s.target);
  std::vector<std::string> truth;
  for (int v : s.test.column(target)) truth.push_back(s.test.variable(target).states[v]);
  const auto nb = models::TrainNaiveBayes(s.train, target)->PredictBatch(s.test);
  EXPECT_EQ(scores.at(ClassifierFamily::kNaiveBayes),
            WeightedF1(std::span<const std::string>(*nb), truth));
  const auto rf = models::TrainRandomForest(s.train, target, settings.forest)->PredictBatch(s.test);
  EXPECT_EQ(scores.at(ClassifierFamily::kRandomForest),
            WeightedF1(std::span<const std::string>(*rf), truth));
  for (const auto& [family, value] : scores) {
    EXPECT_GE(value, 0);
    EXPECT_LE(value, 1);
  }
  const auto empty = LocalAccuracy(s.train, s.test, s.target, {}, kAllFamilies, settings);
  EXPECT_FALSE(empty.ok());
  const std::vector<std::string> unknown = {"nope"};
  EXPECT_FALSE(LocalAccuracy(s.train, s.test, s.target, unknown, kAllFamilies, settings).ok());
}

TEST(LocalAccuracy, NoiseFeatureFallsToMajorityLevel) {
  Rng rng(3);
  std::vector<std::vector<int>> rows;
  for (int i = 0; i < 4000; ++i) {
    rows.push_back({static_cast<int>(rng.UniformInt(2)), rng.Bernoulli(0.7) ? 0 : 1});
  }
  const auto data = test_util::MakeDataset({2, 2}, rows);
  const auto [train, test] = dataset::Split(data, 0.8, 1);
  std::vector<std::string> majority(test.num_rows(), "s0");
  std::vector<std::string> truth;
  for (int v : test.column(1)) truth.push_back(v ? "s1" : "s0");
  const double majority_f1 = WeightedF1(std::span<const std::string>(majority), truth);
  const std::vector<std::string> noise = {"v0"};
  LAPLACE_ASSERT_OK_AND_ASSIGN(
      const FamilyScores scores, LocalAccuracy(train, test, "v1", noise, kAllFamilies, {}));
  for (const auto& [family, value] : scores) EXPECT_NEAR(value, majority_f1, 0.03);
}

class BnModelFixture : public ::testing::Test {
 protected:
  void SetUp() override {
    splits_ = SmallSplits(9);
    network_ = bn::RandomNetwork({.num_nodes = 7, .edge_probability = 0.5}, 9);
    model_ = std::make_unique<models::BnClassifier>(network_, 3);
    config_.explain.target_name = splits_.target;
    config_.explain.perturbation.sample_count = 1500;
    config_.classifiers.forest.trees = 10;
  }
  Splits splits_;
  bn::BayesianNetwork network_;
  std::unique_ptr<models::BnClassifier> model_;
  BenchmarkConfig config_;
};

TEST_F(BnModelFixture, SingleRunReport) {
  config_.repetitions = 1;
  LAPLACE_ASSERT_OK_AND_ASSIGN(const RunReport report,
                               RunBenchmark(splits_.train, splits_.test, *model_, config_));
  ASSERT_EQ(report.runs.size(), 1);
  EXPECT_EQ(report.failures, 0);
  ASSERT_TRUE(report.consistency_entropy.has_value());
  EXPECT_NEAR(*report.consistency_entropy,
              *ConsistencyEntropy({report.runs[0].features}), 1e-12);
  EXPECT_EQ(report.mean_feature_count, report.runs[0].features.size());
}

TEST_F(BnModelFixture, ReportsAreDeterministicAcrossThreads) {
  config_.repetitions = 6;
  int callbacks = 0;
  LAPLACE_ASSERT_OK_AND_ASSIGN(
      const RunReport serial,
      RunBenchmark(splits_.train, splits_.test, *model_, config_,
                   [&](const RunRecord&, const explain::Explanation* e, const dataset::Dataset* d) {
                     EXPECT_NE(e, nullptr);
                     EXPECT_NE(d, nullptr);
                     ++callbacks;
                   }));
  EXPECT_EQ(callbacks, 6);
  config_.threads = 3;
  LAPLACE_ASSERT_OK_AND_ASSIGN(const RunReport parallel,
                               RunBenchmark(splits_.train, splits_.test, *model_, config_));
  EXPECT_EQ(ReportToJson(serial).dump(), ReportToJson(parallel).dump());
  for (int i = 0; i < 6; ++i) EXPECT_EQ(serial.runs[i].test_row, i % splits_.test.num_rows());
  for (const auto& [family, summary] : serial.f1) {
    EXPECT_GE(summary.mean, 0);
    EXPECT_LE(summary.mean, 1);
    EXPECT_LE(summary.mean, serial.full_feature_f1.at(family) + 0.02);
  }
}

TEST_F(BnModelFixture, FeatureSetsFlowThroughFragments) {
  config_.repetitions = 4;
  LAPLACE_ASSERT_OK_AND_ASSIGN(const RunReport report,
                               RunBenchmark(splits_.train, splits_.test, *model_, config_));
  std::vector<std::string> schema;
  for (const auto& name : splits_.train.VariableNames()) {
    if (name != splits_.target) schema.push_back(name);
  }
  LAPLACE_ASSERT_OK_AND_ASSIGN(const auto sets,
                               FeatureSetsFromJson(ReportToJson(report), schema));
  LAPLACE_ASSERT_OK_AND_ASSIGN(const RunReport again,
                               EvaluateFeatureSets(splits_.train, splits_.test, sets, config_));
  EXPECT_EQ(again.consistency_entropy, report.consistency_entropy);
  for (const auto& [family, summary] : report.f1) {
    EXPECT_EQ(again.f1.at(family).mean, summary.mean);
  }

  const nlohmann::json fragment = {
      {"explainer", "LIME"}, {"runs", {{{"features", {schema[0], schema[1]}}}}}};
  LAPLACE_ASSERT_OK_AND_ASSIGN(const auto parsed, FeatureSetsFromJson(fragment, schema));
  EXPECT_EQ(parsed.size(), 1);
  const nlohmann::json bad = {{"runs", {{{"features", {"ghost"}}}}}};
  const auto rejected = FeatureSetsFromJson(bad, schema);
  ASSERT_FALSE(rejected.ok());
  EXPECT_THAT(rejected.status().message(), HasSubstr("ghost"));
  EXPECT_FALSE(FeatureSetsFromJson(nlohmann::json{{"runs", nlohmann::json::array()}}, schema).ok());
}

TEST(Markdown, MirrorsTableLayout) {
  RunReport report;
  report.explainer = "LaPLACE";
  report.dataset = "alarm";
  report.f1[ClassifierFamily::kRandomForest] = {0.981, 0.002, 100};
  report.mean_feature_count = 5.79;
  report.consistency_entropy = 2.72;
  const std::string markdown = ReportsToMarkdown(std::span(&report, 1));
  EXPECT_THAT(markdown, HasSubstr("| LaPLACE | alarm | 0.981 ± 0.002 | 5.79 |"));
  EXPECT_THAT(markdown, HasSubstr("| LaPLACE | alarm | 2.72 |"));
}

}  // namespace
}  // namespace laplace::eval
