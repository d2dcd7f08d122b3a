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

#include "laplace/perturb.h"

#include <cmath>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "laplace/random_network.h"
#include "test_util.h"

namespace laplace::perturb {
namespace {

using ::testing::HasSubstr;

// Returns the same label for every row.
class ConstantModel : public models::ModelAdapter {
 public:
  ConstantModel(std::vector<std::string> features, std::vector<std::string> labels,
                std::string answer)
      : features_(std::move(features)), labels_(std::move(labels)), answer_(std::move(answer)) {}
  absl::StatusOr<std::vector<std::string>> PredictBatch(
      const dataset::Dataset& data) const override {
    if (fail_) return absl::UnavailableError("backend down");
    return std::vector<std::string>(data.num_rows(), answer_);
  }
  const std::vector<std::string>& feature_names() const override { return features_; }
  const std::vector<std::string>& labels() const override { return labels_; }
  std::string type() const override { return "constant"; }
  bool fail_ = false;

 private:
  std::vector<std::string> features_;
  std::vector<std::string> labels_;
  std::string answer_;
};

dataset::Dataset Training() {
  const auto network = bn::RandomNetwork({.num_nodes = 4, .cardinality = 3}, 77);
  return bn::ForwardSample(network, 2000, 1);
}

TEST(Perturb, RhoZeroCopiesTheInstance) {
  const auto train = Training();
  const std::vector<int> instance = train.Row(5);
  PerturbationConfig config;
  config.resample_probability = 0;
  config.sample_count = 300;
  LAPLACE_ASSERT_OK_AND_ASSIGN(
      const auto rows,
      Perturb(instance, train.variables(), dataset::ComputeFrequencyTable(train), config));
  EXPECT_EQ(rows.num_rows(), 300);
  for (int64_t r = 0; r < rows.num_rows(); ++r) EXPECT_EQ(rows.Row(r), instance);
}

TEST(Perturb, RhoOneMatchesMarginals) {
  const auto train = Training();
  const auto frequencies = dataset::ComputeFrequencyTable(train);
  PerturbationConfig config;
  config.resample_probability = 1;
  config.sample_count = 100000;
  LAPLACE_ASSERT_OK_AND_ASSIGN(
      const auto rows, Perturb(train.Row(0), train.variables(), frequencies, config));
  const auto observed = dataset::ComputeFrequencyTable(rows);
  for (int f = 0; f < train.num_variables(); ++f) {
    double variation = 0;
    for (size_t s = 0; s < observed.probabilities[f].size(); ++s) {
      variation += std::abs(observed.probabilities[f][s] - frequencies.probabilities[f][s]);
    }
    EXPECT_LE(variation / 2, 0.01);
  }
}

TEST(Perturb, HalfRhoHammingDistance) {
  const auto train = Training();
  const auto frequencies = dataset::ComputeFrequencyTable(train);
  const std::vector<int> instance = train.Row(3);
  PerturbationConfig config;
  config.sample_count = 100000;
  LAPLACE_ASSERT_OK_AND_ASSIGN(
      const auto rows, Perturb(instance, train.variables(), frequencies, config));
  for (int f = 0; f < train.num_variables(); ++f) {
    double changed = 0;
    for (int v : rows.column(f)) changed += v != instance[f];
    const double expected = 0.5 * (1 - frequencies.probabilities[f][instance[f]]);
    EXPECT_NEAR(changed / rows.num_rows(), expected, 0.01);
  }
}

TEST(Perturb, OnlyObservedStatesAndDeterministic) {
  auto train = test_util::MakeDataset({4, 2}, {{0, 1}, {2, 0}, {2, 1}});
  const auto frequencies = dataset::ComputeFrequencyTable(train);
  PerturbationConfig config;
  config.resample_probability = 0.9;
  config.sample_count = 2000;
  config.seed = 44;
  LAPLACE_ASSERT_OK_AND_ASSIGN(
      const auto a, Perturb(train.Row(0), train.variables(), frequencies, config));
  LAPLACE_ASSERT_OK_AND_ASSIGN(
      const auto b, Perturb(train.Row(0), train.variables(), frequencies, config));
  EXPECT_EQ(dataset::ToCsv(a), dataset::ToCsv(b));
  for (int v : a.column(0)) EXPECT_TRUE(v == 0 || v == 2);
}

TEST(Perturb, EmptyFrequencyEntryIsAnError) {
  const auto train = test_util::MakeDataset({2, 2}, {{0, 1}, {1, 0}});
  auto frequencies = dataset::ComputeFrequencyTable(train);
  frequencies.probabilities[1] = {0, 0};
  const auto rows = Perturb(train.Row(0), train.variables(), frequencies, {});
  ASSERT_FALSE(rows.ok());
  EXPECT_THAT(rows.status().message(), HasSubstr("v1"));
}

TEST(Label, AppendsModelPredictions) {
  const auto train = test_util::MakeDataset({2, 2}, {{0, 1}, {1, 0}, {1, 1}});
  ConstantModel model({"v0", "v1"}, {"a", "b", "c"}, "b");
  LAPLACE_ASSERT_OK_AND_ASSIGN(const auto labelled, Label(train, model, "y"));
  EXPECT_EQ(labelled.num_variables(), 3);
  EXPECT_EQ(labelled.variable(2).states, model.labels());
  for (int v : labelled.column(2)) EXPECT_EQ(v, 1);
}

TEST(Label, SingleLabelModelGetsSentinelState) {
  const auto train = test_util::MakeDataset({2}, {{0}, {1}});
  ConstantModel model({"v0"}, {"only"}, "only");
  LAPLACE_ASSERT_OK_AND_ASSIGN(const auto labelled, Label(train, model, "y"));
  EXPECT_EQ(labelled.cardinality(1), 2);
  for (int v : labelled.column(1)) EXPECT_EQ(v, 0);
}

TEST(Label, AdapterErrorsPropagateWithContext) {
  const auto train = test_util::MakeDataset({2}, {{0}, {1}});
  ConstantModel model({"v0"}, {"a", "b"}, "a");
  model.fail_ = true;
  const auto labelled = Label(train, model, "y");
  ASSERT_FALSE(labelled.ok());
  EXPECT_EQ(labelled.status().code(), absl::StatusCode::kUnavailable);
  EXPECT_THAT(labelled.status().message(), HasSubstr("2 perturbed rows"));
  ConstantModel rogue({"v0"}, {"a", "b"}, "z");
  EXPECT_FALSE(Label(train, rogue, "y").ok());
}

}  // namespace
}  // namespace laplace::perturb
