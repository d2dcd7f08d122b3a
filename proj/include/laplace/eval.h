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

#ifndef LAPLACE_EVAL_H_
#define LAPLACE_EVAL_H_

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "laplace/dataset.h"
#include "laplace/explain.h"
#include "laplace/models.h"

namespace laplace::eval {

// Support-weighted mean of per-class F1 over the classes present in either
// vector. A class with no predicted or no actual members has F1 0.
double WeightedF1(std::span<const std::string> predicted,
                  std::span<const std::string> actual);
double WeightedF1(std::span<const int> predicted, std::span<const int> actual);

enum class ClassifierFamily { kNaiveBayes, kRandomForest, kLinear };
inline constexpr std::array<ClassifierFamily, 3> kAllFamilies = {
    ClassifierFamily::kNaiveBayes, ClassifierFamily::kRandomForest,
    ClassifierFamily::kLinear};
const char* FamilyName(ClassifierFamily family);
std::optional<ClassifierFamily> ParseFamily(std::string_view name);

struct ClassifierSettings {
  double naive_bayes_smoothing = bn::kDefaultSmoothing;
  models::RandomForestOptions forest;
  models::LinearOptions linear;
};

using FamilyScores = std::map<ClassifierFamily, double>;

// Retrains each family on `train` restricted to `features` (plus the target)
// and scores it on `test`'s true labels.
absl::StatusOr<FamilyScores> LocalAccuracy(
    const dataset::Dataset& train, const dataset::Dataset& test,
    const std::string& target, std::span<const std::string> features,
    std::span<const ClassifierFamily> families,
    const ClassifierSettings& settings);

// Shannon entropy (bits) of feature occurrences pooled over all sets.
absl::StatusOr<double> ConsistencyEntropy(
    const std::vector<std::vector<std::string>>& feature_sets);

// `count` sets of `k` features drawn uniformly without replacement; set i
// uses a generator derived from (seed, i). Each set keeps schema order.
std::vector<std::vector<std::string>> RandomFeatureSets(
    const std::vector<std::string>& features, int k, int count, uint64_t seed);

struct BenchmarkConfig {
  explain::ExplainConfig explain;
  int repetitions = 100;
  uint64_t seed = 1;
  std::vector<ClassifierFamily> families{kAllFamilies.begin(), kAllFamilies.end()};
  ClassifierSettings classifiers;
  // Concurrent runs; only used when the model is concurrency-safe.
  int threads = 1;
  std::string explainer = "LaPLACE";
  std::string dataset = "data";
};

struct RunRecord {
  int run = 0;
  int64_t test_row = 0;
  uint64_t seed = 0;
  bool explained = false;
  std::vector<std::string> features;
  std::string predicted_class;
  std::string explained_class;
  FamilyScores f1;
  // Empty on success.
  std::string error;

  bool ok() const { return error.empty(); }
};

struct Summary {
  double mean = 0;
  double std_dev = 0;  // population
  int count = 0;
};

struct RunReport {
  std::string explainer;
  std::string dataset;
  std::vector<RunRecord> runs;
  std::map<ClassifierFamily, Summary> f1;
  FamilyScores full_feature_f1;
  double mean_feature_count = 0;
  std::optional<double> consistency_entropy;
  int failures = 0;
  nlohmann::json config;
};

// Called once per run, in no particular order, with the explanation and its
// labelled neighbourhood when the explain step succeeded.
using RunCallback =
    std::function<void(const RunRecord&, const explain::Explanation*,
                       const dataset::Dataset*)>;

// `repetitions` explanations of test rows taken round-robin, run i seeded with
// DeriveSeed(seed, i). Failed runs are recorded in the report.
absl::StatusOr<RunReport> RunBenchmark(const dataset::Dataset& train,
                                       const dataset::Dataset& test,
                                       const models::ModelAdapter& model,
                                       const BenchmarkConfig& config,
                                       const RunCallback& callback = nullptr);

// Report for feature sets produced elsewhere, scored exactly as RunBenchmark
// scores its own runs.
absl::StatusOr<RunReport> EvaluateFeatureSets(
    const dataset::Dataset& train, const dataset::Dataset& test,
    const std::vector<std::vector<std::string>>& feature_sets,
    const BenchmarkConfig& config);

nlohmann::json ReportToJson(const RunReport& report);

// Feature sets of a report or report fragment ({"runs": [{"features": [..]}]}).
// Every name must be one of `schema`.
absl::StatusOr<std::vector<std::vector<std::string>>> FeatureSetsFromJson(
    const nlohmann::json& json, const std::vector<std::string>& schema);

// Local-accuracy and consistency tables, one row per report.
std::string ReportsToMarkdown(std::span<const RunReport> reports);

}  // namespace laplace::eval

#endif  // LAPLACE_EVAL_H_
