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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <set>
#include <thread>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "laplace/random.h"
#include "laplace/status_macros.h"

namespace laplace::eval {
namespace {

using nlohmann::json;

const char* ShortName(ClassifierFamily family) {
  switch (family) {
    case ClassifierFamily::kNaiveBayes:
      return "NB";
    case ClassifierFamily::kRandomForest:
      return "RF";
    case ClassifierFamily::kLinear:
      return "Linear";
  }
  return "?";
}

std::unique_ptr<models::CategoricalClassifier> Train(
    ClassifierFamily family, const dataset::Dataset& data, int target,
    const ClassifierSettings& settings) {
  switch (family) {
    case ClassifierFamily::kNaiveBayes:
      return models::TrainNaiveBayes(data, target, settings.naive_bayes_smoothing);
    case ClassifierFamily::kRandomForest:
      return models::TrainRandomForest(data, target, settings.forest);
    case ClassifierFamily::kLinear:
      return models::TrainLinear(data, target, settings.linear);
  }
  return nullptr;
}

std::vector<std::string> ColumnLabels(const dataset::Dataset& data, int column) {
  const auto& states = data.variable(column).states;
  std::vector<std::string> labels;
  labels.reserve(data.num_rows());
  for (int value : data.column(column)) labels.push_back(states[value]);
  return labels;
}

// Local accuracy memoized on the (sorted) feature set; the classifiers are
// deterministic, so equal sets give equal scores.
class ScoreCache {
 public:
  ScoreCache(const dataset::Dataset& train, const dataset::Dataset& test,
             const BenchmarkConfig& config)
      : train_(train), test_(test), config_(config) {}

  absl::StatusOr<FamilyScores> Score(std::vector<std::string> features) {
    std::sort(features.begin(), features.end());
    {
      std::lock_guard lock(mutex_);
      const auto it = scores_.find(features);
      if (it != scores_.end()) return it->second;
    }
    ASSIGN_OR_RETURN(FamilyScores scores,
                     LocalAccuracy(train_, test_, config_.explain.target_name,
                                   features, config_.families,
                                   config_.classifiers));
    std::lock_guard lock(mutex_);
    scores_.emplace(std::move(features), scores);
    return scores;
  }

 private:
  const dataset::Dataset& train_;
  const dataset::Dataset& test_;
  const BenchmarkConfig& config_;
  std::mutex mutex_;
  std::map<std::vector<std::string>, FamilyScores> scores_;
};

json ScoresToJson(const FamilyScores& scores) {
  json object = json::object();
  for (const auto& [family, value] : scores) object[FamilyName(family)] = value;
  return object;
}

json BenchmarkConfigToJson(const BenchmarkConfig& config) {
  json object = explain::ConfigToJson(config.explain);
  object.erase("seed");
  object["repetitions"] = config.repetitions;
  object["seed"] = config.seed;
  json families = json::array();
  for (auto family : config.families) families.push_back(FamilyName(family));
  object["families"] = families;
  object["naive_bayes_smoothing"] = config.classifiers.naive_bayes_smoothing;
  object["forest"] = {{"trees", config.classifiers.forest.trees},
                      {"max_depth", config.classifiers.forest.max_depth},
                      {"seed", config.classifiers.forest.seed}};
  object["linear"] = {{"l2", config.classifiers.linear.l2},
                      {"epochs", config.classifiers.linear.epochs},
                      {"batch_size", config.classifiers.linear.batch_size},
                      {"learning_rate", config.classifiers.linear.learning_rate},
                      {"seed", config.classifiers.linear.seed}};
  return object;
}

absl::Status CheckSplits(const dataset::Dataset& train,
                         const dataset::Dataset& test, const std::string& target) {
  if (train.variables() != test.variables()) {
    return absl::InvalidArgumentError("train and test schemas differ");
  }
  if (!train.VariableIndex(target)) {
    return absl::InvalidArgumentError(
        absl::StrCat("no target column '", target, "'"));
  }
  if (train.num_rows() == 0 || test.num_rows() == 0) {
    return absl::InvalidArgumentError("train and test splits must be non-empty");
  }
  return absl::OkStatus();
}

void Summarize(RunReport& report, const BenchmarkConfig& config) {
  report.failures = 0;
  std::map<ClassifierFamily, std::vector<double>> values;
  std::vector<std::vector<std::string>> sets;
  int explained = 0;
  double feature_total = 0;
  for (const auto& run : report.runs) {
    if (!run.ok()) ++report.failures;
    if (run.explained) {
      ++explained;
      feature_total += run.features.size();
      sets.push_back(run.features);
    }
    for (const auto& [family, value] : run.f1) values[family].push_back(value);
  }
  report.f1.clear();
  for (auto family : config.families) {
    const auto& list = values[family];
    Summary summary;
    summary.count = static_cast<int>(list.size());
    if (!list.empty()) {
      double sum = 0;
      for (double v : list) sum += v;
      summary.mean = sum / list.size();
      double squares = 0;
      for (double v : list) squares += (v - summary.mean) * (v - summary.mean);
      summary.std_dev = std::sqrt(squares / list.size());
    }
    report.f1[family] = summary;
  }
  report.mean_feature_count = explained > 0 ? feature_total / explained : 0;
  auto entropy = ConsistencyEntropy(sets);
  report.consistency_entropy =
      entropy.ok() ? std::optional<double>(*entropy) : std::nullopt;
}

}  // namespace

double WeightedF1(std::span<const int> predicted, std::span<const int> actual) {
  const size_t n = std::min(predicted.size(), actual.size());
  if (n == 0) return 0;
  std::map<int, std::array<int64_t, 3>> counts;  // true pos, false pos, support
  for (size_t i = 0; i < n; ++i) {
    if (predicted[i] == actual[i]) {
      ++counts[actual[i]][0];
    } else {
      ++counts[predicted[i]][1];
    }
    ++counts[actual[i]][2];
  }
  double total = 0;
  for (const auto& [label, c] : counts) {
    const auto [tp, fp, support] = c;
    if (support == 0 || tp == 0) continue;
    const double precision = static_cast<double>(tp) / (tp + fp);
    const double recall = static_cast<double>(tp) / support;
    total += support * (2 * precision * recall / (precision + recall));
  }
  return total / n;
}

double WeightedF1(std::span<const std::string> predicted,
                  std::span<const std::string> actual) {
  std::map<std::string_view, int> ids;
  auto encode = [&](std::span<const std::string> labels) {
    std::vector<int> encoded;
    encoded.reserve(labels.size());
    for (const auto& label : labels) {
      encoded.push_back(ids.emplace(label, static_cast<int>(ids.size())).first->second);
    }
    return encoded;
  };
  const std::vector<int> p = encode(predicted);
  const std::vector<int> a = encode(actual);
  return WeightedF1(std::span<const int>(p), std::span<const int>(a));
}

const char* FamilyName(ClassifierFamily family) {
  switch (family) {
    case ClassifierFamily::kNaiveBayes:
      return "naive_bayes";
    case ClassifierFamily::kRandomForest:
      return "random_forest";
    case ClassifierFamily::kLinear:
      return "linear";
  }
  return "unknown";
}

std::optional<ClassifierFamily> ParseFamily(std::string_view name) {
  for (auto family : kAllFamilies) {
    if (name == FamilyName(family) || name == ShortName(family)) return family;
  }
  if (name == "nb") return ClassifierFamily::kNaiveBayes;
  if (name == "rf") return ClassifierFamily::kRandomForest;
  return std::nullopt;
}

absl::StatusOr<FamilyScores> LocalAccuracy(
    const dataset::Dataset& train, const dataset::Dataset& test,
    const std::string& target, std::span<const std::string> features,
    std::span<const ClassifierFamily> families,
    const ClassifierSettings& settings) {
  if (features.empty()) {
    return absl::InvalidArgumentError("empty feature set: nothing to train on");
  }
  const auto train_target = train.VariableIndex(target);
  const auto test_target = test.VariableIndex(target);
  if (!train_target || !test_target) {
    return absl::InvalidArgumentError(absl::StrCat("no target column '", target, "'"));
  }
  std::vector<int> columns;
  for (const auto& name : features) {
    const auto column = train.VariableIndex(name);
    if (!column || name == target) {
      return absl::InvalidArgumentError(absl::StrCat("unknown feature '", name, "'"));
    }
    if (std::find(columns.begin(), columns.end(), *column) != columns.end()) {
      return absl::InvalidArgumentError(absl::StrCat("duplicate feature '", name, "'"));
    }
    columns.push_back(*column);
  }
  std::sort(columns.begin(), columns.end());
  columns.push_back(*train_target);
  const dataset::Dataset restricted = train.SelectColumns(columns);
  const int target_column = restricted.num_variables() - 1;
  const std::vector<std::string> actual = ColumnLabels(test, *test_target);

  FamilyScores scores;
  for (auto family : families) {
    const auto classifier = Train(family, restricted, target_column, settings);
    ASSIGN_OR_RETURN(const std::vector<std::string> predicted,
                     classifier->PredictBatch(test));
    scores[family] = WeightedF1(std::span<const std::string>(predicted),
                                std::span<const std::string>(actual));
  }
  return scores;
}

absl::StatusOr<double> ConsistencyEntropy(
    const std::vector<std::vector<std::string>>& feature_sets) {
  std::map<std::string_view, int64_t> counts;
  int64_t total = 0;
  for (const auto& set : feature_sets) {
    for (const auto& feature : set) {
      ++counts[feature];
      ++total;
    }
  }
  if (total == 0) {
    return absl::InvalidArgumentError("all feature sets are empty");
  }
  double entropy = 0;
  for (const auto& [feature, count] : counts) {
    const double p = static_cast<double>(count) / total;
    entropy -= p * std::log2(p);
  }
  return entropy;
}

std::vector<std::vector<std::string>> RandomFeatureSets(
    const std::vector<std::string>& features, int k, int count, uint64_t seed) {
  const int size = std::clamp(k, 0, static_cast<int>(features.size()));
  std::vector<std::vector<std::string>> sets;
  for (int i = 0; i < count; ++i) {
    Rng rng(DeriveSeed(seed, i));
    std::vector<int> order(features.size());
    for (size_t f = 0; f < order.size(); ++f) order[f] = static_cast<int>(f);
    rng.Shuffle(order);
    order.resize(size);
    std::sort(order.begin(), order.end());
    std::vector<std::string> set;
    for (int f : order) set.push_back(features[f]);
    sets.push_back(std::move(set));
  }
  return sets;
}

absl::StatusOr<RunReport> RunBenchmark(const dataset::Dataset& train,
                                       const dataset::Dataset& test,
                                       const models::ModelAdapter& model,
                                       const BenchmarkConfig& config,
                                       const RunCallback& callback) {
  if (config.repetitions < 1) {
    return absl::InvalidArgumentError("repetitions must be >= 1");
  }
  const std::string& target = config.explain.target_name;
  RETURN_IF_ERROR(CheckSplits(train, test, target));

  RunReport report;
  report.explainer = config.explainer;
  report.dataset = config.dataset;
  report.config = BenchmarkConfigToJson(config);
  ScoreCache cache(train, test, config);
  std::vector<std::string> all_features;
  for (const auto& name : train.VariableNames()) {
    if (name != target) all_features.push_back(name);
  }
  ASSIGN_OR_RETURN(report.full_feature_f1, cache.Score(all_features));

  const int workers = model.concurrency_safe()
                          ? std::clamp(config.threads, 1, config.repetitions)
                          : 1;
  report.runs.resize(config.repetitions);
  std::mutex callback_mutex;
  std::atomic<int> next{0};
  auto work = [&] {
    for (int i = next++; i < config.repetitions; i = next++) {
      RunRecord& record = report.runs[i];
      record.run = i;
      record.test_row = i % test.num_rows();
      record.seed = DeriveSeed(config.seed, i);
      explain::ExplainConfig explain_config = config.explain;
      explain_config.perturbation.seed = record.seed;
      if (workers > 1) explain_config.blanket.threads = 1;
      dataset::Dataset neighbourhood;
      const std::vector<int> instance = test.Row(record.test_row);
      auto explanation =
          explain::Explain(model, instance, train, explain_config, &neighbourhood);
      if (!explanation.ok()) {
        record.error = explanation.status().ToString();
      } else {
        record.explained = true;
        record.features = explanation->BlanketNames();
        record.predicted_class = explanation->predicted_class;
        record.explained_class = explanation->explained_class;
        auto scores = cache.Score(record.features);
        if (scores.ok()) {
          record.f1 = *std::move(scores);
        } else {
          record.error = absl::StrCat("local accuracy: ", scores.status().message());
        }
      }
      if (callback) {
        std::lock_guard lock(callback_mutex);
        callback(record, explanation.ok() ? &*explanation : nullptr,
                 explanation.ok() ? &neighbourhood : nullptr);
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  Summarize(report, config);
  return report;
}

absl::StatusOr<RunReport> EvaluateFeatureSets(
    const dataset::Dataset& train, const dataset::Dataset& test,
    const std::vector<std::vector<std::string>>& feature_sets,
    const BenchmarkConfig& config) {
  if (feature_sets.empty()) {
    return absl::InvalidArgumentError("no feature sets");
  }
  RETURN_IF_ERROR(CheckSplits(train, test, config.explain.target_name));
  RunReport report;
  report.explainer = config.explainer;
  report.dataset = config.dataset;
  report.config = BenchmarkConfigToJson(config);
  report.config["repetitions"] = feature_sets.size();
  ScoreCache cache(train, test, config);
  std::vector<std::string> all_features;
  for (const auto& name : train.VariableNames()) {
    if (name != config.explain.target_name) all_features.push_back(name);
  }
  ASSIGN_OR_RETURN(report.full_feature_f1, cache.Score(all_features));
  for (size_t i = 0; i < feature_sets.size(); ++i) {
    RunRecord record;
    record.run = static_cast<int>(i);
    record.explained = true;
    record.features = feature_sets[i];
    auto scores = cache.Score(record.features);
    if (scores.ok()) {
      record.f1 = *std::move(scores);
    } else {
      record.error = absl::StrCat("local accuracy: ", scores.status().message());
    }
    report.runs.push_back(std::move(record));
  }
  Summarize(report, config);
  return report;
}

json ReportToJson(const RunReport& report) {
  json runs = json::array();
  for (const auto& run : report.runs) {
    json entry = {{"run", run.run},
                  {"test_row", run.test_row},
                  {"seed", run.seed},
                  {"explained", run.explained},
                  {"features", run.features},
                  {"predicted_class", run.predicted_class},
                  {"explained_class", run.explained_class},
                  {"f1", ScoresToJson(run.f1)}};
    if (!run.ok()) entry["error"] = run.error;
    runs.push_back(std::move(entry));
  }
  json f1 = json::object();
  for (const auto& [family, summary] : report.f1) {
    f1[FamilyName(family)] = {{"mean", summary.mean},
                              {"std", summary.std_dev},
                              {"count", summary.count}};
  }
  return json{
      {"explainer", report.explainer},
      {"dataset", report.dataset},
      {"repetitions", report.runs.size()},
      {"failures", report.failures},
      {"mean_feature_count", report.mean_feature_count},
      {"consistency_entropy", report.consistency_entropy
                                  ? json(*report.consistency_entropy)
                                  : json(nullptr)},
      {"f1", f1},
      {"full_feature_f1", ScoresToJson(report.full_feature_f1)},
      {"config", report.config},
      {"runs", runs},
  };
}

absl::StatusOr<std::vector<std::vector<std::string>>> FeatureSetsFromJson(
    const json& object, const std::vector<std::string>& schema) {
  if (!object.is_object() || !object.contains("runs") || !object["runs"].is_array()) {
    return absl::InvalidArgumentError("expected an object with a 'runs' array");
  }
  const std::set<std::string, std::less<>> known(schema.begin(), schema.end());
  std::vector<std::vector<std::string>> sets;
  const json& runs = object["runs"];
  for (size_t i = 0; i < runs.size(); ++i) {
    const std::string where = absl::StrCat("runs[", i, "].features");
    if (!runs[i].is_object() || !runs[i].contains("features") ||
        !runs[i]["features"].is_array()) {
      return absl::InvalidArgumentError(absl::StrCat(where, ": missing"));
    }
    std::vector<std::string> set;
    for (const auto& feature : runs[i]["features"]) {
      if (!feature.is_string()) {
        return absl::InvalidArgumentError(absl::StrCat(where, ": non-string entry"));
      }
      const std::string name = feature.get<std::string>();
      if (!known.contains(name)) {
        return absl::InvalidArgumentError(
            absl::StrCat(where, ": unknown feature '", name, "'"));
      }
      if (std::find(set.begin(), set.end(), name) != set.end()) {
        return absl::InvalidArgumentError(
            absl::StrCat(where, ": duplicate feature '", name, "'"));
      }
      set.push_back(name);
    }
    sets.push_back(std::move(set));
  }
  if (sets.empty()) {
    return absl::InvalidArgumentError("'runs' is empty");
  }
  return sets;
}

std::string ReportsToMarkdown(std::span<const RunReport> reports) {
  std::vector<ClassifierFamily> families;
  for (auto family : kAllFamilies) {
    for (const auto& report : reports) {
      if (report.f1.contains(family)) {
        families.push_back(family);
        break;
      }
    }
  }
  std::string out = "| Explainer | Dataset |";
  for (auto family : families) absl::StrAppend(&out, " ", ShortName(family), " |");
  absl::StrAppend(&out, " Avg. # explained features |\n|---|---|");
  for (size_t i = 0; i < families.size(); ++i) absl::StrAppend(&out, "---|");
  absl::StrAppend(&out, "---|\n");
  for (const auto& report : reports) {
    absl::StrAppend(&out, "| ", report.explainer, " | ", report.dataset, " |");
    for (auto family : families) {
      const auto it = report.f1.find(family);
      if (it == report.f1.end() || it->second.count == 0) {
        absl::StrAppend(&out, " n/a |");
      } else {
        absl::StrAppend(&out, absl::StrFormat(" %.3f ± %.3f |", it->second.mean,
                                              it->second.std_dev));
      }
    }
    absl::StrAppend(&out, absl::StrFormat(" %.2f |\n", report.mean_feature_count));
  }
  absl::StrAppend(&out, "\n| Explainer | Dataset | Consistency (entropy) |\n|---|---|---|\n");
  for (const auto& report : reports) {
    absl::StrAppend(&out, "| ", report.explainer, " | ", report.dataset, " | ",
                    report.consistency_entropy
                        ? absl::StrFormat("%.2f", *report.consistency_entropy)
                        : std::string("n/a"),
                    " |\n");
  }
  return out;
}

}  // namespace laplace::eval
