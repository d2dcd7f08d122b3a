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

#include <cmath>
#include <limits>

#include "laplace/inference.h"
#include "laplace/models.h"

namespace laplace::models {

NaiveBayesClassifier::NaiveBayesClassifier(
    std::vector<dataset::Variable> features, dataset::Variable target,
    std::vector<double> log_prior,
    std::vector<std::vector<double>> log_likelihood)
    : CategoricalClassifier(std::move(features), std::move(target)),
      log_prior_(std::move(log_prior)),
      log_likelihood_(std::move(log_likelihood)) {}

std::vector<int> NaiveBayesClassifier::PredictEncoded(
    const std::vector<std::span<const int>>& columns, int64_t rows) const {
  const int classes = static_cast<int>(log_prior_.size());
  std::vector<int> out(rows);
  std::vector<double> score(classes);
  for (int64_t r = 0; r < rows; ++r) {
    score = log_prior_;
    for (size_t f = 0; f < columns.size(); ++f) {
      const double* row = &log_likelihood_[f][columns[f][r] * classes];
      for (int c = 0; c < classes; ++c) score[c] += row[c];
    }
    out[r] = bn::ArgMax(score);
  }
  return out;
}

nlohmann::json NaiveBayesClassifier::ToJson() const {
  nlohmann::json out = SchemaJson();
  out["log_prior"] = log_prior_;
  out["log_likelihood"] = log_likelihood_;
  return out;
}

std::unique_ptr<NaiveBayesClassifier> TrainNaiveBayes(
    const dataset::Dataset& data, int target, double smoothing) {
  const TrainingView view = MakeTrainingView(data, target);
  const int classes = view.target.cardinality();
  std::vector<double> class_counts(classes, 0);
  for (int label : view.labels) ++class_counts[label];

  auto safe_log = [](double x) {
    return x > 0 ? std::log(x) : -std::numeric_limits<double>::infinity();
  };
  std::vector<double> log_prior(classes);
  for (int c = 0; c < classes; ++c) {
    log_prior[c] = safe_log((class_counts[c] + smoothing) /
                            (view.rows + smoothing * classes));
  }
  std::vector<std::vector<double>> log_likelihood;
  for (size_t f = 0; f < view.features.size(); ++f) {
    const int states = view.features[f].cardinality();
    std::vector<double> counts(states * classes, 0);
    for (int64_t r = 0; r < view.rows; ++r) {
      ++counts[view.columns[f][r] * classes + view.labels[r]];
    }
    std::vector<double> table(states * classes);
    for (int c = 0; c < classes; ++c) {
      const double denominator = class_counts[c] + smoothing * states;
      for (int s = 0; s < states; ++s) {
        table[s * classes + c] =
            denominator > 0
                ? safe_log((counts[s * classes + c] + smoothing) / denominator)
                : -std::log(static_cast<double>(states));
      }
    }
    log_likelihood.push_back(std::move(table));
  }
  return std::make_unique<NaiveBayesClassifier>(
      view.features, view.target, std::move(log_prior), std::move(log_likelihood));
}

}  // namespace laplace::models
