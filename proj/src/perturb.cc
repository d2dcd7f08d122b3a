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

#include <algorithm>
#include <map>

#include "absl/strings/str_cat.h"
#include "laplace/random.h"

namespace laplace::perturb {

absl::StatusOr<dataset::Dataset> Perturb(
    std::span<const int> instance, const std::vector<dataset::Variable>& schema,
    const dataset::FrequencyTable& frequencies, const PerturbationConfig& config) {
  const size_t n = schema.size();
  if (instance.size() != n || frequencies.probabilities.size() != n) {
    return absl::InvalidArgumentError(
        absl::StrCat("instance has ", instance.size(), " values, frequency table ",
                     frequencies.probabilities.size(), ", schema ", n));
  }
  if (config.sample_count < 1) {
    return absl::InvalidArgumentError("sample count must be >= 1");
  }
  if (!(config.resample_probability >= 0 && config.resample_probability <= 1)) {
    return absl::InvalidArgumentError("resample probability must be in [0, 1]");
  }
  for (size_t f = 0; f < n; ++f) {
    const auto& p = frequencies.probabilities[f];
    if (instance[f] < 0 || instance[f] >= schema[f].cardinality()) {
      return absl::InvalidArgumentError(
          absl::StrCat("feature '", schema[f].name, "': invalid state ", instance[f]));
    }
    if (p.size() != static_cast<size_t>(schema[f].cardinality()) ||
        std::none_of(p.begin(), p.end(), [](double q) { return q > 0; })) {
      return absl::FailedPreconditionError(absl::StrCat(
          "feature '", schema[f].name, "' has no frequency entry to sample from"));
    }
  }

  std::vector<std::vector<int>> columns(n, std::vector<int>(config.sample_count));
  Rng rng(config.seed);
  for (int64_t r = 0; r < config.sample_count; ++r) {
    for (size_t f = 0; f < n; ++f) {
      columns[f][r] = rng.Bernoulli(config.resample_probability)
                          ? rng.Categorical(frequencies.probabilities[f])
                          : instance[f];
    }
  }
  return dataset::Dataset(schema, std::move(columns), config.sample_count);
}

dataset::Variable TargetVariable(const models::ModelAdapter& model,
                                 const std::string& target_name) {
  dataset::Variable target{target_name, model.labels()};
  if (target.cardinality() < 2) {
    target.states.emplace_back(dataset::kSentinelState);
  }
  return target;
}

absl::StatusOr<dataset::Dataset> Label(const dataset::Dataset& perturbed,
                                       const models::ModelAdapter& model,
                                       const std::string& target_name) {
  if (perturbed.VariableIndex(target_name)) {
    return absl::InvalidArgumentError(
        absl::StrCat("perturbed data already has a column '", target_name, "'"));
  }
  auto predictions = model.PredictBatch(perturbed);
  if (!predictions.ok()) {
    return absl::Status(
        predictions.status().code(),
        absl::StrCat("labelling ", perturbed.num_rows(), " perturbed rows: ",
                     predictions.status().message()));
  }
  if (static_cast<int64_t>(predictions->size()) != perturbed.num_rows()) {
    return absl::UnavailableError(
        absl::StrCat("model returned ", predictions->size(), " labels for ",
                     perturbed.num_rows(), " rows"));
  }
  dataset::Variable target = TargetVariable(model, target_name);
  std::map<std::string_view, int> index;
  for (int s = 0; s < target.cardinality(); ++s) index[target.states[s]] = s;
  std::vector<int> values(predictions->size());
  for (size_t r = 0; r < predictions->size(); ++r) {
    const auto it = index.find((*predictions)[r]);
    if (it == index.end()) {
      return absl::UnavailableError(
          absl::StrCat("row ", r, ": model emitted undeclared label '",
                       (*predictions)[r], "'"));
    }
    values[r] = it->second;
  }
  return perturbed.WithColumn(std::move(target), std::move(values));
}

}  // namespace laplace::perturb
