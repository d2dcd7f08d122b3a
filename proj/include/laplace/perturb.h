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

#ifndef LAPLACE_PERTURB_H_
#define LAPLACE_PERTURB_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "laplace/dataset.h"
#include "laplace/models.h"

namespace laplace::perturb {

inline constexpr int64_t kDefaultSampleCount = 5000;
inline constexpr double kDefaultResampleProbability = 0.5;

struct PerturbationConfig {
  int64_t sample_count = kDefaultSampleCount;
  // Chance that a feature is redrawn from its training marginal instead of
  // keeping the instance's value.
  double resample_probability = kDefaultResampleProbability;
  uint64_t seed = 1;
};

// Neighbourhood of `instance`: sample_count rows over `schema`, each feature
// independently redrawn from `frequencies` with the resample probability.
// Only states with non-zero training frequency can be drawn.
absl::StatusOr<dataset::Dataset> Perturb(
    std::span<const int> instance, const std::vector<dataset::Variable>& schema,
    const dataset::FrequencyTable& frequencies, const PerturbationConfig& config);

// Appends a column named `target_name` holding the model's prediction for
// each row. Its states are the model's declared labels.
absl::StatusOr<dataset::Dataset> Label(const dataset::Dataset& perturbed,
                                       const models::ModelAdapter& model,
                                       const std::string& target_name);

// Target variable for a model's label set, padded to two states.
dataset::Variable TargetVariable(const models::ModelAdapter& model,
                                 const std::string& target_name);

}  // namespace laplace::perturb

#endif  // LAPLACE_PERTURB_H_
