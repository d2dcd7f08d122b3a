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

#ifndef LAPLACE_INFERENCE_H_
#define LAPLACE_INFERENCE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "laplace/bayes_net.h"

namespace laplace::bn {

// Evidence is one entry per network node: a state index, or kUnobserved.
inline constexpr int kUnobserved = -1;
using Evidence = std::vector<int>;

// Above this many joint completions Posterior() switches from enumeration to
// variable elimination.
inline constexpr int64_t kEnumerationLimit = int64_t{1} << 20;

// Posteriors this close are treated as tied (they arise from exact ties that
// were summed in different orders).
inline constexpr double kTieTolerance = 1e-12;

enum class InferenceMethod { kAuto, kEnumeration, kVariableElimination };

// P(target | evidence). Nodes that are not ancestors of the target or of an
// observed node sum to one and are skipped. Fails when the evidence has zero
// probability.
absl::StatusOr<std::vector<double>> Posterior(
    const BayesianNetwork& network, int target, const Evidence& evidence,
    InferenceMethod method = InferenceMethod::kAuto);

// Index of the largest entry; ties (within kTieTolerance) go to the lowest
// index.
int ArgMax(std::span<const double> values);

absl::StatusOr<int> MpeClass(const BayesianNetwork& network, int target,
                             const Evidence& evidence);

}  // namespace laplace::bn

#endif  // LAPLACE_INFERENCE_H_
