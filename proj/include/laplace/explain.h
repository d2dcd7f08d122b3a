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

#ifndef LAPLACE_EXPLAIN_H_
#define LAPLACE_EXPLAIN_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "laplace/bayes_net.h"
#include "laplace/dataset.h"
#include "laplace/inference.h"
#include "laplace/markov_blanket.h"
#include "laplace/models.h"
#include "laplace/perturb.h"
#include "laplace/structure_learning.h"

namespace laplace::explain {

struct ExplainConfig {
  // Name of the class column; dropped from the training data if present.
  std::string target_name = "target";
  perturb::PerturbationConfig perturbation;
  mb::IpcMbOptions blanket;
  bn::StructureLearningOptions structure;
  double smoothing = bn::kDefaultSmoothing;
  // Feature names reported in Explanation::flagged_sensitive when they end up
  // in the blanket.
  std::vector<std::string> sensitive;
};

nlohmann::json ConfigToJson(const ExplainConfig& config);
absl::StatusOr<ExplainConfig> ConfigFromJson(const nlohmann::json& json);

struct Explanation {
  std::string target_name;
  // Instance over the features, as state labels of the training schema.
  std::vector<std::string> feature_names;
  std::vector<std::string> instance;
  // Values as they appeared before discretization; equal to `instance` when
  // the caller does not supply them.
  std::vector<std::string> instance_original;
  // Blanket members by name, ascending feature order.
  std::vector<std::string> parents_children;
  std::vector<std::string> spouses;
  // Blanket members followed by the target as the last node.
  bn::BayesianNetwork network;
  // P(target | blanket values of the instance), one entry per target state.
  std::vector<double> posterior;
  std::string predicted_class;
  std::string explained_class;
  std::vector<std::string> flagged_sensitive;
  ExplainConfig config;

  std::vector<std::string> BlanketNames() const;
  int target_node() const { return network.num_nodes() - 1; }
  // Evidence over the network nodes taken from the instance.
  bn::Evidence InstanceEvidence() const;
};

// Local explanation of `model` at `instance` (one state index per column of
// `train`, including the target column if `train` has one). The labelled
// neighbourhood is copied to `neighbourhood` when given; its last column is
// the target.
absl::StatusOr<Explanation> Explain(const models::ModelAdapter& model,
                                    std::span<const int> instance,
                                    const dataset::Dataset& train,
                                    const ExplainConfig& config,
                                    dataset::Dataset* neighbourhood = nullptr);

// Share of rows of `labelled` (features plus a target column) on which the
// explanation's most probable class matches the recorded label.
absl::StatusOr<double> LocalFidelity(const Explanation& explanation,
                                     const dataset::Dataset& labelled);

// Same, labelling `perturbed` with `model` first.
absl::StatusOr<double> LocalFidelity(const Explanation& explanation,
                                     const models::ModelAdapter& model,
                                     const dataset::Dataset& perturbed);

// Share of rows of `labelled` on which the most probable class given the
// target's graph blanket in the explanation network equals the most probable
// class given every other network node.
absl::StatusOr<double> BlanketArgmaxAgreement(const Explanation& explanation,
                                              const dataset::Dataset& labelled);

nlohmann::json ToJson(const Explanation& explanation);
absl::StatusOr<Explanation> FromJson(const nlohmann::json& json);
std::string ExportJson(const Explanation& explanation);
// DOT graph of the explanation network; sensitive blanket members are
// highlighted.
std::string ExportDot(const Explanation& explanation);

}  // namespace laplace::explain

#endif  // LAPLACE_EXPLAIN_H_
