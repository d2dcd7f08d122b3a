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

#include "laplace/models.h"

#include <algorithm>

#include "absl/strings/str_cat.h"
#include "laplace/inference.h"
#include "laplace/status_macros.h"

namespace laplace::models {

CategoricalClassifier::CategoricalClassifier(
    std::vector<dataset::Variable> features, dataset::Variable target)
    : features_(std::move(features)), target_(std::move(target)) {
  for (const auto& f : features_) feature_names_.push_back(f.name);
}

absl::StatusOr<std::vector<std::string>> CategoricalClassifier::PredictBatch(
    const dataset::Dataset& data) const {
  // Re-encode columns whose state labels differ from the training schema.
  std::vector<std::vector<int>> remapped(features_.size());
  std::vector<std::span<const int>> columns(features_.size());
  for (size_t f = 0; f < features_.size(); ++f) {
    const auto index = data.VariableIndex(features_[f].name);
    if (!index) {
      return absl::InvalidArgumentError(
          absl::StrCat("input lacks feature '", features_[f].name, "'"));
    }
    const dataset::Variable& given = data.variable(*index);
    if (given.states == features_[f].states) {
      columns[f] = data.column(*index);
      continue;
    }
    std::vector<int> mapping(given.cardinality());
    for (int s = 0; s < given.cardinality(); ++s) {
      const auto state = features_[f].StateIndex(given.states[s]);
      mapping[s] = state.value_or(-1);
    }
    auto& out = remapped[f];
    out.resize(data.num_rows());
    const auto in = data.column(*index);
    for (int64_t r = 0; r < data.num_rows(); ++r) {
      out[r] = mapping[in[r]];
      if (out[r] < 0) {
        return absl::InvalidArgumentError(
            absl::StrCat("row ", r, ", feature '", features_[f].name,
                         "': state '", given.states[in[r]],
                         "' unknown to the model"));
      }
    }
    columns[f] = out;
  }
  const std::vector<int> classes = PredictEncoded(columns, data.num_rows());
  std::vector<std::string> out;
  out.reserve(classes.size());
  for (int c : classes) out.push_back(target_.states[c]);
  return out;
}

nlohmann::json CategoricalClassifier::SchemaJson() const {
  return {{"type", type()},
          {"features", dataset::VariablesToJson(features_)},
          {"target", dataset::VariablesToJson({target_})[0]}};
}

TrainingView MakeTrainingView(const dataset::Dataset& data, int target) {
  TrainingView view;
  for (int c = 0; c < data.num_variables(); ++c) {
    if (c == target) continue;
    view.features.push_back(data.variable(c));
    view.columns.push_back(data.column(c));
  }
  view.target = data.variable(target);
  view.labels = data.column(target);
  view.rows = data.num_rows();
  return view;
}

namespace {

std::vector<dataset::Variable> NonTargetVariables(
    const bn::BayesianNetwork& network, int target) {
  std::vector<dataset::Variable> out;
  for (int v = 0; v < network.num_nodes(); ++v) {
    if (v != target) out.push_back(network.variable(v));
  }
  return out;
}

}  // namespace

BnClassifier::BnClassifier(bn::BayesianNetwork network, int target)
    : CategoricalClassifier(NonTargetVariables(network, target),
                            network.variable(target)),
      network_(std::move(network)),
      target_node_(target) {}

std::vector<int> BnClassifier::PredictEncoded(
    const std::vector<std::span<const int>>& columns, int64_t rows) const {
  // Only the target's blanket matters once every other node is observed.
  const std::vector<int> blanket = bn::DsepBlanket(network_.dag(), target_node_);
  auto feature_of = [&](int node) { return node < target_node_ ? node : node - 1; };
  std::map<std::vector<int>, int> cache;
  std::vector<int> out(rows);
  bn::Evidence evidence(network_.num_nodes(), 0);
  evidence[target_node_] = bn::kUnobserved;
  std::vector<int> key(blanket.size());
  for (int64_t r = 0; r < rows; ++r) {
    for (size_t i = 0; i < blanket.size(); ++i) {
      key[i] = columns[feature_of(blanket[i])][r];
    }
    const auto it = cache.find(key);
    if (it != cache.end()) {
      out[r] = it->second;
      continue;
    }
    for (int v = 0; v < network_.num_nodes(); ++v) {
      if (v != target_node_) evidence[v] = columns[feature_of(v)][r];
    }
    // Zero-probability evidence maps to class 0.
    const auto mpe = bn::MpeClass(network_, target_node_, evidence);
    out[r] = mpe.ok() ? *mpe : 0;
    cache.emplace(key, out[r]);
  }
  return out;
}

nlohmann::json BnClassifier::ToJson() const {
  nlohmann::json out = SchemaJson();
  out["network"] = bn::NetworkToJson(network_);
  out["target_node"] = network_.variable(target_node_).name;
  return out;
}

absl::StatusOr<std::unique_ptr<CategoricalClassifier>> ModelFromJson(
    const nlohmann::json& json) {
  try {
    const std::string type = json.at("type").get<std::string>();
    ASSIGN_OR_RETURN(std::vector<dataset::Variable> features,
                     dataset::VariablesFromJson(json.at("features")));
    ASSIGN_OR_RETURN(std::vector<dataset::Variable> targets,
                     dataset::VariablesFromJson(
                         nlohmann::json::array({json.at("target")})));
    dataset::Variable target = std::move(targets[0]);
    if (type == "naive_bayes") {
      auto prior = json.at("log_prior").get<std::vector<double>>();
      auto likelihood =
          json.at("log_likelihood").get<std::vector<std::vector<double>>>();
      if (prior.size() != static_cast<size_t>(target.cardinality()) ||
          likelihood.size() != features.size()) {
        return absl::InvalidArgumentError("naive_bayes: inconsistent sizes");
      }
      for (size_t f = 0; f < features.size(); ++f) {
        if (likelihood[f].size() !=
            static_cast<size_t>(features[f].cardinality() * target.cardinality())) {
          return absl::InvalidArgumentError("naive_bayes: inconsistent sizes");
        }
      }
      return std::make_unique<NaiveBayesClassifier>(
          std::move(features), std::move(target), std::move(prior),
          std::move(likelihood));
    }
    if (type == "random_forest") {
      std::vector<Tree> trees;
      for (const auto& tree_json : json.at("trees")) {
        Tree tree;
        for (const auto& node : tree_json) {
          TreeNode n{node.at(0).get<int>(), node.at(1).get<int>(),
                     node.at(2).get<int>()};
          tree.push_back(n);
        }
        for (const TreeNode& n : tree) {
          const bool bad_label = n.label < 0 || n.label >= target.cardinality();
          const bool bad_split =
              n.feature >= static_cast<int>(features.size()) ||
              (n.feature >= 0 &&
               (n.first_child < 0 ||
                n.first_child + features[n.feature].cardinality() >
                    static_cast<int>(tree.size())));
          if (bad_label || bad_split) {
            return absl::InvalidArgumentError("random_forest: malformed tree");
          }
        }
        trees.push_back(std::move(tree));
      }
      return std::make_unique<RandomForestClassifier>(
          std::move(features), std::move(target), std::move(trees));
    }
    if (type == "linear") {
      LinearParameters p;
      p.num_classes = target.cardinality();
      p.dim = static_cast<int>(internal::OneHotOffsets(features).back());
      p.weights = json.at("weights").get<std::vector<double>>();
      p.bias = json.at("bias").get<std::vector<double>>();
      if (p.weights.size() != static_cast<size_t>(p.num_classes * p.dim) ||
          p.bias.size() != static_cast<size_t>(p.num_classes)) {
        return absl::InvalidArgumentError("linear: inconsistent sizes");
      }
      return std::make_unique<LinearClassifier>(std::move(features),
                                                std::move(target), std::move(p));
    }
    if (type == "bayesian_network") {
      ASSIGN_OR_RETURN(bn::BayesianNetwork network,
                       bn::NetworkFromJson(json.at("network")));
      const auto node =
          network.NodeIndex(json.at("target_node").get<std::string>());
      if (!node) {
        return absl::InvalidArgumentError("bayesian_network: unknown target");
      }
      return std::make_unique<BnClassifier>(std::move(network), *node);
    }
    return absl::InvalidArgumentError(
        absl::StrCat("unknown model type '", type, "'"));
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("model JSON: ", e.what()));
  }
}

}  // namespace laplace::models
