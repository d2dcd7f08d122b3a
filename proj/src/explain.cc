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

#include "laplace/explain.h"

#include <algorithm>
#include <map>
#include <set>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "laplace/inference.h"
#include "laplace/status_macros.h"

namespace laplace::explain {
namespace {

using nlohmann::json;

template <typename T>
absl::StatusOr<T> Field(const json& object, const char* key) {
  if (!object.is_object() || !object.contains(key)) {
    return absl::InvalidArgumentError(absl::StrCat("missing field '", key, "'"));
  }
  try {
    return object.at(key).get<T>();
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("field '", key, "': ", e.what()));
  }
}

template <typename T>
absl::Status ReadOptional(const json& object, const char* key, T& value) {
  if (!object.contains(key)) return absl::OkStatus();
  ASSIGN_OR_RETURN(value, Field<T>(object, key));
  return absl::OkStatus();
}

// Column of `data` for every network node, the target last.
absl::StatusOr<std::vector<int>> NetworkColumns(const Explanation& explanation,
                                                const dataset::Dataset& data) {
  std::vector<int> columns;
  for (const auto& variable : explanation.network.variables()) {
    const auto column = data.VariableIndex(variable.name);
    if (!column) {
      return absl::InvalidArgumentError(
          absl::StrCat("data has no column '", variable.name, "'"));
    }
    columns.push_back(*column);
  }
  return columns;
}

// Per-row state translation from a data column to the matching network node.
absl::StatusOr<std::vector<std::vector<int>>> StateMaps(
    const Explanation& explanation, const dataset::Dataset& data,
    std::span<const int> columns) {
  std::vector<std::vector<int>> maps;
  for (size_t node = 0; node < columns.size(); ++node) {
    const auto& from = data.variable(columns[node]);
    const auto& to = explanation.network.variable(node);
    std::vector<int> map(from.cardinality(), -1);
    for (int s = 0; s < from.cardinality(); ++s) {
      if (const auto index = to.StateIndex(from.states[s])) map[s] = *index;
    }
    maps.push_back(std::move(map));
  }
  return maps;
}

absl::StatusOr<std::vector<double>> InstancePosterior(
    const bn::Dag& dag, const dataset::Dataset& projected, double smoothing,
    const bn::Evidence& evidence, bn::BayesianNetwork& network) {
  network = bn::FitMle(dag, projected, smoothing);
  const int target = network.num_nodes() - 1;
  auto posterior = bn::Posterior(network, target, evidence);
  if (posterior.ok() || posterior.status().code() != absl::StatusCode::kFailedPrecondition ||
      smoothing >= bn::kDefaultSmoothing) {
    return posterior;
  }
  network = bn::FitMle(dag, projected, bn::kDefaultSmoothing);
  return bn::Posterior(network, target, evidence);
}

}  // namespace

json ConfigToJson(const ExplainConfig& config) {
  return json{
      {"target", config.target_name},
      {"sample_count", config.perturbation.sample_count},
      {"resample_probability", config.perturbation.resample_probability},
      {"seed", config.perturbation.seed},
      {"alpha", config.blanket.ci.alpha},
      {"rows_per_cell", config.blanket.ci.rows_per_cell},
      {"max_conditioning", config.blanket.max_conditioning},
      {"max_parents", config.structure.max_parents},
      {"smoothing", config.smoothing},
      {"sensitive", config.sensitive},
  };
}

absl::StatusOr<ExplainConfig> ConfigFromJson(const json& object) {
  if (!object.is_object()) {
    return absl::InvalidArgumentError("config must be an object");
  }
  ExplainConfig config;
  RETURN_IF_ERROR(ReadOptional(object, "target", config.target_name));
  RETURN_IF_ERROR(
      ReadOptional(object, "sample_count", config.perturbation.sample_count));
  RETURN_IF_ERROR(ReadOptional(object, "resample_probability",
                               config.perturbation.resample_probability));
  RETURN_IF_ERROR(ReadOptional(object, "seed", config.perturbation.seed));
  RETURN_IF_ERROR(ReadOptional(object, "alpha", config.blanket.ci.alpha));
  RETURN_IF_ERROR(
      ReadOptional(object, "rows_per_cell", config.blanket.ci.rows_per_cell));
  RETURN_IF_ERROR(ReadOptional(object, "max_conditioning",
                               config.blanket.max_conditioning));
  RETURN_IF_ERROR(
      ReadOptional(object, "max_parents", config.structure.max_parents));
  RETURN_IF_ERROR(ReadOptional(object, "smoothing", config.smoothing));
  RETURN_IF_ERROR(ReadOptional(object, "sensitive", config.sensitive));
  return config;
}

std::vector<std::string> Explanation::BlanketNames() const {
  std::vector<std::string> names;
  for (int node = 0; node + 1 < network.num_nodes(); ++node) {
    names.push_back(network.variable(node).name);
  }
  return names;
}

bn::Evidence Explanation::InstanceEvidence() const {
  bn::Evidence evidence(network.num_nodes(), bn::kUnobserved);
  for (int node = 0; node + 1 < network.num_nodes(); ++node) {
    const auto& variable = network.variable(node);
    const auto position =
        std::find(feature_names.begin(), feature_names.end(), variable.name);
    if (position == feature_names.end()) continue;
    const auto state = variable.StateIndex(instance[position - feature_names.begin()]);
    if (state) evidence[node] = *state;
  }
  return evidence;
}

absl::StatusOr<Explanation> Explain(const models::ModelAdapter& model,
                                    std::span<const int> instance,
                                    const dataset::Dataset& train,
                                    const ExplainConfig& config,
                                    dataset::Dataset* neighbourhood) {
  if (static_cast<int>(instance.size()) != train.num_variables()) {
    return absl::InvalidArgumentError(
        absl::StrCat("instance has ", instance.size(), " values, training data ",
                     train.num_variables(), " columns"));
  }
  std::vector<int> feature_columns;
  std::vector<int> feature_values;
  for (int c = 0; c < train.num_variables(); ++c) {
    if (train.variable(c).name == config.target_name) continue;
    if (instance[c] < 0 || instance[c] >= train.cardinality(c)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "instance value ", instance[c], " out of range for '",
          train.variable(c).name, "'"));
    }
    feature_columns.push_back(c);
    feature_values.push_back(instance[c]);
  }
  if (feature_columns.empty()) {
    return absl::InvalidArgumentError("training data has no feature columns");
  }
  const dataset::Dataset features = train.SelectColumns(feature_columns);
  const int num_features = features.num_variables();

  const dataset::FrequencyTable frequencies = dataset::ComputeFrequencyTable(features);
  ASSIGN_OR_RETURN(dataset::Dataset perturbed,
                   perturb::Perturb(feature_values, features.variables(),
                                    frequencies, config.perturbation));
  ASSIGN_OR_RETURN(dataset::Dataset labelled,
                   perturb::Label(perturbed, model, config.target_name));
  const int target = num_features;

  const mb::MarkovBlanket blanket = mb::IpcMb(labelled, target, config.blanket);
  std::vector<int> nodes = blanket.Members();
  nodes.push_back(target);
  const dataset::Dataset projected = labelled.SelectColumns(nodes);
  const bn::Dag dag = bn::LearnStructure(projected, config.structure);

  bn::Evidence evidence(nodes.size(), bn::kUnobserved);
  for (size_t i = 0; i + 1 < nodes.size(); ++i) evidence[i] = feature_values[nodes[i]];

  Explanation explanation;
  explanation.target_name = config.target_name;
  explanation.config = config;
  explanation.feature_names = features.VariableNames();
  for (int f = 0; f < num_features; ++f) {
    explanation.instance.push_back(features.variable(f).states[feature_values[f]]);
  }
  explanation.instance_original = explanation.instance;
  for (int node : blanket.pc) {
    explanation.parents_children.push_back(features.variable(node).name);
  }
  for (int node : blanket.spouses) {
    explanation.spouses.push_back(features.variable(node).name);
  }

  ASSIGN_OR_RETURN(explanation.posterior,
                   InstancePosterior(dag, projected, config.smoothing, evidence,
                                     explanation.network));
  const auto& target_states = explanation.network.variable(explanation.target_node()).states;
  explanation.explained_class = target_states[bn::ArgMax(explanation.posterior)];

  std::vector<std::vector<int>> single(num_features);
  for (int f = 0; f < num_features; ++f) single[f] = {feature_values[f]};
  const dataset::Dataset instance_row(features.variables(), std::move(single), 1);
  auto predicted = model.PredictBatch(instance_row);
  if (!predicted.ok()) {
    return absl::Status(predicted.status().code(),
                        absl::StrCat("predicting the instance: ",
                                     predicted.status().message()));
  }
  if (predicted->size() != 1) {
    return absl::UnavailableError("model returned no label for the instance");
  }
  explanation.predicted_class = predicted->front();

  const std::vector<std::string> members = explanation.BlanketNames();
  for (const auto& name : config.sensitive) {
    if (std::find(members.begin(), members.end(), name) != members.end() &&
        std::find(explanation.flagged_sensitive.begin(),
                  explanation.flagged_sensitive.end(),
                  name) == explanation.flagged_sensitive.end()) {
      explanation.flagged_sensitive.push_back(name);
    }
  }
  if (neighbourhood != nullptr) *neighbourhood = std::move(labelled);
  return explanation;
}

absl::StatusOr<double> LocalFidelity(const Explanation& explanation,
                                     const dataset::Dataset& labelled) {
  ASSIGN_OR_RETURN(const std::vector<int> columns,
                   NetworkColumns(explanation, labelled));
  ASSIGN_OR_RETURN(const auto maps, StateMaps(explanation, labelled, columns));
  if (labelled.num_rows() == 0) {
    return absl::InvalidArgumentError("no rows to evaluate");
  }
  const int target = explanation.target_node();
  std::map<bn::Evidence, int> cache;
  int64_t matches = 0;
  for (int64_t r = 0; r < labelled.num_rows(); ++r) {
    bn::Evidence evidence(columns.size(), bn::kUnobserved);
    for (int node = 0; node < target; ++node) {
      evidence[node] = maps[node][labelled.at(r, columns[node])];
    }
    auto it = cache.find(evidence);
    if (it == cache.end()) {
      ASSIGN_OR_RETURN(const int mpe,
                       bn::MpeClass(explanation.network, target, evidence));
      it = cache.emplace(evidence, mpe).first;
    }
    matches += maps[target][labelled.at(r, columns[target])] == it->second;
  }
  return static_cast<double>(matches) / labelled.num_rows();
}

absl::StatusOr<double> LocalFidelity(const Explanation& explanation,
                                     const models::ModelAdapter& model,
                                     const dataset::Dataset& perturbed) {
  if (perturbed.VariableIndex(explanation.target_name)) {
    return LocalFidelity(explanation, perturbed);
  }
  ASSIGN_OR_RETURN(const dataset::Dataset labelled,
                   perturb::Label(perturbed, model, explanation.target_name));
  return LocalFidelity(explanation, labelled);
}

absl::StatusOr<double> BlanketArgmaxAgreement(const Explanation& explanation,
                                              const dataset::Dataset& labelled) {
  ASSIGN_OR_RETURN(const std::vector<int> columns,
                   NetworkColumns(explanation, labelled));
  ASSIGN_OR_RETURN(const auto maps, StateMaps(explanation, labelled, columns));
  if (labelled.num_rows() == 0) {
    return absl::InvalidArgumentError("no rows to evaluate");
  }
  const int target = explanation.target_node();
  const std::vector<int> graph_blanket =
      bn::DsepBlanket(explanation.network.dag(), target);
  int64_t agreements = 0;
  for (int64_t r = 0; r < labelled.num_rows(); ++r) {
    bn::Evidence full(columns.size(), bn::kUnobserved);
    for (int node = 0; node < target; ++node) {
      full[node] = maps[node][labelled.at(r, columns[node])];
    }
    bn::Evidence local(columns.size(), bn::kUnobserved);
    for (int node : graph_blanket) local[node] = full[node];
    ASSIGN_OR_RETURN(const int with_all, bn::MpeClass(explanation.network, target, full));
    ASSIGN_OR_RETURN(const int with_blanket,
                     bn::MpeClass(explanation.network, target, local));
    agreements += with_all == with_blanket;
  }
  return static_cast<double>(agreements) / labelled.num_rows();
}

json ToJson(const Explanation& explanation) {
  const auto& target_states =
      explanation.network.variable(explanation.target_node()).states;
  return json{
      {"target", explanation.target_name},
      {"instance",
       {{"features", explanation.feature_names},
        {"original", explanation.instance_original},
        {"discretized", explanation.instance}}},
      {"blanket",
       {{"target", explanation.target_name},
        {"pc", explanation.parents_children},
        {"spouses", explanation.spouses}}},
      {"network", bn::NetworkToJson(explanation.network)},
      {"posterior",
       {{"states", target_states}, {"probabilities", explanation.posterior}}},
      {"predicted_class", explanation.predicted_class},
      {"explained_class", explanation.explained_class},
      {"flagged_sensitive", explanation.flagged_sensitive},
      {"config", ConfigToJson(explanation.config)},
  };
}

absl::StatusOr<Explanation> FromJson(const json& object) {
  Explanation explanation;
  ASSIGN_OR_RETURN(explanation.target_name, Field<std::string>(object, "target"));
  ASSIGN_OR_RETURN(const json instance, Field<json>(object, "instance"));
  ASSIGN_OR_RETURN(explanation.feature_names,
                   Field<std::vector<std::string>>(instance, "features"));
  ASSIGN_OR_RETURN(explanation.instance_original,
                   Field<std::vector<std::string>>(instance, "original"));
  ASSIGN_OR_RETURN(explanation.instance,
                   Field<std::vector<std::string>>(instance, "discretized"));
  if (explanation.instance.size() != explanation.feature_names.size() ||
      explanation.instance_original.size() != explanation.feature_names.size()) {
    return absl::InvalidArgumentError("instance: length does not match features");
  }
  ASSIGN_OR_RETURN(const json blanket, Field<json>(object, "blanket"));
  ASSIGN_OR_RETURN(explanation.parents_children,
                   Field<std::vector<std::string>>(blanket, "pc"));
  ASSIGN_OR_RETURN(explanation.spouses,
                   Field<std::vector<std::string>>(blanket, "spouses"));
  ASSIGN_OR_RETURN(const json network, Field<json>(object, "network"));
  auto parsed = bn::NetworkFromJson(network);
  if (!parsed.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat("network: ", parsed.status().message()));
  }
  explanation.network = *std::move(parsed);
  if (explanation.network.num_nodes() == 0) {
    return absl::InvalidArgumentError("network: no nodes");
  }
  if (explanation.network.variable(explanation.target_node()).name !=
      explanation.target_name) {
    return absl::InvalidArgumentError("network: last node is not the target");
  }
  std::vector<std::string> members = explanation.parents_children;
  members.insert(members.end(), explanation.spouses.begin(),
                 explanation.spouses.end());
  std::vector<std::string> network_members = explanation.BlanketNames();
  std::sort(members.begin(), members.end());
  std::sort(network_members.begin(), network_members.end());
  if (members != network_members) {
    return absl::InvalidArgumentError(
        "blanket: members differ from the network's non-target nodes");
  }
  ASSIGN_OR_RETURN(const json posterior, Field<json>(object, "posterior"));
  ASSIGN_OR_RETURN(explanation.posterior,
                   Field<std::vector<double>>(posterior, "probabilities"));
  if (static_cast<int>(explanation.posterior.size()) !=
      explanation.network.variable(explanation.target_node()).cardinality()) {
    return absl::InvalidArgumentError("posterior: wrong number of states");
  }
  ASSIGN_OR_RETURN(explanation.predicted_class,
                   Field<std::string>(object, "predicted_class"));
  ASSIGN_OR_RETURN(explanation.explained_class,
                   Field<std::string>(object, "explained_class"));
  ASSIGN_OR_RETURN(explanation.flagged_sensitive,
                   Field<std::vector<std::string>>(object, "flagged_sensitive"));
  ASSIGN_OR_RETURN(const json config, Field<json>(object, "config"));
  auto parsed_config = ConfigFromJson(config);
  if (!parsed_config.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat("config: ", parsed_config.status().message()));
  }
  explanation.config = *std::move(parsed_config);
  return explanation;
}

std::string ExportJson(const Explanation& explanation) {
  return ToJson(explanation).dump(2) + "\n";
}

std::string ExportDot(const Explanation& explanation) {
  bn::DotOptions options;
  options.target = explanation.target_node();
  options.graph_name = "explanation";
  const std::vector<std::string> members = explanation.BlanketNames();
  for (int node = 0; node < static_cast<int>(members.size()); ++node) {
    const std::string& name = members[node];
    const bool spouse = std::find(explanation.spouses.begin(),
                                  explanation.spouses.end(),
                                  name) != explanation.spouses.end();
    options.fallback_roles[node] = spouse ? bn::NodeRole::kSpouse : bn::NodeRole::kNeighbour;
    if (std::find(explanation.flagged_sensitive.begin(),
                  explanation.flagged_sensitive.end(),
                  name) != explanation.flagged_sensitive.end()) {
      options.highlighted.push_back(node);
    }
  }
  return bn::ToDot(explanation.network, options);
}

}  // namespace laplace::explain
