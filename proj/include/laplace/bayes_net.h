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

#ifndef LAPLACE_BAYES_NET_H_
#define LAPLACE_BAYES_NET_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"
#include "laplace/dataset.h"

namespace laplace::bn {

inline constexpr double kDefaultSmoothing = 0.5;

// Directed acyclic graph over nodes 0..n-1. Parent lists keep insertion
// order, which fixes the CPT row layout of each node.
class Dag {
 public:
  explicit Dag(int num_nodes = 0) : parents_(num_nodes) {}

  int num_nodes() const { return static_cast<int>(parents_.size()); }
  const std::vector<int>& parents(int node) const { return parents_[node]; }
  std::vector<int> children(int node) const;
  bool HasEdge(int from, int to) const;
  // True when a directed path from -> ... -> to exists (from == to counts).
  bool HasPath(int from, int to) const;

  // Fails on self loops, duplicates, out-of-range ids and cycles.
  absl::Status AddEdge(int from, int to);
  void RemoveEdge(int from, int to);

  // Deterministic: Kahn's algorithm taking the smallest ready node first.
  std::vector<int> TopologicalOrder() const;
  // (parent, child) pairs, sorted.
  std::vector<std::pair<int, int>> Edges() const;
  size_t num_edges() const;

  bool operator==(const Dag&) const = default;

 private:
  std::vector<std::vector<int>> parents_;
};

// P(node | parents). Rows are indexed by the mixed-radix parent
// configuration, first parent varying fastest.
struct Cpt {
  int node = 0;
  int cardinality = 0;
  std::vector<int> parents;
  std::vector<int> parent_cardinalities;
  std::vector<double> table;  // num_rows() * cardinality

  int64_t num_rows() const;
  std::span<const double> Row(int64_t config) const {
    return {table.data() + config * cardinality,
            static_cast<size_t>(cardinality)};
  }
  std::span<double> MutableRow(int64_t config) {
    return {table.data() + config * cardinality,
            static_cast<size_t>(cardinality)};
  }
  // Parent configuration of a full assignment over the network's nodes.
  int64_t ConfigIndex(std::span<const int> assignment) const;
  double Probability(std::span<const int> assignment) const {
    return table[ConfigIndex(assignment) * cardinality + assignment[node]];
  }
};

class BayesianNetwork {
 public:
  BayesianNetwork() = default;

  // Checks that the CPTs cover the DAG's nodes with matching parent lists and
  // that every row is a distribution (within 1e-9).
  static absl::StatusOr<BayesianNetwork> Create(
      std::vector<dataset::Variable> variables, Dag dag, std::vector<Cpt> cpts);

  int num_nodes() const { return dag_.num_nodes(); }
  const Dag& dag() const { return dag_; }
  const std::vector<dataset::Variable>& variables() const { return variables_; }
  const dataset::Variable& variable(int node) const { return variables_[node]; }
  const Cpt& cpt(int node) const { return cpts_[node]; }
  const std::vector<Cpt>& cpts() const { return cpts_; }
  std::optional<int> NodeIndex(std::string_view name) const;
  std::vector<int> cardinalities() const;

 private:
  std::vector<dataset::Variable> variables_;
  Dag dag_;
  std::vector<Cpt> cpts_;
};

// Product of CPT entries for a full assignment.
double JointProbability(const BayesianNetwork& network,
                        std::span<const int> assignment);

// Ancestral sampling in topological order.
dataset::Dataset ForwardSample(const BayesianNetwork& network, int64_t rows,
                               uint64_t seed);

// theta[s | pa] = (N(s, pa) + smoothing) / (N(pa) + smoothing * r). Columns of
// `data` are the DAG's nodes. Parent configurations never observed get a
// uniform row even when smoothing is zero.
BayesianNetwork FitMle(const Dag& dag, const dataset::Dataset& data,
                       double smoothing = kDefaultSmoothing);

// Sum over rows of log P(row). Columns of `data` are the network's nodes.
double LogLikelihood(const BayesianNetwork& network,
                     const dataset::Dataset& data);

// Parents, children and co-parents of `target` read off the graph.
std::vector<int> DsepBlanket(const Dag& dag, int target);

// JSON network format:
//   {"variables": [{"name", "states"}], "edges": [[parent, child]],
//    "cpts": {node: [[p(s0), p(s1), ...] per parent configuration]}}
// The parent order of a node is the order of its incoming edges in "edges".
nlohmann::json NetworkToJson(const BayesianNetwork& network);
absl::StatusOr<BayesianNetwork> NetworkFromJson(const nlohmann::json& json);
// `name_or_path` is either "alarm" (the bundled network) or a JSON file path.
absl::StatusOr<BayesianNetwork> LoadNetwork(const std::string& name_or_path);

enum class NodeRole { kNone, kTarget, kParent, kChild, kSpouse, kNeighbour };
const char* NodeRoleName(NodeRole role);

struct DotOptions {
  std::optional<int> target;
  // Roles for nodes the graph itself does not relate to the target.
  std::map<int, NodeRole> fallback_roles;
  std::vector<int> highlighted;
  std::string graph_name = "laplace";
};

// Directed graph; the target is double-circled, nodes carry their role, and
// edges from a spouse into a child of the target are dashed.
std::string ToDot(const BayesianNetwork& network, const DotOptions& options);

}  // namespace laplace::bn

#endif  // LAPLACE_BAYES_NET_H_
