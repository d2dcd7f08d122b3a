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

#include "laplace/bayes_net.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "laplace/alarm.h"
#include "laplace/random.h"
#include "laplace/status_macros.h"

namespace laplace::bn {
namespace {

constexpr double kRowTolerance = 1e-9;

std::string DotQuote(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::vector<int> Dag::children(int node) const {
  std::vector<int> out;
  for (int c = 0; c < num_nodes(); ++c) {
    if (HasEdge(node, c)) out.push_back(c);
  }
  return out;
}

bool Dag::HasEdge(int from, int to) const {
  const auto& p = parents_[to];
  return std::find(p.begin(), p.end(), from) != p.end();
}

bool Dag::HasPath(int from, int to) const {
  // Walk upwards from `to` through parents.
  std::vector<char> seen(num_nodes(), 0);
  std::vector<int> stack = {to};
  while (!stack.empty()) {
    const int n = stack.back();
    stack.pop_back();
    if (n == from) return true;
    if (seen[n]) continue;
    seen[n] = 1;
    for (int p : parents_[n]) stack.push_back(p);
  }
  return false;
}

absl::Status Dag::AddEdge(int from, int to) {
  if (from < 0 || to < 0 || from >= num_nodes() || to >= num_nodes()) {
    return absl::InvalidArgumentError(
        absl::StrCat("edge ", from, "->", to, " out of range"));
  }
  if (from == to) {
    return absl::InvalidArgumentError(absl::StrCat("self loop on ", from));
  }
  if (HasEdge(from, to)) {
    return absl::InvalidArgumentError(
        absl::StrCat("duplicate edge ", from, "->", to));
  }
  if (HasPath(to, from)) {
    return absl::InvalidArgumentError(
        absl::StrCat("edge ", from, "->", to, " creates a cycle"));
  }
  parents_[to].push_back(from);
  return absl::OkStatus();
}

void Dag::RemoveEdge(int from, int to) { std::erase(parents_[to], from); }

std::vector<int> Dag::TopologicalOrder() const {
  std::vector<int> missing(num_nodes());
  std::vector<std::vector<int>> kids(num_nodes());
  for (int n = 0; n < num_nodes(); ++n) {
    missing[n] = static_cast<int>(parents_[n].size());
    for (int p : parents_[n]) kids[p].push_back(n);
  }
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int n = 0; n < num_nodes(); ++n) {
    if (missing[n] == 0) ready.push(n);
  }
  std::vector<int> order;
  while (!ready.empty()) {
    const int n = ready.top();
    ready.pop();
    order.push_back(n);
    for (int c : kids[n]) {
      if (--missing[c] == 0) ready.push(c);
    }
  }
  return order;
}

std::vector<std::pair<int, int>> Dag::Edges() const {
  std::vector<std::pair<int, int>> out;
  for (int c = 0; c < num_nodes(); ++c) {
    for (int p : parents_[c]) out.emplace_back(p, c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

size_t Dag::num_edges() const {
  size_t n = 0;
  for (const auto& p : parents_) n += p.size();
  return n;
}

int64_t Cpt::num_rows() const {
  int64_t rows = 1;
  for (int c : parent_cardinalities) rows *= c;
  return rows;
}

int64_t Cpt::ConfigIndex(std::span<const int> assignment) const {
  int64_t index = 0;
  int64_t stride = 1;
  for (size_t i = 0; i < parents.size(); ++i) {
    index += assignment[parents[i]] * stride;
    stride *= parent_cardinalities[i];
  }
  return index;
}

absl::StatusOr<BayesianNetwork> BayesianNetwork::Create(
    std::vector<dataset::Variable> variables, Dag dag, std::vector<Cpt> cpts) {
  const int n = dag.num_nodes();
  if (static_cast<int>(variables.size()) != n ||
      static_cast<int>(cpts.size()) != n) {
    return absl::InvalidArgumentError(
        "variables, DAG nodes and CPTs must have equal counts");
  }
  if (static_cast<int>(dag.TopologicalOrder().size()) != n) {
    return absl::InvalidArgumentError("graph has a cycle");
  }
  for (int v = 0; v < n; ++v) {
    RETURN_IF_ERROR(dataset::ValidateVariable(variables[v]));
    const Cpt& cpt = cpts[v];
    if (cpt.node != v || cpt.parents != dag.parents(v)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "CPT of '", variables[v].name, "' does not match the graph"));
    }
    if (cpt.cardinality != variables[v].cardinality()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "CPT of '", variables[v].name, "' has wrong cardinality"));
    }
    for (size_t i = 0; i < cpt.parents.size(); ++i) {
      if (cpt.parent_cardinalities[i] !=
          variables[cpt.parents[i]].cardinality()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "CPT of '", variables[v].name, "' has wrong parent cardinality"));
      }
    }
    if (static_cast<int64_t>(cpt.table.size()) !=
        cpt.num_rows() * cpt.cardinality) {
      return absl::InvalidArgumentError(absl::StrCat(
          "CPT of '", variables[v].name, "' has ", cpt.table.size(),
          " entries, expected ", cpt.num_rows() * cpt.cardinality));
    }
    for (int64_t r = 0; r < cpt.num_rows(); ++r) {
      double sum = 0;
      for (double p : cpt.Row(r)) {
        if (!(p >= 0)) {
          return absl::InvalidArgumentError(absl::StrCat(
              "CPT of '", variables[v].name, "' row ", r, ": negative entry"));
        }
        sum += p;
      }
      if (std::abs(sum - 1) > kRowTolerance) {
        return absl::InvalidArgumentError(
            absl::StrCat("CPT of '", variables[v].name, "' row ", r,
                         " sums to ", sum));
      }
    }
  }
  BayesianNetwork network;
  network.variables_ = std::move(variables);
  network.dag_ = std::move(dag);
  network.cpts_ = std::move(cpts);
  return network;
}

std::optional<int> BayesianNetwork::NodeIndex(std::string_view name) const {
  for (int v = 0; v < num_nodes(); ++v) {
    if (variables_[v].name == name) return v;
  }
  return std::nullopt;
}

std::vector<int> BayesianNetwork::cardinalities() const {
  std::vector<int> out;
  for (const auto& v : variables_) out.push_back(v.cardinality());
  return out;
}

double JointProbability(const BayesianNetwork& network,
                        std::span<const int> assignment) {
  double p = 1;
  for (const Cpt& cpt : network.cpts()) p *= cpt.Probability(assignment);
  return p;
}

dataset::Dataset ForwardSample(const BayesianNetwork& network, int64_t rows,
                               uint64_t seed) {
  const int n = network.num_nodes();
  const std::vector<int> order = network.dag().TopologicalOrder();
  std::vector<std::vector<int>> columns(n, std::vector<int>(rows));
  std::vector<int> assignment(n);
  Rng rng(seed);
  for (int64_t r = 0; r < rows; ++r) {
    for (int v : order) {
      const Cpt& cpt = network.cpt(v);
      assignment[v] = rng.Categorical(cpt.Row(cpt.ConfigIndex(assignment)));
      columns[v][r] = assignment[v];
    }
  }
  return dataset::Dataset(network.variables(), std::move(columns), rows);
}

BayesianNetwork FitMle(const Dag& dag, const dataset::Dataset& data,
                       double smoothing) {
  std::vector<Cpt> cpts;
  for (int v = 0; v < dag.num_nodes(); ++v) {
    Cpt cpt;
    cpt.node = v;
    cpt.cardinality = data.cardinality(v);
    cpt.parents = dag.parents(v);
    for (int p : cpt.parents) {
      cpt.parent_cardinalities.push_back(data.cardinality(p));
    }
    const int64_t configs = cpt.num_rows();
    std::vector<int64_t> counts(configs * cpt.cardinality, 0);
    std::vector<int64_t> config(data.num_rows(), 0);
    int64_t stride = 1;
    for (size_t i = 0; i < cpt.parents.size(); ++i) {
      const auto column = data.column(cpt.parents[i]);
      for (int64_t r = 0; r < data.num_rows(); ++r) config[r] += column[r] * stride;
      stride *= cpt.parent_cardinalities[i];
    }
    const auto own = data.column(v);
    for (int64_t r = 0; r < data.num_rows(); ++r) {
      ++counts[config[r] * cpt.cardinality + own[r]];
    }
    cpt.table.resize(counts.size());
    for (int64_t c = 0; c < configs; ++c) {
      int64_t total = 0;
      for (int s = 0; s < cpt.cardinality; ++s) {
        total += counts[c * cpt.cardinality + s];
      }
      const double denominator = total + smoothing * cpt.cardinality;
      for (int s = 0; s < cpt.cardinality; ++s) {
        cpt.table[c * cpt.cardinality + s] =
            denominator > 0
                ? (counts[c * cpt.cardinality + s] + smoothing) / denominator
                : 1.0 / cpt.cardinality;
      }
    }
    cpts.push_back(std::move(cpt));
  }
  return *BayesianNetwork::Create(data.variables(), dag, std::move(cpts));
}

double LogLikelihood(const BayesianNetwork& network,
                     const dataset::Dataset& data) {
  double total = 0;
  std::vector<int> row(network.num_nodes());
  for (int64_t r = 0; r < data.num_rows(); ++r) {
    for (int v = 0; v < network.num_nodes(); ++v) row[v] = data.at(r, v);
    for (const Cpt& cpt : network.cpts()) {
      total += std::log(cpt.Probability(row));
    }
  }
  return total;
}

std::vector<int> DsepBlanket(const Dag& dag, int target) {
  std::set<int> members(dag.parents(target).begin(), dag.parents(target).end());
  for (int child : dag.children(target)) {
    members.insert(child);
    for (int p : dag.parents(child)) members.insert(p);
  }
  members.erase(target);
  return {members.begin(), members.end()};
}

nlohmann::json NetworkToJson(const BayesianNetwork& network) {
  nlohmann::json edges = nlohmann::json::array();
  nlohmann::json cpts = nlohmann::json::object();
  for (int v = 0; v < network.num_nodes(); ++v) {
    const Cpt& cpt = network.cpt(v);
    for (int p : cpt.parents) {
      edges.push_back({network.variable(p).name, network.variable(v).name});
    }
    nlohmann::json rows = nlohmann::json::array();
    for (int64_t r = 0; r < cpt.num_rows(); ++r) {
      const auto row = cpt.Row(r);
      rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    cpts[network.variable(v).name] = std::move(rows);
  }
  return {{"variables", dataset::VariablesToJson(network.variables())},
          {"edges", std::move(edges)},
          {"cpts", std::move(cpts)}};
}

absl::StatusOr<BayesianNetwork> NetworkFromJson(const nlohmann::json& json) {
  if (!json.is_object() || !json.contains("variables") ||
      !json.contains("edges") || !json.contains("cpts")) {
    return absl::InvalidArgumentError(
        "network: expected object with 'variables', 'edges' and 'cpts'");
  }
  ASSIGN_OR_RETURN(std::vector<dataset::Variable> variables,
                   dataset::VariablesFromJson(json["variables"]));
  std::map<std::string, int, std::less<>> index;
  for (size_t v = 0; v < variables.size(); ++v) {
    if (!index.emplace(variables[v].name, static_cast<int>(v)).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("variables[", v, "]: duplicate name '",
                       variables[v].name, "'"));
    }
  }
  Dag dag(static_cast<int>(variables.size()));
  const auto& edges = json["edges"];
  if (!edges.is_array()) {
    return absl::InvalidArgumentError("'edges' must be an array");
  }
  for (size_t e = 0; e < edges.size(); ++e) {
    const auto& edge = edges[e];
    if (!edge.is_array() || edge.size() != 2 || !edge[0].is_string() ||
        !edge[1].is_string()) {
      return absl::InvalidArgumentError(
          absl::StrCat("edges[", e, "]: expected [parent, child]"));
    }
    const auto from = index.find(edge[0].get<std::string>());
    const auto to = index.find(edge[1].get<std::string>());
    if (from == index.end() || to == index.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("edges[", e, "]: unknown variable"));
    }
    auto status = dag.AddEdge(from->second, to->second);
    if (!status.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("edges[", e, "]: ", status.message()));
    }
  }
  const auto& cpt_json = json["cpts"];
  if (!cpt_json.is_object()) {
    return absl::InvalidArgumentError("'cpts' must be an object");
  }
  std::vector<Cpt> cpts;
  for (size_t v = 0; v < variables.size(); ++v) {
    const std::string& name = variables[v].name;
    if (!cpt_json.contains(name)) {
      return absl::InvalidArgumentError(
          absl::StrCat("cpts: missing table for '", name, "'"));
    }
    Cpt cpt;
    cpt.node = static_cast<int>(v);
    cpt.cardinality = variables[v].cardinality();
    cpt.parents = dag.parents(static_cast<int>(v));
    for (int p : cpt.parents) {
      cpt.parent_cardinalities.push_back(variables[p].cardinality());
    }
    const auto& rows = cpt_json[name];
    if (!rows.is_array() || static_cast<int64_t>(rows.size()) != cpt.num_rows()) {
      return absl::InvalidArgumentError(
          absl::StrCat("cpts.", name, ": expected ", cpt.num_rows(), " rows"));
    }
    for (size_t r = 0; r < rows.size(); ++r) {
      const auto& row = rows[r];
      if (!row.is_array() || static_cast<int>(row.size()) != cpt.cardinality) {
        return absl::InvalidArgumentError(absl::StrCat(
            "cpts.", name, "[", r, "]: expected ", cpt.cardinality, " entries"));
      }
      for (const auto& p : row) {
        if (!p.is_number()) {
          return absl::InvalidArgumentError(
              absl::StrCat("cpts.", name, "[", r, "]: non-numeric entry"));
        }
        cpt.table.push_back(p.get<double>());
      }
    }
    cpts.push_back(std::move(cpt));
  }
  return BayesianNetwork::Create(std::move(variables), std::move(dag),
                                 std::move(cpts));
}

absl::StatusOr<BayesianNetwork> LoadNetwork(const std::string& name_or_path) {
  std::string text;
  if (name_or_path == "alarm") {
    text = std::string(AlarmNetworkJson());
  } else {
    std::ifstream in(name_or_path);
    if (!in) {
      return absl::NotFoundError(
          absl::StrCat("cannot open network file '", name_or_path, "'"));
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    text = buffer.str();
  }
  nlohmann::json json;
  try {
    json = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    return absl::InvalidArgumentError(
        absl::StrCat(name_or_path, ": ", e.what()));
  }
  auto network = NetworkFromJson(json);
  if (!network.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat(name_or_path, ": ", network.status().message()));
  }
  return network;
}

const char* NodeRoleName(NodeRole role) {
  switch (role) {
    case NodeRole::kTarget:
      return "target";
    case NodeRole::kParent:
      return "parent";
    case NodeRole::kChild:
      return "child";
    case NodeRole::kSpouse:
      return "spouse";
    case NodeRole::kNeighbour:
      return "parent/child";
    case NodeRole::kNone:
      break;
  }
  return "none";
}

std::string ToDot(const BayesianNetwork& network, const DotOptions& options) {
  const Dag& dag = network.dag();
  std::vector<NodeRole> roles(network.num_nodes(), NodeRole::kNone);
  std::set<int> target_children;
  if (options.target) {
    const int t = *options.target;
    roles[t] = NodeRole::kTarget;
    for (int p : dag.parents(t)) roles[p] = NodeRole::kParent;
    for (int c : dag.children(t)) {
      roles[c] = NodeRole::kChild;
      target_children.insert(c);
    }
    for (int c : target_children) {
      for (int p : dag.parents(c)) {
        if (roles[p] == NodeRole::kNone) roles[p] = NodeRole::kSpouse;
      }
    }
  }
  for (const auto& [node, role] : options.fallback_roles) {
    if (roles[node] == NodeRole::kNone) roles[node] = role;
  }
  const std::set<int> highlighted(options.highlighted.begin(),
                                  options.highlighted.end());

  std::string out = absl::StrCat("digraph ", DotQuote(options.graph_name), " {\n");
  for (int v = 0; v < network.num_nodes(); ++v) {
    std::string attributes;
    if (roles[v] == NodeRole::kTarget) {
      attributes = "shape=doublecircle";
    } else {
      attributes = "shape=ellipse";
    }
    if (roles[v] != NodeRole::kNone) {
      absl::StrAppend(&attributes, ", role=", DotQuote(NodeRoleName(roles[v])),
                      ", xlabel=", DotQuote(NodeRoleName(roles[v])));
    }
    if (highlighted.contains(v)) {
      absl::StrAppend(&attributes,
                      ", style=filled, fillcolor=\"#f4cccc\", sensitive=true");
    }
    absl::StrAppend(&out, "  ", DotQuote(network.variable(v).name), " [",
                    attributes, "];\n");
  }
  for (const auto& [from, to] : dag.Edges()) {
    const bool spouse_edge =
        roles[from] == NodeRole::kSpouse && target_children.contains(to);
    absl::StrAppend(&out, "  ", DotQuote(network.variable(from).name), " -> ",
                    DotQuote(network.variable(to).name),
                    spouse_edge ? " [style=dashed]" : "", ";\n");
  }
  out += "}\n";
  return out;
}

}  // namespace laplace::bn
