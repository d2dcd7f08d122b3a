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

#include "laplace/inference.h"

#include <algorithm>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"

namespace laplace::bn {
namespace {

// Nodes whose CPTs can influence P(target, evidence): the target, the
// observed nodes and all their ancestors.
std::vector<char> RelevantNodes(const BayesianNetwork& network, int target,
                                const Evidence& evidence) {
  std::vector<char> relevant(network.num_nodes(), 0);
  std::vector<int> stack = {target};
  for (int v = 0; v < network.num_nodes(); ++v) {
    if (evidence[v] != kUnobserved) stack.push_back(v);
  }
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    if (relevant[v]) continue;
    relevant[v] = 1;
    for (int p : network.dag().parents(v)) stack.push_back(p);
  }
  return relevant;
}

std::vector<double> Enumerate(const BayesianNetwork& network, int target,
                              const Evidence& evidence,
                              const std::vector<char>& relevant) {
  std::vector<int> free_nodes;
  std::vector<const Cpt*> factors;
  for (int v = 0; v < network.num_nodes(); ++v) {
    if (!relevant[v]) continue;
    factors.push_back(&network.cpt(v));
    if (v != target && evidence[v] == kUnobserved) free_nodes.push_back(v);
  }
  std::vector<int> assignment(evidence.begin(), evidence.end());
  for (int v : free_nodes) assignment[v] = 0;
  std::vector<double> result(network.variable(target).cardinality(), 0.0);
  for (int t = 0; t < static_cast<int>(result.size()); ++t) {
    assignment[target] = t;
    for (int v : free_nodes) assignment[v] = 0;
    double sum = 0;
    while (true) {
      double p = 1;
      for (const Cpt* cpt : factors) {
        p *= cpt->Probability(assignment);
        if (p == 0) break;
      }
      sum += p;
      size_t i = 0;
      for (; i < free_nodes.size(); ++i) {
        const int v = free_nodes[i];
        if (++assignment[v] < network.variable(v).cardinality()) break;
        assignment[v] = 0;
      }
      if (i == free_nodes.size()) break;
    }
    result[t] = sum;
  }
  return result;
}

// Dense factor over sorted variables; first variable varies fastest.
struct Factor {
  std::vector<int> vars;
  std::vector<int> cards;
  std::vector<double> values;
};

Factor Multiply(const Factor& a, const Factor& b,
                const std::vector<int>& cardinality) {
  Factor out;
  std::set_union(a.vars.begin(), a.vars.end(), b.vars.begin(), b.vars.end(),
                 std::back_inserter(out.vars));
  size_t size = 1;
  for (int v : out.vars) {
    out.cards.push_back(cardinality[v]);
    size *= cardinality[v];
  }
  out.values.assign(size, 0);
  auto strides_in = [&](const Factor& f) {
    std::vector<size_t> strides(out.vars.size(), 0);
    size_t stride = 1;
    for (size_t i = 0; i < f.vars.size(); ++i) {
      const size_t pos =
          std::lower_bound(out.vars.begin(), out.vars.end(), f.vars[i]) -
          out.vars.begin();
      strides[pos] = stride;
      stride *= f.cards[i];
    }
    return strides;
  };
  const auto sa = strides_in(a);
  const auto sb = strides_in(b);
  std::vector<int> state(out.vars.size(), 0);
  size_t ia = 0, ib = 0;
  for (size_t i = 0; i < size; ++i) {
    out.values[i] = a.values[ia] * b.values[ib];
    for (size_t d = 0; d < state.size(); ++d) {
      if (++state[d] < out.cards[d]) {
        ia += sa[d];
        ib += sb[d];
        break;
      }
      ia -= sa[d] * (out.cards[d] - 1);
      ib -= sb[d] * (out.cards[d] - 1);
      state[d] = 0;
    }
  }
  return out;
}

Factor SumOut(const Factor& f, int var) {
  const size_t pos =
      std::find(f.vars.begin(), f.vars.end(), var) - f.vars.begin();
  size_t inner = 1;
  for (size_t i = 0; i < pos; ++i) inner *= f.cards[i];
  const size_t card = f.cards[pos];
  const size_t outer = f.values.size() / (inner * card);
  Factor out;
  out.vars = f.vars;
  out.cards = f.cards;
  out.vars.erase(out.vars.begin() + pos);
  out.cards.erase(out.cards.begin() + pos);
  out.values.assign(inner * outer, 0);
  for (size_t o = 0; o < outer; ++o) {
    for (size_t s = 0; s < card; ++s) {
      for (size_t i = 0; i < inner; ++i) {
        out.values[o * inner + i] += f.values[(o * card + s) * inner + i];
      }
    }
  }
  return out;
}

// CPT of `node` restricted to the observed states in `evidence`.
Factor CptFactor(const BayesianNetwork& network, int node,
                 const Evidence& evidence) {
  const Cpt& cpt = network.cpt(node);
  std::vector<int> family = cpt.parents;
  family.push_back(node);
  std::vector<int> free_vars;
  for (int v : family) {
    if (evidence[v] == kUnobserved) free_vars.push_back(v);
  }
  std::sort(free_vars.begin(), free_vars.end());
  Factor f;
  f.vars = free_vars;
  size_t size = 1;
  for (int v : free_vars) {
    f.cards.push_back(network.variable(v).cardinality());
    size *= f.cards.back();
  }
  f.values.resize(size);
  std::vector<int> assignment(evidence.begin(), evidence.end());
  for (int v : free_vars) assignment[v] = 0;
  for (size_t i = 0; i < size; ++i) {
    f.values[i] = cpt.Probability(assignment);
    for (size_t d = 0; d < free_vars.size(); ++d) {
      if (++assignment[free_vars[d]] < f.cards[d]) break;
      assignment[free_vars[d]] = 0;
    }
  }
  return f;
}

std::vector<double> Eliminate(const BayesianNetwork& network, int target,
                              const Evidence& evidence,
                              const std::vector<char>& relevant) {
  const std::vector<int> cardinality = network.cardinalities();
  std::vector<Factor> factors;
  std::vector<int> to_eliminate;
  for (int v = 0; v < network.num_nodes(); ++v) {
    if (!relevant[v]) continue;
    factors.push_back(CptFactor(network, v, evidence));
    if (v != target && evidence[v] == kUnobserved) to_eliminate.push_back(v);
  }
  while (!to_eliminate.empty()) {
    // Greedy min-size: eliminate the variable whose product factor is
    // smallest; ties go to the lowest id.
    size_t best = 0;
    double best_size = -1;
    for (size_t i = 0; i < to_eliminate.size(); ++i) {
      std::vector<int> scope;
      for (const Factor& f : factors) {
        if (std::binary_search(f.vars.begin(), f.vars.end(), to_eliminate[i])) {
          scope.insert(scope.end(), f.vars.begin(), f.vars.end());
        }
      }
      std::sort(scope.begin(), scope.end());
      scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
      double size = 1;
      for (int v : scope) size *= cardinality[v];
      if (best_size < 0 || size < best_size) {
        best_size = size;
        best = i;
      }
    }
    const int var = to_eliminate[best];
    to_eliminate.erase(to_eliminate.begin() + best);
    Factor product{{}, {}, {1.0}};
    std::vector<Factor> rest;
    for (Factor& f : factors) {
      if (std::binary_search(f.vars.begin(), f.vars.end(), var)) {
        product = Multiply(product, f, cardinality);
      } else {
        rest.push_back(std::move(f));
      }
    }
    rest.push_back(SumOut(product, var));
    factors = std::move(rest);
  }
  Factor product{{}, {}, {1.0}};
  for (const Factor& f : factors) product = Multiply(product, f, cardinality);
  // Only the target remains free.
  return product.values;
}

}  // namespace

absl::StatusOr<std::vector<double>> Posterior(const BayesianNetwork& network,
                                              int target,
                                              const Evidence& evidence,
                                              InferenceMethod method) {
  if (static_cast<int>(evidence.size()) != network.num_nodes()) {
    return absl::InvalidArgumentError("evidence size differs from node count");
  }
  if (evidence[target] != kUnobserved) {
    return absl::InvalidArgumentError("target is observed in the evidence");
  }
  const std::vector<char> relevant = RelevantNodes(network, target, evidence);
  if (method == InferenceMethod::kAuto) {
    double completions = 1;
    for (int v = 0; v < network.num_nodes(); ++v) {
      if (relevant[v] && evidence[v] == kUnobserved) {
        completions *= network.variable(v).cardinality();
      }
    }
    method = completions <= static_cast<double>(kEnumerationLimit)
                 ? InferenceMethod::kEnumeration
                 : InferenceMethod::kVariableElimination;
  }
  std::vector<double> result =
      method == InferenceMethod::kEnumeration
          ? Enumerate(network, target, evidence, relevant)
          : Eliminate(network, target, evidence, relevant);
  const double total = std::accumulate(result.begin(), result.end(), 0.0);
  if (!(total > 0)) {
    std::vector<std::string> observed;
    for (int v = 0; v < network.num_nodes(); ++v) {
      if (evidence[v] != kUnobserved) {
        observed.push_back(absl::StrCat(network.variable(v).name, "=",
                                        network.variable(v).states[evidence[v]]));
      }
    }
    return absl::FailedPreconditionError(
        absl::StrCat("evidence {", absl::StrJoin(observed, ", "),
                     "} has zero probability"));
  }
  for (double& p : result) p /= total;
  return result;
}

int ArgMax(std::span<const double> values) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i) {
    if (values[i] > values[best] + kTieTolerance) best = i;
  }
  return best;
}

absl::StatusOr<int> MpeClass(const BayesianNetwork& network, int target,
                             const Evidence& evidence) {
  auto posterior = Posterior(network, target, evidence);
  if (!posterior.ok()) return posterior.status();
  return ArgMax(*posterior);
}

}  // namespace laplace::bn
