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

#include "laplace/structure_learning.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

namespace laplace::bn {
namespace {

enum class MoveKind { kAdd = 0, kDelete = 1, kReverse = 2 };

struct Move {
  MoveKind kind;
  int from;
  int to;
  double gain;
};

class FamilyScoreCache {
 public:
  explicit FamilyScoreCache(const dataset::Dataset& data)
      : data_(data), cache_(data.num_variables()) {}

  double Score(int node, std::vector<int> parents) {
    std::sort(parents.begin(), parents.end());
    auto& per_node = cache_[node];
    const auto it = per_node.find(parents);
    if (it != per_node.end()) return it->second;
    const double score = FamilyBic(data_, node, parents);
    per_node.emplace(std::move(parents), score);
    return score;
  }

 private:
  const dataset::Dataset& data_;
  std::vector<std::map<std::vector<int>, double>> cache_;
};

std::vector<int> Without(std::vector<int> values, int v) {
  std::erase(values, v);
  return values;
}

std::vector<int> With(std::vector<int> values, int v) {
  values.push_back(v);
  std::sort(values.begin(), values.end());
  return values;
}

}  // namespace

double FamilyBic(const dataset::Dataset& data, int node,
                 std::span<const int> parents) {
  const int r = data.cardinality(node);
  int64_t configs = 1;
  std::vector<int64_t> config(data.num_rows(), 0);
  for (int p : parents) {
    const auto column = data.column(p);
    for (int64_t i = 0; i < data.num_rows(); ++i) config[i] += column[i] * configs;
    configs *= data.cardinality(p);
  }
  std::vector<int64_t> counts(configs * r, 0);
  const auto own = data.column(node);
  for (int64_t i = 0; i < data.num_rows(); ++i) ++counts[config[i] * r + own[i]];
  double log_likelihood = 0;
  for (int64_t c = 0; c < configs; ++c) {
    int64_t total = 0;
    for (int s = 0; s < r; ++s) total += counts[c * r + s];
    if (total == 0) continue;
    for (int s = 0; s < r; ++s) {
      const int64_t n = counts[c * r + s];
      if (n > 0) log_likelihood += n * std::log(static_cast<double>(n) / total);
    }
  }
  const double penalty = 0.5 * std::log(static_cast<double>(data.num_rows())) *
                         static_cast<double>(r - 1) * static_cast<double>(configs);
  return log_likelihood - penalty;
}

double BicScore(const Dag& dag, const dataset::Dataset& data) {
  double score = 0;
  for (int v = 0; v < dag.num_nodes(); ++v) {
    score += FamilyBic(data, v, dag.parents(v));
  }
  return score;
}

Dag LearnStructure(const dataset::Dataset& data,
                   const StructureLearningOptions& options,
                   std::vector<double>* score_trace) {
  const int n = data.num_variables();
  Dag dag(n);
  FamilyScoreCache cache(data);
  std::vector<double> family(n);
  for (int v = 0; v < n; ++v) family[v] = cache.Score(v, {});
  auto total = [&] {
    double s = 0;
    for (double f : family) s += f;
    return s;
  };
  if (score_trace != nullptr) score_trace->assign(1, total());

  // Candidates are visited in (from, to, kind) order, so keeping the first
  // strictly better move implements the lexicographic tie-break.
  while (true) {
    std::optional<Move> best;
    auto consider = [&](const Move& move) {
      if (move.gain <= options.min_improvement) return;
      if (!best || move.gain > best->gain + options.min_improvement) best = move;
    };
    for (int from = 0; from < n; ++from) {
      for (int to = 0; to < n; ++to) {
        if (from == to) continue;
        const auto& to_parents = dag.parents(to);
        if (dag.HasEdge(from, to)) {
          const auto reduced = Without(to_parents, from);
          const double delete_gain = cache.Score(to, reduced) - family[to];
          consider({MoveKind::kDelete, from, to, delete_gain});
          if (static_cast<int>(dag.parents(from).size()) < options.max_parents) {
            Dag reversed = dag;
            reversed.RemoveEdge(from, to);
            if (!reversed.HasPath(from, to)) {
              const double gain =
                  delete_gain +
                  cache.Score(from, With(dag.parents(from), to)) - family[from];
              consider({MoveKind::kReverse, from, to, gain});
            }
          }
        } else if (!dag.HasEdge(to, from) &&
                   static_cast<int>(to_parents.size()) < options.max_parents &&
                   !dag.HasPath(to, from)) {
          const double gain =
              cache.Score(to, With(to_parents, from)) - family[to];
          consider({MoveKind::kAdd, from, to, gain});
        }
      }
    }
    if (!best) break;
    switch (best->kind) {
      case MoveKind::kAdd:
        (void)dag.AddEdge(best->from, best->to);
        break;
      case MoveKind::kDelete:
        dag.RemoveEdge(best->from, best->to);
        break;
      case MoveKind::kReverse:
        dag.RemoveEdge(best->from, best->to);
        (void)dag.AddEdge(best->to, best->from);
        break;
    }
    for (int v : {best->from, best->to}) {
      family[v] = cache.Score(v, dag.parents(v));
    }
    if (score_trace != nullptr) score_trace->push_back(total());
  }

  // Canonical parent order.
  Dag sorted(n);
  for (const auto& [from, to] : dag.Edges()) (void)sorted.AddEdge(from, to);
  return sorted;
}

Dag LearnStructure(const dataset::Dataset& data, std::span<const int> nodes,
                   const StructureLearningOptions& options,
                   std::vector<double>* score_trace) {
  return LearnStructure(data.SelectColumns(nodes), options, score_trace);
}

}  // namespace laplace::bn
