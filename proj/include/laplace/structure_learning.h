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

#ifndef LAPLACE_STRUCTURE_LEARNING_H_
#define LAPLACE_STRUCTURE_LEARNING_H_

#include <span>
#include <vector>

#include "laplace/bayes_net.h"
#include "laplace/dataset.h"

namespace laplace::bn {

inline constexpr int kDefaultMaxParents = 3;

struct StructureLearningOptions {
  int max_parents = kDefaultMaxParents;
  // Score gains below this are not improvements.
  double min_improvement = 1e-9;
};

// BIC of one family: log-likelihood at the MLE minus (ln K / 2) times the
// number of free parameters. Columns of `data` are the node ids.
double FamilyBic(const dataset::Dataset& data, int node,
                 std::span<const int> parents);

// Sum of FamilyBic over the DAG's nodes.
double BicScore(const Dag& dag, const dataset::Dataset& data);

// Greedy hill-climbing over single-edge additions, deletions and reversals
// from the empty graph, taking the best-scoring move each step. Equal gains
// go to the lexicographically smallest (from, to) edge. Node i of the result
// is column i of `data`. When `score_trace` is given it receives the score
// after each accepted move, starting with the empty graph.
Dag LearnStructure(const dataset::Dataset& data,
                   const StructureLearningOptions& options = {},
                   std::vector<double>* score_trace = nullptr);

// Same, restricted to `nodes`: node i of the result is nodes[i].
Dag LearnStructure(const dataset::Dataset& data, std::span<const int> nodes,
                   const StructureLearningOptions& options = {},
                   std::vector<double>* score_trace = nullptr);

}  // namespace laplace::bn

#endif  // LAPLACE_STRUCTURE_LEARNING_H_
