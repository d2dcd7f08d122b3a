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

#include "laplace/random_network.h"

#include <cmath>
#include <string>

#include "absl/strings/str_cat.h"
#include "laplace/random.h"

namespace laplace::bn {

BayesianNetwork RandomNetwork(const RandomNetworkOptions& options,
                              uint64_t seed) {
  Rng rng(seed);
  const int n = options.num_nodes;
  std::vector<dataset::Variable> variables;
  for (int v = 0; v < n; ++v) {
    dataset::Variable variable{absl::StrCat("X", v), {}};
    for (int s = 0; s < options.cardinality; ++s) {
      variable.states.push_back(std::to_string(s));
    }
    variables.push_back(std::move(variable));
  }
  Dag dag(n);
  for (int to = 1; to < n; ++to) {
    for (int from = 0; from < to; ++from) {
      if (static_cast<int>(dag.parents(to).size()) >= options.max_parents) break;
      if (rng.Bernoulli(options.edge_probability)) (void)dag.AddEdge(from, to);
    }
  }
  std::vector<Cpt> cpts;
  const double lo = options.min_probability;
  for (int v = 0; v < n; ++v) {
    Cpt cpt;
    cpt.node = v;
    cpt.cardinality = options.cardinality;
    cpt.parents = dag.parents(v);
    cpt.parent_cardinalities.assign(cpt.parents.size(), options.cardinality);
    cpt.table.resize(cpt.num_rows() * cpt.cardinality);
    for (int64_t r = 0; r < cpt.num_rows(); ++r) {
      auto row = cpt.MutableRow(r);
      if (cpt.cardinality == 2) {
        const double p = lo + (1 - 2 * lo) * rng.Uniform();
        row[0] = p;
        row[1] = 1 - p;
      } else {
        double total = 0;
        for (double& p : row) {
          p = -std::log(1 - rng.Uniform());
          total += p;
        }
        const double k = cpt.cardinality;
        for (double& p : row) p = (1 - lo) * p / total + lo / k;
      }
    }
    cpts.push_back(std::move(cpt));
  }
  return *BayesianNetwork::Create(std::move(variables), std::move(dag),
                                  std::move(cpts));
}

}  // namespace laplace::bn
