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

#ifndef LAPLACE_RANDOM_NETWORK_H_
#define LAPLACE_RANDOM_NETWORK_H_

#include <cstdint>

#include "laplace/bayes_net.h"

namespace laplace::bn {

struct RandomNetworkOptions {
  int num_nodes = 8;
  int cardinality = 2;
  // Probability of each forward edge i -> j (i < j) before the parent cap.
  double edge_probability = 0.35;
  int max_parents = 3;
  // For binary nodes every CPT entry lies in [min_probability,
  // 1 - min_probability]. Larger cardinalities draw rows from a flat
  // Dirichlet mixed with the uniform row so no entry drops below
  // min_probability / cardinality.
  double min_probability = 0.1;
};

// Random DAG over nodes X0..X{n-1} (edges only go from lower to higher ids)
// with random CPTs. Deterministic per seed.
BayesianNetwork RandomNetwork(const RandomNetworkOptions& options,
                              uint64_t seed);

}  // namespace laplace::bn

#endif  // LAPLACE_RANDOM_NETWORK_H_
