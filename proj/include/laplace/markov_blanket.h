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

#ifndef LAPLACE_MARKOV_BLANKET_H_
#define LAPLACE_MARKOV_BLANKET_H_

#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "json.hpp"
#include "laplace/dataset.h"
#include "laplace/stats.h"

namespace laplace::mb {

inline constexpr int kDefaultMaxConditioning = 3;

// Separating sets keyed by unordered variable pair.
class SepsetCache {
 public:
  // Records the first separating set of {a, b}; later calls are ignored.
  void Record(int a, int b, std::vector<int> separator);
  const std::vector<int>* Find(int a, int b) const;
  size_t size() const { return sets_.size(); }
  const std::map<std::pair<int, int>, std::vector<int>>& entries() const {
    return sets_;
  }

 private:
  std::map<std::pair<int, int>, std::vector<int>> sets_;
};

struct MarkovBlanket {
  int target = -1;
  std::vector<int> pc;       // parents and children, ascending
  std::vector<int> spouses;  // ascending, disjoint from pc
  SepsetCache sepsets;

  // pc ∪ spouses, ascending.
  std::vector<int> Members() const;
};

struct IpcMbOptions {
  stats::CiTestOptions ci;
  int max_conditioning = kDefaultMaxConditioning;
  // Worker threads for the per-neighbour RecognizePc calls. 1 = serial.
  int threads = 1;
};

struct PcResult {
  std::vector<int> pc;
  SepsetCache sepsets;
};

// Backward elimination of the candidates adjacent to `target`: a candidate is
// dropped at the first conditioning set S (|S| = 0, 1, ..., max_conditioning,
// drawn from the surviving candidates in lexicographic order) that separates
// it from the target.
PcResult RecognizePc(const dataset::Dataset& data, int target,
                     std::span<const int> candidates,
                     const IpcMbOptions& options);

// IPC-MB. Parents/children of the target survive only if the target is also
// in their own parents/children set; spouses are the remaining neighbours of
// those nodes that become dependent on the target once the shared child is
// added to the separating set.
MarkovBlanket IpcMb(const dataset::Dataset& data, int target,
                    const IpcMbOptions& options = {});

// {target, pc: [...], spouses: [...]} with variable names from `variables`.
nlohmann::json ToJson(const MarkovBlanket& blanket,
                      const std::vector<dataset::Variable>& variables);

}  // namespace laplace::mb

#endif  // LAPLACE_MARKOV_BLANKET_H_
