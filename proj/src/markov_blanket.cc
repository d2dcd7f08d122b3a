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

#include "laplace/markov_blanket.h"

#include <algorithm>
#include <thread>

#include "absl/strings/str_cat.h"
#include "laplace/logging.h"

namespace laplace::mb {
namespace {

std::pair<int, int> Key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

// Calls `visit` on each k-subset of `pool` in lexicographic order until it
// returns true. Returns whether any call returned true.
template <typename Visit>
bool ForEachSubset(const std::vector<int>& pool, int k, Visit visit) {
  const int n = static_cast<int>(pool.size());
  if (k > n) return false;
  std::vector<int> index(k);
  for (int i = 0; i < k; ++i) index[i] = i;
  std::vector<int> subset(k);
  while (true) {
    for (int i = 0; i < k; ++i) subset[i] = pool[index[i]];
    if (visit(subset)) return true;
    int i = k - 1;
    while (i >= 0 && index[i] == n - k + i) --i;
    if (i < 0) return false;
    ++index[i];
    for (int j = i + 1; j < k; ++j) index[j] = index[j - 1] + 1;
  }
}

}  // namespace

void SepsetCache::Record(int a, int b, std::vector<int> separator) {
  sets_.try_emplace(Key(a, b), std::move(separator));
}

const std::vector<int>* SepsetCache::Find(int a, int b) const {
  const auto it = sets_.find(Key(a, b));
  return it == sets_.end() ? nullptr : &it->second;
}

std::vector<int> MarkovBlanket::Members() const {
  std::vector<int> out = pc;
  out.insert(out.end(), spouses.begin(), spouses.end());
  std::sort(out.begin(), out.end());
  return out;
}

PcResult RecognizePc(const dataset::Dataset& data, int target,
                     std::span<const int> candidates,
                     const IpcMbOptions& options) {
  PcResult result;
  std::vector<int> adjacent(candidates.begin(), candidates.end());
  std::sort(adjacent.begin(), adjacent.end());
  adjacent.erase(std::unique(adjacent.begin(), adjacent.end()), adjacent.end());
  std::erase(adjacent, target);

  for (int k = 0; k <= options.max_conditioning; ++k) {
    if (k > static_cast<int>(adjacent.size()) - 1) break;
    const std::vector<int> snapshot = adjacent;
    for (int x : snapshot) {
      if (static_cast<int>(adjacent.size()) - 1 < k) break;
      std::vector<int> pool;
      pool.reserve(adjacent.size());
      for (int v : adjacent) {
        if (v != x) pool.push_back(v);
      }
      ForEachSubset(pool, k, [&](const std::vector<int>& subset) {
        const auto test = stats::ChiSquareCi(data, target, x, subset, options.ci);
        if (!test.independent) return false;
        std::erase(adjacent, x);
        result.sepsets.Record(target, x, subset);
        return true;
      });
    }
  }
  result.pc = std::move(adjacent);
  return result;
}

MarkovBlanket IpcMb(const dataset::Dataset& data, int target,
                    const IpcMbOptions& options) {
  MarkovBlanket blanket;
  blanket.target = target;

  std::vector<int> all;
  for (int v = 0; v < data.num_variables(); ++v) all.push_back(v);
  PcResult target_pc = RecognizePc(data, target, all, options);
  blanket.sepsets = target_pc.sepsets;

  // RecognizePc of each candidate neighbour. Independent reads of `data`.
  const std::vector<int>& candidates = target_pc.pc;
  std::vector<PcResult> neighbour_pc(candidates.size());
  const int threads = std::max(
      1, std::min<int>(options.threads, static_cast<int>(candidates.size())));
  auto work = [&](int worker) {
    for (size_t i = worker; i < candidates.size(); i += threads) {
      neighbour_pc[i] = RecognizePc(data, candidates[i], all, options);
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }

  std::vector<size_t> kept;
  for (size_t i = 0; i < candidates.size(); ++i) {
    const auto& pcx = neighbour_pc[i].pc;
    if (std::binary_search(pcx.begin(), pcx.end(), target)) {
      blanket.pc.push_back(candidates[i]);
      kept.push_back(i);
    }
  }

  std::vector<int> spouses;
  for (size_t i : kept) {
    const int x = candidates[i];
    for (int y : neighbour_pc[i].pc) {
      if (y == target || std::binary_search(blanket.pc.begin(), blanket.pc.end(), y) ||
          std::find(spouses.begin(), spouses.end(), y) != spouses.end()) {
        continue;
      }
      const std::vector<int>* sepset = blanket.sepsets.Find(target, y);
      if (sepset == nullptr) {
        LogInfo(absl::StrCat("no separating set for (", data.variable(target).name,
                             ", ", data.variable(y).name,
                             "); skipping spouse candidate"));
        continue;
      }
      std::vector<int> z = *sepset;
      if (std::find(z.begin(), z.end(), x) == z.end()) z.push_back(x);
      const auto test = stats::ChiSquareCi(data, target, y, z, options.ci);
      if (!test.independent) spouses.push_back(y);
    }
  }
  std::sort(spouses.begin(), spouses.end());
  blanket.spouses = std::move(spouses);
  return blanket;
}

nlohmann::json ToJson(const MarkovBlanket& blanket,
                      const std::vector<dataset::Variable>& variables) {
  auto names = [&](const std::vector<int>& ids) {
    nlohmann::json out = nlohmann::json::array();
    for (int id : ids) out.push_back(variables[id].name);
    return out;
  };
  return {{"target", variables[blanket.target].name},
          {"pc", names(blanket.pc)},
          {"spouses", names(blanket.spouses)}};
}

}  // namespace laplace::mb
