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

#include <set>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "laplace/bayes_net.h"
#include "laplace/random.h"
#include "laplace/random_network.h"
#include "laplace/stats.h"
#include "test_util.h"

namespace laplace::mb {
namespace {

using ::testing::ElementsAre;
using ::testing::IsEmpty;


dataset::Variable Binary(const char* name) { return {name, {"0", "1"}}; }

TEST(SepsetCache, FirstSetWinsForUnorderedPair) {
  SepsetCache cache;
  cache.Record(4, 1, {2});
  cache.Record(1, 4, {3, 5});
  ASSERT_NE(cache.Find(1, 4), nullptr);
  EXPECT_THAT(*cache.Find(4, 1), ElementsAre(2));
  EXPECT_EQ(cache.Find(1, 2), nullptr);
  EXPECT_EQ(cache.size(), 1);
}

TEST(IpcMb, RecoversParentsChildrenAndSpouses) {
  const bn::BayesianNetwork network = test_util::SpouseNetwork();
  const dataset::Dataset data = bn::ForwardSample(network, 50000, 4);
  const MarkovBlanket blanket = IpcMb(data, 2);
  EXPECT_THAT(blanket.pc, ElementsAre(0, 1, 3, 4));
  EXPECT_THAT(blanket.spouses, ElementsAre(5, 6));
  EXPECT_THAT(blanket.Members(), ElementsAre(0, 1, 3, 4, 5, 6));
}

TEST(IpcMb, IndependentVariablesGiveEmptyBlanket) {
  Rng rng(8);
  std::vector<std::vector<int>> rows(10000, std::vector<int>(5));
  for (auto& row : rows) {
    for (int& v : row) v = static_cast<int>(rng.UniformInt(2));
  }
  const MarkovBlanket blanket = IpcMb(test_util::MakeDataset({2, 2, 2, 2, 2}, rows), 0);
  EXPECT_THAT(blanket.Members(), IsEmpty());
}

TEST(RecognizePc, PureNoiseFalsePositivesAreRare) {
  int nonempty = 0;
  for (uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(seed);
    std::vector<std::vector<int>> rows(10000, std::vector<int>(6));
    for (auto& row : rows) {
      for (int& v : row) v = static_cast<int>(rng.UniformInt(3));
    }
    const auto data = test_util::MakeDataset({3, 3, 3, 3, 3, 3}, rows);
    const std::vector<int> candidates = {1, 2, 3, 4, 5};
    nonempty += !RecognizePc(data, 0, candidates, {}).pc.empty();
  }
  EXPECT_LE(nonempty, 2);
}

TEST(RecognizePc, ChainKeepsBothNeighbours) {
  const bn::BayesianNetwork chain = test_util::MakeNetwork(
      {Binary("A"), Binary("T"), Binary("B")}, {{0, 1}, {1, 2}},
      {{0.3, 0.7}, {0.85, 0.15, 0.2, 0.8}, {0.75, 0.25, 0.1, 0.9}});
  const auto data = bn::ForwardSample(chain, 50000, 12);
  const std::vector<int> candidates = {0, 2};
  EXPECT_THAT(RecognizePc(data, 1, candidates, {}).pc, ElementsAre(0, 2));
}

TEST(RecognizePc, ColliderExcludesSpouseAndRecordsSepset) {
  const bn::BayesianNetwork collider = test_util::MakeNetwork(
      {Binary("T"), Binary("C"), Binary("S")}, {{0, 1}, {2, 1}},
      {{0.5, 0.5}, {0.9, 0.1, 0.3, 0.7, 0.3, 0.7, 0.05, 0.95}, {0.4, 0.6}});
  const auto data = bn::ForwardSample(collider, 50000, 13);
  const std::vector<int> candidates = {1, 2};
  const PcResult result = RecognizePc(data, 0, candidates, {});
  EXPECT_THAT(result.pc, ElementsAre(1));
  ASSERT_NE(result.sepsets.Find(0, 2), nullptr);
  EXPECT_THAT(*result.sepsets.Find(0, 2), IsEmpty());
  const MarkovBlanket blanket = IpcMb(data, 0);
  EXPECT_THAT(blanket.spouses, ElementsAre(2));
}

TEST(IpcMb, DeterministicAcrossThreadCounts) {
  const auto network = bn::RandomNetwork({.num_nodes = 8}, 31);
  const auto data = bn::ForwardSample(network, 20000, 1);
  IpcMbOptions serial;
  IpcMbOptions parallel;
  parallel.threads = 4;
  for (int target = 0; target < 8; ++target) {
    const MarkovBlanket a = IpcMb(data, target, serial);
    const MarkovBlanket b = IpcMb(data, target, parallel);
    const MarkovBlanket c = IpcMb(data, target, serial);
    EXPECT_EQ(a.pc, b.pc);
    EXPECT_EQ(a.spouses, b.spouses);
    EXPECT_EQ(a.pc, c.pc);
    EXPECT_EQ(a.spouses, c.spouses);
  }
}

TEST(IpcMb, BlanketInvariants) {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const auto network = bn::RandomNetwork({.num_nodes = 8}, 100 + seed);
    const auto data = bn::ForwardSample(network, 20000, seed);
    for (int target = 0; target < 8; ++target) {
      const MarkovBlanket blanket = IpcMb(data, target);
      std::set<int> pc(blanket.pc.begin(), blanket.pc.end());
      for (int s : blanket.spouses) EXPECT_FALSE(pc.contains(s));
      EXPECT_FALSE(pc.contains(target));
      EXPECT_TRUE(std::is_sorted(blanket.pc.begin(), blanket.pc.end()));
      for (const auto& [pair, separator] : blanket.sepsets.entries()) {
        for (int v : separator) {
          EXPECT_NE(v, pair.first);
          EXPECT_NE(v, pair.second);
        }
      }
    }
  }
}

TEST(IpcMb, OutsideNodesAreSeparatedByTheRecoveredBlanket) {
  const bn::BayesianNetwork network = test_util::SpouseNetwork();
  const auto data = bn::ForwardSample(network, 50000, 9);
  int reliable = 0;
  for (int target = 0; target < network.num_nodes(); ++target) {
    const auto members = IpcMb(data, target).Members();
    for (int x = 0; x < network.num_nodes(); ++x) {
      if (x == target || std::find(members.begin(), members.end(), x) != members.end()) {
        continue;
      }
      const auto result = stats::ChiSquareCi(data, x, target, members);
      if (!result.reliable) continue;
      ++reliable;
      EXPECT_TRUE(result.independent) << "target " << target << ", outside node " << x;
    }
  }
  EXPECT_GT(reliable, 10);
}

TEST(ChiSquareCi, GraphBlanketSeparatesOutsideNodes) {
  int reliable = 0;
  int rejected = 0;
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const auto network = bn::RandomNetwork({.num_nodes = 8}, 200 + seed);
    const auto data = bn::ForwardSample(network, 30000, seed);
    for (int target = 0; target < 8; ++target) {
      const auto members = bn::DsepBlanket(network.dag(), target);
      if (members.size() > 4) continue;
      for (int x = 0; x < 8; ++x) {
        if (x == target || std::find(members.begin(), members.end(), x) != members.end()) {
          continue;
        }
        const auto result = stats::ChiSquareCi(data, x, target, members);
        if (!result.reliable) continue;
        ++reliable;
        rejected += !result.independent;
      }
    }
  }
  ASSERT_GT(reliable, 20);
  EXPECT_LE(rejected, std::max(1, reliable / 50));
}

TEST(IpcMb, RecoveryAgainstGraphBlanket) {
  int good = 0;
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const auto network = bn::RandomNetwork({.num_nodes = 7}, 300 + seed);
    const auto data = bn::ForwardSample(network, 50000, seed);
    const int target = static_cast<int>(seed % 7);
    const auto truth = test_util::GraphBlanket(network.dag(), target);
    const auto found = IpcMb(data, target).Members();
    int hits = 0;
    for (int v : found) hits += truth.contains(v);
    const double precision = found.empty() ? 1 : static_cast<double>(hits) / found.size();
    const double recall = truth.empty() ? 1 : static_cast<double>(hits) / truth.size();
    const double f1 = precision + recall > 0 ? 2 * precision * recall / (precision + recall) : 0;
    good += f1 >= 0.9;
  }
  EXPECT_GE(good, 4);
}

TEST(IpcMb, JsonUsesNames) {
  const bn::BayesianNetwork network = test_util::SpouseNetwork();
  const auto data = bn::ForwardSample(network, 50000, 4);
  const nlohmann::json json = ToJson(IpcMb(data, 2), data.variables());
  EXPECT_EQ(json["target"], "T");
  EXPECT_EQ(json["pc"], nlohmann::json({"X1", "X2", "X3", "X4"}));
  EXPECT_EQ(json["spouses"], nlohmann::json({"X5", "X6"}));
}

}  // namespace
}  // namespace laplace::mb
