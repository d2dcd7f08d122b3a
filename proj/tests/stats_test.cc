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

#include "laplace/stats.h"

#include <cmath>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "laplace/bayes_net.h"
#include "laplace/random.h"
#include "test_util.h"

namespace laplace::stats {
namespace {

using dataset::Dataset;

Dataset RandomBinaryData(int columns, int64_t rows, uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<int>> data(rows, std::vector<int>(columns));
  for (auto& row : data) {
    for (int& v : row) v = static_cast<int>(rng.UniformInt(2));
  }
  return test_util::MakeDataset(std::vector<int>(columns, 2), data);
}

TEST(Contingency, CountsSparseEntries) {
  const Dataset data = test_util::MakeDataset({2, 2}, {{0, 0}, {0, 0}, {1, 1}, {1, 0}});
  const ContingencyTable table = BuildContingencyTable(data, 0, 1, {});
  EXPECT_EQ(table.total, 4);
  ASSERT_EQ(table.entries.size(), 3);
  std::map<std::pair<int, int>, int64_t> counts;
  for (const auto& e : table.entries) counts[{e.x, e.y}] = e.count;
  EXPECT_EQ(counts[std::make_pair(0, 0)], 2);
  EXPECT_EQ(counts[std::make_pair(1, 1)], 1);
  EXPECT_EQ(counts[std::make_pair(1, 0)], 1);
}

TEST(Contingency, MixedRadixStrata) {
  const Dataset data = RandomBinaryData(4, 200, 3);
  const std::vector<int> z = {2, 3};
  const ContingencyTable table = BuildContingencyTable(data, 0, 1, z);
  EXPECT_EQ(table.num_strata, 4);
  int64_t total = 0;
  for (const auto& e : table.entries) {
    EXPECT_LT(e.stratum, 4);
    EXPECT_GT(e.count, 0);
    total += e.count;
  }
  EXPECT_EQ(total, 200);
  int64_t expected = 0;
  for (int64_t r = 0; r < 200; ++r) {
    expected += data.at(r, 0) == 1 && data.at(r, 1) == 0 && data.at(r, 2) == 1 &&
                data.at(r, 3) == 0;
  }
  int64_t found = 0;
  for (const auto& e : table.entries) {
    if (e.x == 1 && e.y == 0 && e.stratum == 1) found = e.count;
  }
  EXPECT_EQ(found, expected);
}

TEST(ChiSquare, MatchesClosedFormTwoByTwo) {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<int>> rows;
    double cells[2][2] = {};
    const int n = 40 + static_cast<int>(rng.UniformInt(400));
    for (int i = 0; i < n; ++i) {
      const int x = static_cast<int>(rng.UniformInt(2));
      const int y = rng.Bernoulli(x ? 0.7 : 0.4) ? 1 : 0;
      rows.push_back({x, y});
      cells[x][y] += 1;
    }
    if (cells[0][0] + cells[0][1] == 0 || cells[1][0] + cells[1][1] == 0 ||
        cells[0][0] + cells[1][0] == 0 || cells[0][1] + cells[1][1] == 0) {
      continue;
    }
    const Dataset data = test_util::MakeDataset({2, 2}, rows);
    const CiTestResult result = ChiSquareCi(data, 0, 1, {});
    EXPECT_NEAR(result.statistic,
                test_util::ChiSquare2x2(cells[0][0], cells[0][1], cells[1][0], cells[1][1]),
                1e-9);
    EXPECT_EQ(result.dof, 1);
  }
}

TEST(ChiSquare, SurvivalMatchesClosedForms) {
  for (double x : {0.0, 0.01, 0.5, 1.0, 3.84, 10.0, 30.0, 80.0}) {
    EXPECT_NEAR(ChiSquareSurvival(x, 1) / std::erfc(std::sqrt(x / 2)), 1, 1e-10);
    EXPECT_NEAR(ChiSquareSurvival(x, 2) / std::exp(-x / 2), 1, 1e-10);
  }
  EXPECT_NEAR(ChiSquareSurvival(10.828, 1), 0.001, 1e-5);
}

TEST(ChiSquare, SurvivalDecreasesInStatistic) {
  for (int dof : {1, 2, 5, 17}) {
    double previous = 1;
    for (double x = 0; x < 100; x += 0.7) {
      const double p = ChiSquareSurvival(x, dof);
      EXPECT_LE(p, previous);
      previous = p;
    }
  }
}

TEST(ChiSquare, PerfectDependence) {
  std::vector<std::vector<int>> rows;
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const int v = static_cast<int>(rng.UniformInt(2));
    rows.push_back({v, v});
  }
  const CiTestResult result = ChiSquareCi(test_util::MakeDataset({2, 2}, rows), 0, 1, {});
  EXPECT_FALSE(result.independent);
  EXPECT_TRUE(result.reliable);
}

TEST(ChiSquare, IndependentUniformPassesAtAlpha) {
  int independent = 0;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    independent += ChiSquareCi(RandomBinaryData(2, 10000, seed), 0, 1, {}).independent;
  }
  EXPECT_GE(independent, 99);
}

TEST(ChiSquare, ChainSeparatedByMiddle) {
  const bn::BayesianNetwork chain = test_util::MakeNetwork(
      {{"X", {"0", "1"}}, {"Z", {"0", "1"}}, {"Y", {"0", "1"}}}, {{0, 1}, {1, 2}},
      {{0.4, 0.6}, {0.8, 0.2, 0.25, 0.75}, {0.7, 0.3, 0.2, 0.8}});
  const Dataset data = bn::ForwardSample(chain, 50000, 9);
  EXPECT_FALSE(ChiSquareCi(data, 0, 2, {}).independent);
  const std::vector<int> z = {1};
  EXPECT_TRUE(ChiSquareCi(data, 0, 2, z).independent);
}

TEST(ChiSquare, SymmetricAndOrderInsensitive) {
  const bn::BayesianNetwork network = test_util::SpouseNetwork();
  const Dataset data = bn::ForwardSample(network, 3000, 2);
  for (int x = 0; x < 7; ++x) {
    for (int y = 0; y < 7; ++y) {
      if (x == y) continue;
      std::vector<int> z;
      for (int v = 6; v >= 0 && z.size() < 2; --v) {
        if (v != x && v != y) z.push_back(v);
      }
      std::vector<int> reversed(z.rbegin(), z.rend());
      EXPECT_EQ(ChiSquareCi(data, x, y, z), ChiSquareCi(data, y, x, reversed));
    }
  }
}

TEST(ChiSquare, InvariantUnderStateRelabelling) {
  const Dataset data = RandomBinaryData(3, 500, 21);
  std::vector<std::vector<int>> flipped_rows;
  for (int64_t r = 0; r < data.num_rows(); ++r) {
    auto row = data.Row(r);
    row[0] = 1 - row[0];
    row[2] = 1 - row[2];
    flipped_rows.push_back(row);
  }
  const Dataset flipped = test_util::MakeDataset({2, 2, 2}, flipped_rows);
  const std::vector<int> z = {2};
  EXPECT_NEAR(ChiSquareCi(data, 0, 1, z).statistic,
              ChiSquareCi(flipped, 0, 1, z).statistic, 1e-9);
}

TEST(ChiSquare, DegenerateAndUnreliableReportIndependent) {
  const Dataset constant = test_util::MakeDataset({2, 2}, {{0, 0}, {0, 1}, {0, 1}, {0, 0}});
  const CiTestResult degenerate = ChiSquareCi(constant, 0, 1, {});
  EXPECT_EQ(degenerate.dof, 0);
  EXPECT_TRUE(degenerate.independent);
  EXPECT_FALSE(degenerate.reliable);

  const Dataset tiny = test_util::MakeDataset({2, 2}, {{0, 0}, {1, 1}, {0, 0}, {1, 1}});
  const CiTestResult unreliable = ChiSquareCi(tiny, 0, 1, {});
  EXPECT_FALSE(unreliable.reliable);
  EXPECT_TRUE(unreliable.independent);
}

TEST(ChiSquare, DofSkipsEmptyStatesPerStratum) {
  // In stratum z=0 only x=0 occurs, so it contributes no degrees of freedom.
  std::vector<std::vector<int>> rows;
  for (int i = 0; i < 100; ++i) {
    rows.push_back({0, i % 2, 0});
    rows.push_back({i % 2, (i / 2) % 2, 1});
  }
  const std::vector<int> z = {2};
  const CiTestResult result = ChiSquareCi(test_util::MakeDataset({2, 2, 2}, rows), 0, 1, z);
  EXPECT_EQ(result.dof, 1);
}

}  // namespace
}  // namespace laplace::stats
