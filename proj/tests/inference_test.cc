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

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "laplace/random.h"
#include "laplace/random_network.h"
#include "test_util.h"

namespace laplace::bn {
namespace {

using ::testing::HasSubstr;

Evidence RandomEvidence(int nodes, int target, Rng& rng,
                        const std::vector<int>& cardinalities) {
  Evidence evidence(nodes, kUnobserved);
  for (int v = 0; v < nodes; ++v) {
    if (v != target && rng.Bernoulli(0.5)) {
      evidence[v] = static_cast<int>(rng.UniformInt(cardinalities[v]));
    }
  }
  return evidence;
}

TEST(Posterior, MatchesBruteForceWithBothMethods) {
  Rng rng(3);
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const RandomNetworkOptions options{.num_nodes = 10,
                                       .cardinality = seed % 3 == 0 ? 3 : 2,
                                       .edge_probability = 0.4};
    const BayesianNetwork network = RandomNetwork(options, seed);
    const int target = static_cast<int>(rng.UniformInt(10));
    const Evidence evidence = RandomEvidence(10, target, rng, network.cardinalities());
    const auto expected = test_util::BruteForcePosterior(network, target, evidence);
    for (auto method : {InferenceMethod::kEnumeration, InferenceMethod::kVariableElimination}) {
      LAPLACE_ASSERT_OK_AND_ASSIGN(const auto posterior,
                                   Posterior(network, target, evidence, method));
      ASSERT_EQ(posterior.size(), expected.size());
      for (size_t s = 0; s < expected.size(); ++s) {
        EXPECT_NEAR(posterior[s], expected[s], 1e-12);
      }
    }
  }
}

TEST(Posterior, RootPriorAndFullBlanketEvidence) {
  const BayesianNetwork reference = test_util::SpouseNetwork();
  LAPLACE_ASSERT_OK_AND_ASSIGN(const auto prior,
                               Posterior(reference, 0, Evidence(7, kUnobserved)));
  EXPECT_NEAR(prior[0], 0.5, 1e-15);

  const Evidence evidence = {1, 0, kUnobserved, 1, 1, 0, 1};
  LAPLACE_ASSERT_OK_AND_ASSIGN(const auto posterior, Posterior(reference, 2, evidence));
  std::vector<double> expected(2);
  for (int t = 0; t < 2; ++t) {
    std::vector<int> a = evidence;
    a[2] = t;
    expected[t] = test_util::CptEntry(reference, 2, a) * test_util::CptEntry(reference, 3, a) *
                  test_util::CptEntry(reference, 4, a);
  }
  const double total = expected[0] + expected[1];
  EXPECT_NEAR(posterior[0], expected[0] / total, 1e-12);
}

TEST(Posterior, BlanketEvidenceEqualsFullEvidence) {
  Rng rng(9);
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const BayesianNetwork network = RandomNetwork({.num_nodes = 9}, 40 + seed);
    const int target = static_cast<int>(rng.UniformInt(9));
    std::vector<int> full(9);
    for (int v = 0; v < 9; ++v) full[v] = static_cast<int>(rng.UniformInt(2));
    Evidence all(full.begin(), full.end());
    all[target] = kUnobserved;
    Evidence blanket(9, kUnobserved);
    for (int v : DsepBlanket(network.dag(), target)) blanket[v] = full[v];
    LAPLACE_ASSERT_OK_AND_ASSIGN(const auto a, Posterior(network, target, all));
    LAPLACE_ASSERT_OK_AND_ASSIGN(const auto b, Posterior(network, target, blanket));
    for (size_t s = 0; s < a.size(); ++s) EXPECT_NEAR(a[s], b[s], 1e-9);
  }
}

TEST(Posterior, ZeroProbabilityEvidenceNamesTheEvidence) {
  const BayesianNetwork network = test_util::MakeNetwork(
      {{"A", {"no", "yes"}}, {"B", {"no", "yes"}}}, {{0, 1}},
      {{0.5, 0.5}, {1.0, 0.0, 0.5, 0.5}});
  const auto posterior = Posterior(network, 1, {1, kUnobserved});
  ASSERT_TRUE(posterior.ok());
  const auto impossible = Posterior(network, 0, {kUnobserved, 1});
  ASSERT_TRUE(impossible.ok());
  EXPECT_NEAR((*impossible)[1], 1, 1e-15);
  const BayesianNetwork blocked = test_util::MakeNetwork(
      {{"A", {"no", "yes"}}, {"B", {"no", "yes"}}, {"C", {"no", "yes"}}}, {{0, 1}},
      {{1.0, 0.0}, {1.0, 0.0, 0.5, 0.5}, {0.5, 0.5}});
  const auto failed = Posterior(blocked, 2, {kUnobserved, 1, kUnobserved});
  ASSERT_FALSE(failed.ok());
  EXPECT_THAT(failed.status().message(), HasSubstr("B=yes"));
}

TEST(ArgMax, LowestIndexWinsTies) {
  EXPECT_EQ(ArgMax(std::vector<double>{0.2, 0.5, 0.3}), 1);
  EXPECT_EQ(ArgMax(std::vector<double>{0.5, 0.5}), 0);
  EXPECT_EQ(ArgMax(std::vector<double>{0.25, 0.375, 0.375}), 1);
}

TEST(MpeClass, MatchesBruteForceArgmax) {
  Rng rng(21);
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const BayesianNetwork network = RandomNetwork({.num_nodes = 8}, 500 + seed);
    const int target = static_cast<int>(rng.UniformInt(8));
    const Evidence evidence = RandomEvidence(8, target, rng, network.cardinalities());
    const auto expected = test_util::BruteForcePosterior(network, target, evidence);
    const int best = expected[1] > expected[0] + 1e-12 ? 1 : 0;
    LAPLACE_ASSERT_OK_AND_ASSIGN(const int mpe, MpeClass(network, target, evidence));
    EXPECT_EQ(mpe, best);
  }
}

}  // namespace
}  // namespace laplace::bn
