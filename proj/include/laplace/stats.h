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

#ifndef LAPLACE_STATS_H_
#define LAPLACE_STATS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "laplace/dataset.h"

namespace laplace::stats {

inline constexpr double kDefaultAlpha = 0.001;
// A test is reliable when rows >= kDefaultRowsPerCell * (full dof).
inline constexpr double kDefaultRowsPerCell = 5.0;

struct ContingencyEntry {
  int x = 0;
  int y = 0;
  int64_t stratum = 0;
  int64_t count = 0;
};

// Sparse counts of (x, y, z-stratum) triples. The stratum is the mixed-radix
// index of the conditioning variables' states, first variable least
// significant. Entries are sorted by (stratum, y, x) and all non-zero.
struct ContingencyTable {
  int x_cardinality = 0;
  int y_cardinality = 0;
  int64_t num_strata = 1;
  int64_t total = 0;
  std::vector<ContingencyEntry> entries;
};

// One pass over the rows.
ContingencyTable BuildContingencyTable(const dataset::Dataset& data, int x,
                                       int y, std::span<const int> z);

struct CiTestOptions {
  double alpha = kDefaultAlpha;
  double rows_per_cell = kDefaultRowsPerCell;
};

struct CiTestResult {
  double statistic = 0;
  int64_t dof = 0;
  double p_value = 1;
  bool independent = true;
  bool reliable = false;

  bool operator==(const CiTestResult&) const = default;
};

// Pearson chi-square over the strata of `table`. Degrees of freedom only count
// states with a non-zero marginal inside each stratum. `full_dof` is the
// unreduced (rx - 1)(ry - 1) * prod(rz) used by the reliability check.
CiTestResult ChiSquareTest(const ContingencyTable& table, double full_dof,
                           const CiTestOptions& options);

// Tests x _|_ y | z on `data`. Symmetric in x and y and insensitive to the
// order of z.
CiTestResult ChiSquareCi(const dataset::Dataset& data, int x, int y,
                         std::span<const int> z,
                         const CiTestOptions& options = {});

// P(chi2_dof > statistic), via the regularized upper incomplete gamma
// function.
double ChiSquareSurvival(double statistic, double dof);

}  // namespace laplace::stats

#endif  // LAPLACE_STATS_H_
