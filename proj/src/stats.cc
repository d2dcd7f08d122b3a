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

#include <algorithm>
#include <cmath>
#include <utility>

#include "boost/math/special_functions/gamma.hpp"

namespace laplace::stats {
namespace {

// Dense counting is used while the full cell array stays this small relative
// to the row count.
constexpr int64_t kDenseCellLimit = int64_t{1} << 16;

}  // namespace

ContingencyTable BuildContingencyTable(const dataset::Dataset& data, int x,
                                       int y, std::span<const int> z) {
  ContingencyTable table;
  table.x_cardinality = data.cardinality(x);
  table.y_cardinality = data.cardinality(y);
  table.total = data.num_rows();

  std::vector<int64_t> strides(z.size());
  for (size_t i = 0; i < z.size(); ++i) {
    strides[i] = table.num_strata;
    table.num_strata *= data.cardinality(z[i]);
  }
  const int64_t rows = data.num_rows();
  const int64_t xy_cells =
      static_cast<int64_t>(table.x_cardinality) * table.y_cardinality;
  const auto xs = data.column(x);
  const auto ys = data.column(y);

  // Cell key: (stratum * ry + y) * rx + x, which orders by (stratum, y, x).
  std::vector<int64_t> keys(rows);
  for (int64_t r = 0; r < rows; ++r) {
    keys[r] = static_cast<int64_t>(ys[r]) * table.x_cardinality + xs[r];
  }
  for (size_t i = 0; i < z.size(); ++i) {
    const auto zs = data.column(z[i]);
    const int64_t stride = strides[i] * xy_cells;
    for (int64_t r = 0; r < rows; ++r) keys[r] += zs[r] * stride;
  }

  const int64_t cells = table.num_strata * xy_cells;
  auto emit = [&](int64_t key, int64_t count) {
    ContingencyEntry e;
    e.x = static_cast<int>(key % table.x_cardinality);
    e.y = static_cast<int>((key / table.x_cardinality) % table.y_cardinality);
    e.stratum = key / xy_cells;
    e.count = count;
    table.entries.push_back(e);
  };
  if (cells <= std::max(kDenseCellLimit, 2 * rows)) {
    std::vector<int64_t> counts(cells, 0);
    for (int64_t key : keys) ++counts[key];
    for (int64_t key = 0; key < cells; ++key) {
      if (counts[key] > 0) emit(key, counts[key]);
    }
  } else {
    std::sort(keys.begin(), keys.end());
    for (int64_t i = 0; i < rows;) {
      int64_t j = i;
      while (j < rows && keys[j] == keys[i]) ++j;
      emit(keys[i], j - i);
      i = j;
    }
  }
  return table;
}

double ChiSquareSurvival(double statistic, double dof) {
  if (statistic <= 0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

CiTestResult ChiSquareTest(const ContingencyTable& table, double full_dof,
                           const CiTestOptions& options) {
  CiTestResult result;
  std::vector<int64_t> x_margin(table.x_cardinality);
  std::vector<int64_t> y_margin(table.y_cardinality);
  const auto& entries = table.entries;
  for (size_t begin = 0; begin < entries.size();) {
    size_t end = begin;
    while (end < entries.size() &&
           entries[end].stratum == entries[begin].stratum) {
      ++end;
    }
    std::fill(x_margin.begin(), x_margin.end(), 0);
    std::fill(y_margin.begin(), y_margin.end(), 0);
    int64_t n = 0;
    for (size_t i = begin; i < end; ++i) {
      x_margin[entries[i].x] += entries[i].count;
      y_margin[entries[i].y] += entries[i].count;
      n += entries[i].count;
    }
    const auto nonzero = [](const std::vector<int64_t>& m) {
      return std::count_if(m.begin(), m.end(), [](int64_t c) { return c > 0; });
    };
    const int64_t stratum_dof = (nonzero(x_margin) - 1) * (nonzero(y_margin) - 1);
    if (stratum_dof > 0) {
      // sum over all cells of (O - E)^2 / E == n * sum(O^2 / (rx * cy)) - n,
      // and zero cells contribute only through the closed form.
      double ratio = 0;
      for (size_t i = begin; i < end; ++i) {
        const double o = static_cast<double>(entries[i].count);
        ratio += o * o /
                 (static_cast<double>(x_margin[entries[i].x]) *
                  static_cast<double>(y_margin[entries[i].y]));
      }
      result.statistic += std::max(0.0, n * ratio - n);
      result.dof += stratum_dof;
    }
    begin = end;
  }
  if (result.dof == 0) {
    result.statistic = 0;
    result.p_value = 1;
    result.independent = true;
    result.reliable = false;
    return result;
  }
  result.p_value = ChiSquareSurvival(result.statistic,
                                     static_cast<double>(result.dof));
  result.reliable =
      static_cast<double>(table.total) >= options.rows_per_cell * full_dof;
  result.independent = !result.reliable || result.p_value > options.alpha;
  return result;
}

CiTestResult ChiSquareCi(const dataset::Dataset& data, int x, int y,
                         std::span<const int> z, const CiTestOptions& options) {
  if (x > y) std::swap(x, y);
  std::vector<int> sorted_z(z.begin(), z.end());
  std::sort(sorted_z.begin(), sorted_z.end());
  double full_dof = static_cast<double>(data.cardinality(x) - 1) *
                    static_cast<double>(data.cardinality(y) - 1);
  for (int v : sorted_z) full_dof *= data.cardinality(v);
  return ChiSquareTest(BuildContingencyTable(data, x, y, sorted_z), full_dof,
                       options);
}

}  // namespace laplace::stats
