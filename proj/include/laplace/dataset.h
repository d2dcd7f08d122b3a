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

#ifndef LAPLACE_DATASET_H_
#define LAPLACE_DATASET_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"

namespace laplace::dataset {

// Label given to the filler state of a variable that only ever showed one
// value, so that every variable has at least two states.
inline constexpr std::string_view kSentinelState = "<other>";

// Default number of equal-width bins for numeric features.
inline constexpr int kDefaultBins = 20;

// A discrete random variable: a name and an ordered list of state labels.
struct Variable {
  std::string name;
  std::vector<std::string> states;

  int cardinality() const { return static_cast<int>(states.size()); }
  std::optional<int> StateIndex(std::string_view label) const;

  bool operator==(const Variable&) const = default;
};

// Checks cardinality >= 2 and unique state labels.
absl::Status ValidateVariable(const Variable& variable);

// Immutable table of categorical observations. Cells hold state indices into
// the owning column's Variable. Storage is column-major since every consumer
// (counting, CI tests, training) scans columns.
class Dataset {
 public:
  Dataset() = default;

  // Unchecked. Callers guarantee equal column lengths and in-range cells;
  // use Create() for untrusted input.
  Dataset(std::vector<Variable> variables, std::vector<std::vector<int>> columns,
          int64_t num_rows);

  static absl::StatusOr<Dataset> Create(std::vector<Variable> variables,
                                        std::vector<std::vector<int>> columns);

  // Builds a dataset from rows of state indices.
  static absl::StatusOr<Dataset> FromRows(
      std::vector<Variable> variables,
      const std::vector<std::vector<int>>& rows);

  int num_variables() const { return static_cast<int>(variables_.size()); }
  int64_t num_rows() const { return num_rows_; }

  const std::vector<Variable>& variables() const { return variables_; }
  const Variable& variable(int index) const { return variables_[index]; }
  int cardinality(int index) const { return variables_[index].cardinality(); }
  std::vector<int> cardinalities() const;

  std::span<const int> column(int index) const { return columns_[index]; }
  int at(int64_t row, int column) const { return columns_[column][row]; }
  std::vector<int> Row(int64_t row) const;

  std::optional<int> VariableIndex(std::string_view name) const;
  std::vector<std::string> VariableNames() const;

  // Projection onto the given columns, in the given order.
  Dataset SelectColumns(std::span<const int> columns) const;
  Dataset SelectRows(std::span<const int64_t> rows) const;
  // Returns a copy with one more column appended.
  Dataset WithColumn(Variable variable, std::vector<int> values) const;

  absl::Status Validate() const;

 private:
  std::vector<Variable> variables_;
  std::vector<std::vector<int>> columns_;
  int64_t num_rows_ = 0;
};

// Per-variable empirical marginals. probabilities[v][s] = count(v = s) / K.
struct FrequencyTable {
  std::vector<std::vector<double>> probabilities;
};

FrequencyTable ComputeFrequencyTable(const Dataset& data);

// Deterministic shuffled partition. Both parts keep ascending row order.
std::pair<Dataset, Dataset> Split(const Dataset& data, double train_fraction,
                                  uint64_t seed);
// Row indices of the train and test parts of Split().
std::pair<std::vector<int64_t>, std::vector<int64_t>> SplitIndices(
    int64_t num_rows, double train_fraction, uint64_t seed);

// ---------------------------------------------------------------------------
// Raw ingestion.

enum class ColumnKind { kCategorical, kNumeric };

// A column as read from CSV. Numeric columns keep both the text and the
// parsed values.
struct RawColumn {
  std::string name;
  ColumnKind kind = ColumnKind::kCategorical;
  // True when the kind comes from a user schema rather than inference.
  bool declared = false;
  std::vector<std::string> text;
  std::vector<double> numbers;
};

struct Table {
  std::vector<RawColumn> columns;
  int64_t num_rows = 0;

  std::optional<int> ColumnIndex(std::string_view name) const;
  Table SelectRows(std::span<const int64_t> rows) const;
};

// Declared column kinds by name. Columns not listed are inferred: numeric
// when every cell parses as a finite number.
using Schema = std::map<std::string, ColumnKind, std::less<>>;

absl::StatusOr<Table> ParseCsv(std::string_view text, const Schema& schema = {});
absl::StatusOr<Table> LoadCsv(const std::string& path,
                              const Schema& schema = {});

// Splits one CSV line into fields. Handles double-quoted fields.
absl::StatusOr<std::vector<std::string>> SplitCsvLine(std::string_view line);

// Writes the dataset as CSV with a header row and state labels as cells.
std::string ToCsv(const Dataset& data);
absl::Status WriteCsv(const Dataset& data, const std::string& path);

// Numeric column -> sorted bin edges (bins + 1 values).
struct DiscretizationSpec {
  std::map<std::string, std::vector<double>> edges;

  // Bin of `value` under `edges`. Values outside the range clamp to the
  // first or last bin.
  static int BinIndex(std::span<const double> edges, double value);
  // State labels of a binned variable, "[lo,hi)" and a closed last bin.
  static std::vector<std::string> BinLabels(std::span<const double> edges);

  // Maps a raw table onto `schema` (the variables of the discretized training
  // data). Numeric columns listed in `edges` are binned; other columns are
  // matched against the schema's state labels.
  absl::StatusOr<Dataset> Apply(const Table& table,
                                const std::vector<Variable>& schema) const;

  nlohmann::json ToJson() const;
  static absl::StatusOr<DiscretizationSpec> FromJson(const nlohmann::json& json);
};

// Equal-width binning of numeric columns over their observed min/max.
// Inferred-numeric columns with at most `bins` distinct values are kept as
// categorical. Constant columns become two-state variables with a sentinel
// state.
absl::StatusOr<std::pair<Dataset, DiscretizationSpec>> Discretize(
    const Table& table, int bins = kDefaultBins);

// Converts every column to categorical without binning.
absl::StatusOr<Dataset> ToCategorical(const Table& table);

nlohmann::json VariablesToJson(const std::vector<Variable>& variables);
absl::StatusOr<std::vector<Variable>> VariablesFromJson(
    const nlohmann::json& json);

}  // namespace laplace::dataset

#endif  // LAPLACE_DATASET_H_
