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

#include "laplace/dataset.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "laplace/logging.h"
#include "laplace/random.h"
#include "laplace/status_macros.h"

namespace laplace::dataset {
namespace {

std::optional<double> ParseNumber(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() ||
      !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

// Sorts labels numerically when all parse as numbers, lexicographically
// otherwise.
void SortStateLabels(std::vector<std::string>& labels) {
  const bool numeric = std::all_of(labels.begin(), labels.end(), [](auto& s) {
    return ParseNumber(s).has_value();
  });
  if (numeric) {
    std::stable_sort(labels.begin(), labels.end(), [](auto& a, auto& b) {
      return *ParseNumber(a) < *ParseNumber(b);
    });
  } else {
    std::sort(labels.begin(), labels.end());
  }
}

absl::StatusOr<std::pair<Variable, std::vector<int>>> EncodeCategorical(
    const RawColumn& column) {
  std::set<std::string> distinct(column.text.begin(), column.text.end());
  Variable variable{column.name, {distinct.begin(), distinct.end()}};
  SortStateLabels(variable.states);
  if (variable.cardinality() < 2) {
    LogWarning(absl::StrCat("column '", column.name,
                            "' has a single value; adding sentinel state"));
    variable.states.emplace_back(kSentinelState);
  }
  std::map<std::string_view, int> index;
  for (int s = 0; s < variable.cardinality(); ++s) {
    index[variable.states[s]] = s;
  }
  std::vector<int> values(column.text.size());
  for (size_t r = 0; r < column.text.size(); ++r) {
    values[r] = index.at(column.text[r]);
  }
  return std::make_pair(std::move(variable), std::move(values));
}

std::string FormatEdge(double value, int precision) {
  return absl::StrFormat("%.*g", precision, value);
}

std::string CsvEscape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::optional<int> Variable::StateIndex(std::string_view label) const {
  for (int s = 0; s < cardinality(); ++s) {
    if (states[s] == label) return s;
  }
  return std::nullopt;
}

absl::Status ValidateVariable(const Variable& variable) {
  if (variable.cardinality() < 2) {
    return absl::InvalidArgumentError(absl::StrCat(
        "variable '", variable.name, "' has fewer than two states"));
  }
  std::set<std::string_view> seen;
  for (const auto& s : variable.states) {
    if (!seen.insert(s).second) {
      return absl::InvalidArgumentError(absl::StrCat(
          "variable '", variable.name, "' has duplicate state '", s, "'"));
    }
  }
  return absl::OkStatus();
}

Dataset::Dataset(std::vector<Variable> variables,
                 std::vector<std::vector<int>> columns, int64_t num_rows)
    : variables_(std::move(variables)),
      columns_(std::move(columns)),
      num_rows_(num_rows) {}

absl::StatusOr<Dataset> Dataset::Create(std::vector<Variable> variables,
                                        std::vector<std::vector<int>> columns) {
  if (variables.size() != columns.size()) {
    return absl::InvalidArgumentError("variable and column counts differ");
  }
  const int64_t rows = columns.empty() ? 0 : columns[0].size();
  Dataset data(std::move(variables), std::move(columns), rows);
  RETURN_IF_ERROR(data.Validate());
  return data;
}

absl::StatusOr<Dataset> Dataset::FromRows(
    std::vector<Variable> variables, const std::vector<std::vector<int>>& rows) {
  std::vector<std::vector<int>> columns(variables.size());
  for (auto& c : columns) c.reserve(rows.size());
  for (size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != variables.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("row ", r, " has ", rows[r].size(), " values, expected ",
                       variables.size()));
    }
    for (size_t c = 0; c < rows[r].size(); ++c) columns[c].push_back(rows[r][c]);
  }
  Dataset data(std::move(variables), std::move(columns),
               static_cast<int64_t>(rows.size()));
  RETURN_IF_ERROR(data.Validate());
  return data;
}

absl::Status Dataset::Validate() const {
  if (variables_.size() != columns_.size()) {
    return absl::InvalidArgumentError("variable and column counts differ");
  }
  std::set<std::string_view> names;
  for (int c = 0; c < num_variables(); ++c) {
    RETURN_IF_ERROR(ValidateVariable(variables_[c]));
    if (!names.insert(variables_[c].name).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate variable name '", variables_[c].name, "'"));
    }
    if (static_cast<int64_t>(columns_[c].size()) != num_rows_) {
      return absl::InvalidArgumentError(
          absl::StrCat("column '", variables_[c].name, "' has ",
                       columns_[c].size(), " rows, expected ", num_rows_));
    }
    const int card = variables_[c].cardinality();
    for (int64_t r = 0; r < num_rows_; ++r) {
      if (columns_[c][r] < 0 || columns_[c][r] >= card) {
        return absl::InvalidArgumentError(
            absl::StrCat("row ", r, ", column '", variables_[c].name,
                         "': state index ", columns_[c][r], " out of range"));
      }
    }
  }
  return absl::OkStatus();
}

std::vector<int> Dataset::cardinalities() const {
  std::vector<int> out(variables_.size());
  for (size_t i = 0; i < variables_.size(); ++i) {
    out[i] = variables_[i].cardinality();
  }
  return out;
}

std::vector<int> Dataset::Row(int64_t row) const {
  std::vector<int> out(columns_.size());
  for (size_t c = 0; c < columns_.size(); ++c) out[c] = columns_[c][row];
  return out;
}

std::optional<int> Dataset::VariableIndex(std::string_view name) const {
  for (int c = 0; c < num_variables(); ++c) {
    if (variables_[c].name == name) return c;
  }
  return std::nullopt;
}

std::vector<std::string> Dataset::VariableNames() const {
  std::vector<std::string> out;
  for (const auto& v : variables_) out.push_back(v.name);
  return out;
}

Dataset Dataset::SelectColumns(std::span<const int> columns) const {
  std::vector<Variable> variables;
  std::vector<std::vector<int>> values;
  for (int c : columns) {
    variables.push_back(variables_[c]);
    values.push_back(columns_[c]);
  }
  return Dataset(std::move(variables), std::move(values), num_rows_);
}

Dataset Dataset::SelectRows(std::span<const int64_t> rows) const {
  std::vector<std::vector<int>> values(columns_.size());
  for (size_t c = 0; c < columns_.size(); ++c) {
    values[c].reserve(rows.size());
    for (int64_t r : rows) values[c].push_back(columns_[c][r]);
  }
  return Dataset(variables_, std::move(values),
                 static_cast<int64_t>(rows.size()));
}

Dataset Dataset::WithColumn(Variable variable, std::vector<int> values) const {
  std::vector<Variable> variables = variables_;
  std::vector<std::vector<int>> columns = columns_;
  variables.push_back(std::move(variable));
  columns.push_back(std::move(values));
  return Dataset(std::move(variables), std::move(columns), num_rows_);
}

FrequencyTable ComputeFrequencyTable(const Dataset& data) {
  FrequencyTable table;
  table.probabilities.resize(data.num_variables());
  const double k = static_cast<double>(data.num_rows());
  for (int c = 0; c < data.num_variables(); ++c) {
    std::vector<int64_t> counts(data.cardinality(c), 0);
    for (int v : data.column(c)) ++counts[v];
    auto& p = table.probabilities[c];
    p.resize(counts.size());
    for (size_t s = 0; s < counts.size(); ++s) p[s] = counts[s] / k;
  }
  return table;
}

std::pair<std::vector<int64_t>, std::vector<int64_t>> SplitIndices(
    int64_t num_rows, double train_fraction, uint64_t seed) {
  std::vector<int64_t> order(num_rows);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.Shuffle(order);
  int64_t train_rows = std::llround(train_fraction * num_rows);
  if (num_rows >= 2) train_rows = std::clamp<int64_t>(train_rows, 1, num_rows - 1);
  std::vector<int64_t> train(order.begin(), order.begin() + train_rows);
  std::vector<int64_t> test(order.begin() + train_rows, order.end());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {std::move(train), std::move(test)};
}

std::pair<Dataset, Dataset> Split(const Dataset& data, double train_fraction,
                                  uint64_t seed) {
  const auto [train, test] = SplitIndices(data.num_rows(), train_fraction, seed);
  return {data.SelectRows(train), data.SelectRows(test)};
}

// ---------------------------------------------------------------------------

std::optional<int> Table::ColumnIndex(std::string_view name) const {
  for (size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].name == name) return static_cast<int>(c);
  }
  return std::nullopt;
}

Table Table::SelectRows(std::span<const int64_t> rows) const {
  Table out;
  out.num_rows = static_cast<int64_t>(rows.size());
  for (const auto& column : columns) {
    RawColumn selected{column.name, column.kind, column.declared, {}, {}};
    for (int64_t r : rows) {
      selected.text.push_back(column.text[r]);
      if (!column.numbers.empty()) selected.numbers.push_back(column.numbers[r]);
    }
    out.columns.push_back(std::move(selected));
  }
  return out;
}

absl::StatusOr<std::vector<std::string>> SplitCsvLine(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && field.empty() && !was_quoted) {
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else {
      field += c;
    }
  }
  if (quoted) return absl::InvalidArgumentError("unterminated quoted field");
  fields.push_back(std::move(field));
  return fields;
}

absl::StatusOr<Table> ParseCsv(std::string_view text, const Schema& schema) {
  std::vector<std::string_view> lines;
  size_t start = 0;
  while (start < text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) return absl::InvalidArgumentError("empty CSV input");

  std::string_view header_line = lines[0];
  if (header_line.starts_with("\xEF\xBB\xBF")) header_line.remove_prefix(3);
  ASSIGN_OR_RETURN(std::vector<std::string> header, SplitCsvLine(header_line));
  std::set<std::string_view> names;
  for (const auto& name : header) {
    if (name.empty()) return absl::InvalidArgumentError("empty column name");
    if (!names.insert(name).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate column name '", name, "'"));
    }
  }
  for (const auto& [name, kind] : schema) {
    if (!names.contains(name)) {
      return absl::InvalidArgumentError(
          absl::StrCat("schema column '", name, "' not in header"));
    }
  }

  Table table;
  table.columns.resize(header.size());
  for (size_t c = 0; c < header.size(); ++c) table.columns[c].name = header[c];
  for (size_t i = 1; i < lines.size(); ++i) {
    // Rows are numbered as in the file (header is row 1).
    const size_t row_number = i + 1;
    auto fields = SplitCsvLine(lines[i]);
    if (!fields.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(
          "row ", row_number, ": ", fields.status().message()));
    }
    if (fields->size() != header.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("row ", row_number, " has ", fields->size(),
                       " fields, header has ", header.size()));
    }
    for (size_t c = 0; c < header.size(); ++c) {
      if ((*fields)[c].empty()) {
        return absl::InvalidArgumentError(
            absl::StrCat("row ", row_number, ", column '", header[c],
                         "': missing value"));
      }
      table.columns[c].text.push_back(std::move((*fields)[c]));
    }
  }
  table.num_rows = static_cast<int64_t>(lines.size()) - 1;
  if (table.num_rows == 0) return absl::InvalidArgumentError("CSV has no rows");

  for (auto& column : table.columns) {
    const auto declared = schema.find(column.name);
    std::vector<double> numbers;
    numbers.reserve(column.text.size());
    for (const auto& cell : column.text) {
      const auto value = ParseNumber(cell);
      if (!value) break;
      numbers.push_back(*value);
    }
    const bool all_numeric = numbers.size() == column.text.size();
    if (declared != schema.end()) {
      column.declared = true;
      column.kind = declared->second;
      if (column.kind == ColumnKind::kNumeric && !all_numeric) {
        return absl::InvalidArgumentError(
            absl::StrCat("row ", numbers.size() + 2, ", column '", column.name,
                         "': declared numeric but value '",
                         column.text[numbers.size()], "' is not a number"));
      }
    } else {
      column.kind = all_numeric ? ColumnKind::kNumeric : ColumnKind::kCategorical;
    }
    if (column.kind == ColumnKind::kNumeric) column.numbers = std::move(numbers);
  }
  return table;
}

absl::StatusOr<Table> LoadCsv(const std::string& path, const Schema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open '", path, "'"));
  std::stringstream buffer;
  buffer << in.rdbuf();
  auto table = ParseCsv(buffer.str(), schema);
  if (!table.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": ", table.status().message()));
  }
  return table;
}

std::string ToCsv(const Dataset& data) {
  std::string out;
  for (int c = 0; c < data.num_variables(); ++c) {
    if (c > 0) out += ',';
    out += CsvEscape(data.variable(c).name);
  }
  out += '\n';
  for (int64_t r = 0; r < data.num_rows(); ++r) {
    for (int c = 0; c < data.num_variables(); ++c) {
      if (c > 0) out += ',';
      out += CsvEscape(data.variable(c).states[data.at(r, c)]);
    }
    out += '\n';
  }
  return out;
}

absl::Status WriteCsv(const Dataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return absl::InternalError(absl::StrCat("cannot write '", path, "'"));
  out << ToCsv(data);
  if (!out) return absl::InternalError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

// ---------------------------------------------------------------------------

int DiscretizationSpec::BinIndex(std::span<const double> edges, double value) {
  if (edges.size() <= 2) return 0;
  const auto interior = edges.subspan(1, edges.size() - 2);
  return static_cast<int>(
      std::upper_bound(interior.begin(), interior.end(), value) -
      interior.begin());
}

std::vector<std::string> DiscretizationSpec::BinLabels(
    std::span<const double> edges) {
  for (int precision : {6, 17}) {
    std::vector<std::string> labels;
    for (size_t b = 0; b + 1 < edges.size(); ++b) {
      const bool last = b + 2 == edges.size();
      labels.push_back(absl::StrCat("[", FormatEdge(edges[b], precision), ",",
                                    FormatEdge(edges[b + 1], precision),
                                    last ? "]" : ")"));
    }
    if (labels.size() == 1) labels.emplace_back(kSentinelState);
    if (std::set<std::string>(labels.begin(), labels.end()).size() ==
        labels.size()) {
      return labels;
    }
  }
  // Edges are strictly increasing, so 17 significant digits always separate
  // them.
  return {};
}

absl::StatusOr<Dataset> DiscretizationSpec::Apply(
    const Table& table, const std::vector<Variable>& schema) const {
  std::vector<std::vector<int>> columns;
  for (const Variable& variable : schema) {
    const auto index = table.ColumnIndex(variable.name);
    if (!index) {
      return absl::InvalidArgumentError(
          absl::StrCat("column '", variable.name, "' missing from input"));
    }
    const RawColumn& column = table.columns[*index];
    std::vector<int> values(table.num_rows);
    const auto binned = edges.find(variable.name);
    if (binned != edges.end()) {
      if (column.kind != ColumnKind::kNumeric) {
        return absl::InvalidArgumentError(
            absl::StrCat("column '", variable.name, "' is not numeric"));
      }
      for (int64_t r = 0; r < table.num_rows; ++r) {
        values[r] = BinIndex(binned->second, column.numbers[r]);
      }
    } else {
      for (int64_t r = 0; r < table.num_rows; ++r) {
        const auto state = variable.StateIndex(column.text[r]);
        if (!state) {
          return absl::InvalidArgumentError(absl::StrCat(
              "row ", r + 2, ", column '", variable.name, "': unknown state '",
              column.text[r], "'"));
        }
        values[r] = *state;
      }
    }
    columns.push_back(std::move(values));
  }
  return Dataset(schema, std::move(columns), table.num_rows);
}

nlohmann::json DiscretizationSpec::ToJson() const {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [name, e] : edges) out[name] = e;
  return out;
}

absl::StatusOr<DiscretizationSpec> DiscretizationSpec::FromJson(
    const nlohmann::json& json) {
  if (!json.is_object()) {
    return absl::InvalidArgumentError("discretization spec must be an object");
  }
  DiscretizationSpec spec;
  for (const auto& [name, value] : json.items()) {
    if (!value.is_array() || value.size() < 2) {
      return absl::InvalidArgumentError(
          absl::StrCat("feature '", name, "': expected at least two edges"));
    }
    std::vector<double> e;
    for (const auto& v : value) {
      if (!v.is_number()) {
        return absl::InvalidArgumentError(
            absl::StrCat("feature '", name, "': non-numeric edge"));
      }
      e.push_back(v.get<double>());
    }
    for (size_t i = 1; i < e.size(); ++i) {
      if (!(e[i] > e[i - 1])) {
        return absl::InvalidArgumentError(
            absl::StrCat("feature '", name, "': edges not strictly increasing"));
      }
    }
    spec.edges[name] = std::move(e);
  }
  return spec;
}

absl::StatusOr<std::pair<Dataset, DiscretizationSpec>> Discretize(
    const Table& table, int bins) {
  if (bins < 2) return absl::InvalidArgumentError("bins must be >= 2");
  DiscretizationSpec spec;
  std::vector<Variable> variables;
  std::vector<std::vector<int>> columns;
  for (const RawColumn& column : table.columns) {
    bool bin_it = column.kind == ColumnKind::kNumeric;
    if (bin_it && !column.declared) {
      const std::set<double> distinct(column.numbers.begin(),
                                      column.numbers.end());
      bin_it = static_cast<int>(distinct.size()) > bins;
    }
    if (!bin_it) {
      ASSIGN_OR_RETURN(auto encoded, EncodeCategorical(column));
      variables.push_back(std::move(encoded.first));
      columns.push_back(std::move(encoded.second));
      continue;
    }
    const auto [lo_it, hi_it] =
        std::minmax_element(column.numbers.begin(), column.numbers.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    std::vector<double> e;
    if (hi > lo) {
      const double width = (hi - lo) / bins;
      for (int b = 0; b < bins; ++b) e.push_back(lo + b * width);
      e.push_back(hi);
      // Rounding can collapse edges on tiny ranges; drop duplicates.
      e.erase(std::unique(e.begin(), e.end()), e.end());
    } else {
      LogWarning(absl::StrCat("numeric column '", column.name,
                              "' is constant; using a two-state variable"));
      e = {lo, lo + 1};
    }
    std::vector<int> values(table.num_rows);
    for (int64_t r = 0; r < table.num_rows; ++r) {
      values[r] = DiscretizationSpec::BinIndex(e, column.numbers[r]);
    }
    variables.push_back({column.name, DiscretizationSpec::BinLabels(e)});
    columns.push_back(std::move(values));
    spec.edges[column.name] = std::move(e);
  }
  ASSIGN_OR_RETURN(Dataset data,
                   Dataset::Create(std::move(variables), std::move(columns)));
  return std::make_pair(std::move(data), std::move(spec));
}

absl::StatusOr<Dataset> ToCategorical(const Table& table) {
  std::vector<Variable> variables;
  std::vector<std::vector<int>> columns;
  for (const RawColumn& column : table.columns) {
    ASSIGN_OR_RETURN(auto encoded, EncodeCategorical(column));
    variables.push_back(std::move(encoded.first));
    columns.push_back(std::move(encoded.second));
  }
  return Dataset::Create(std::move(variables), std::move(columns));
}

nlohmann::json VariablesToJson(const std::vector<Variable>& variables) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& v : variables) {
    out.push_back({{"name", v.name}, {"states", v.states}});
  }
  return out;
}

absl::StatusOr<std::vector<Variable>> VariablesFromJson(
    const nlohmann::json& json) {
  if (!json.is_array()) {
    return absl::InvalidArgumentError("'variables' must be an array");
  }
  std::vector<Variable> out;
  for (size_t i = 0; i < json.size(); ++i) {
    const auto& entry = json[i];
    if (!entry.is_object() || !entry.contains("name") ||
        !entry.contains("states") || !entry["name"].is_string() ||
        !entry["states"].is_array()) {
      return absl::InvalidArgumentError(
          absl::StrCat("variables[", i, "]: expected {name, states}"));
    }
    Variable v;
    v.name = entry["name"].get<std::string>();
    for (const auto& s : entry["states"]) {
      if (!s.is_string()) {
        return absl::InvalidArgumentError(
            absl::StrCat("variables[", i, "]: state labels must be strings"));
      }
      v.states.push_back(s.get<std::string>());
    }
    auto status = ValidateVariable(v);
    if (!status.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("variables[", i, "]: ", status.message()));
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace laplace::dataset
