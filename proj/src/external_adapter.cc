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

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "laplace/models.h"

namespace laplace::models {
namespace {

std::string ShellQuote(const std::string& text) {
  std::string out = "'";
  for (char c : text) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  out += "'";
  return out;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Removes the scratch directory on scope exit.
class ScratchDir {
 public:
  static absl::StatusOr<ScratchDir> Create(const std::string& parent) {
    std::filesystem::path base =
        parent.empty() ? std::filesystem::temp_directory_path()
                       : std::filesystem::path(parent);
    std::string pattern = (base / "laplace-predict-XXXXXX").string();
    if (mkdtemp(pattern.data()) == nullptr) {
      return absl::InternalError(
          absl::StrCat("cannot create scratch directory under ", base.string()));
    }
    return ScratchDir(pattern);
  }
  ScratchDir(ScratchDir&& other) noexcept : path_(std::move(other.path_)) {
    other.path_.clear();
  }
  ScratchDir(const ScratchDir&) = delete;
  ~ScratchDir() {
    if (!path_.empty()) {
      std::error_code ignored;
      std::filesystem::remove_all(path_, ignored);
    }
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  explicit ScratchDir(std::filesystem::path path) : path_(std::move(path)) {}
  std::filesystem::path path_;
};

}  // namespace

absl::StatusOr<std::vector<std::string>> ParsePredictionOutput(
    std::string_view text) {
  std::vector<std::string> labels;
  size_t start = 0;
  while (start < text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", labels.size() + 1, ": empty label"));
    }
    labels.emplace_back(line);
    start = end + 1;
  }
  return labels;
}

ExternalAdapter::ExternalAdapter(ExternalAdapterOptions options)
    : options_(std::move(options)) {}

absl::StatusOr<std::vector<std::string>> ExternalAdapter::PredictBatch(
    const dataset::Dataset& features) const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<int> columns;
  if (options_.feature_names.empty()) {
    for (int c = 0; c < features.num_variables(); ++c) columns.push_back(c);
  } else {
    for (const auto& name : options_.feature_names) {
      const auto index = features.VariableIndex(name);
      if (!index) {
        return absl::InvalidArgumentError(
            absl::StrCat("input lacks feature '", name, "'"));
      }
      columns.push_back(*index);
    }
  }
  auto scratch = ScratchDir::Create(options_.scratch_dir);
  if (!scratch.ok()) return scratch.status();
  const auto input = scratch->path() / "in.csv";
  const auto output = scratch->path() / "out.csv";
  const auto errors = scratch->path() / "stderr.txt";
  {
    std::ofstream out(input, std::ios::binary);
    out << dataset::ToCsv(features.SelectColumns(columns));
    if (!out) return absl::InternalError("cannot write prediction input");
  }
  const std::string command =
      absl::StrCat(options_.command, " --predict ", ShellQuote(input.string()),
                   " ", ShellQuote(output.string()), " 2> ",
                   ShellQuote(errors.string()));
  const int raw = std::system(command.c_str());
  const int code = raw == -1 ? -1 : (WIFEXITED(raw) ? WEXITSTATUS(raw) : -1);
  if (code != 0) {
    return absl::UnavailableError(
        absl::StrCat("model command exited with status ", code, ": ",
                     ReadFile(errors)));
  }
  if (!std::filesystem::exists(output)) {
    return absl::UnavailableError(absl::StrCat(
        "model command wrote no output file; stderr: ", ReadFile(errors)));
  }
  auto labels = ParsePredictionOutput(ReadFile(output));
  if (!labels.ok()) {
    return absl::UnavailableError(
        absl::StrCat("malformed model output: ", labels.status().message()));
  }
  if (static_cast<int64_t>(labels->size()) != features.num_rows()) {
    return absl::UnavailableError(
        absl::StrCat("model returned ", labels->size(), " labels for ",
                     features.num_rows(), " rows"));
  }
  if (!options_.labels.empty()) {
    const std::set<std::string_view> known(options_.labels.begin(),
                                           options_.labels.end());
    for (size_t i = 0; i < labels->size(); ++i) {
      if (!known.contains((*labels)[i])) {
        return absl::UnavailableError(
            absl::StrCat("line ", i + 1, ": label '", (*labels)[i],
                         "' is not a declared class"));
      }
    }
  }
  return labels;
}

}  // namespace laplace::models
