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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "laplace/inference.h"
#include "laplace/models.h"
#include "laplace/random.h"

namespace laplace::models {
namespace {

int MajorityClass(std::span<const int64_t> counts) {
  int best = 0;
  for (int c = 1; c < static_cast<int>(counts.size()); ++c) {
    if (counts[c] > counts[best]) best = c;
  }
  return best;
}

double Gini(std::span<const int64_t> counts, int64_t total) {
  if (total == 0) return 0;
  double sum_sq = 0;
  for (int64_t c : counts) {
    const double p = static_cast<double>(c) / total;
    sum_sq += p * p;
  }
  return 1 - sum_sq;
}

class TreeBuilder {
 public:
  TreeBuilder(const TrainingView& view, const RandomForestOptions& options,
              Rng& rng)
      : view_(view),
        options_(options),
        rng_(rng),
        classes_(view.target.cardinality()),
        features_per_split_(std::max<int>(
            1, static_cast<int>(std::floor(std::sqrt(view.features.size()))))) {}

  Tree Build(std::vector<int64_t> rows) {
    tree_.clear();
    tree_.emplace_back();
    std::vector<char> used(view_.features.size(), 0);
    Grow(0, std::move(rows), 0, used, 0);
    return std::move(tree_);
  }

 private:
  void Grow(int node, std::vector<int64_t> rows, int depth,
            std::vector<char>& used, int fallback_label) {
    std::vector<int64_t> counts(classes_, 0);
    for (int64_t r : rows) ++counts[view_.labels[r]];
    tree_[node].label = rows.empty() ? fallback_label : MajorityClass(counts);
    const int64_t n = static_cast<int64_t>(rows.size());
    const bool pure = std::count_if(counts.begin(), counts.end(),
                                    [](int64_t c) { return c > 0; }) <= 1;
    if (pure || n < 2 || (options_.max_depth > 0 && depth >= options_.max_depth)) {
      return;
    }

    std::vector<int> order;
    for (int f = 0; f < static_cast<int>(used.size()); ++f) {
      if (!used[f]) order.push_back(f);
    }
    rng_.Shuffle(order);
    const double parent_gini = Gini(counts, n);
    int best_feature = -1;
    double best_gain = 1e-12;
    int evaluated = 0;
    std::vector<int64_t> split_counts;
    for (int f : order) {
      if (evaluated >= features_per_split_) break;
      const int states = view_.features[f].cardinality();
      split_counts.assign(static_cast<size_t>(states) * classes_, 0);
      const auto column = view_.columns[f];
      for (int64_t r : rows) {
        ++split_counts[column[r] * classes_ + view_.labels[r]];
      }
      double child_gini = 0;
      int non_empty = 0;
      for (int s = 0; s < states; ++s) {
        const std::span<const int64_t> child(&split_counts[s * classes_],
                                             classes_);
        const int64_t size = std::accumulate(child.begin(), child.end(), int64_t{0});
        if (size == 0) continue;
        ++non_empty;
        child_gini += static_cast<double>(size) / n * Gini(child, size);
      }
      // Constant features do not count towards the sample.
      if (non_empty < 2) continue;
      ++evaluated;
      const double gain = parent_gini - child_gini;
      if (gain > best_gain || (gain == best_gain && best_feature >= 0 &&
                               f < best_feature)) {
        best_gain = gain;
        best_feature = f;
      }
    }
    if (best_feature < 0) return;

    const int states = view_.features[best_feature].cardinality();
    std::vector<std::vector<int64_t>> partition(states);
    const auto column = view_.columns[best_feature];
    for (int64_t r : rows) partition[column[r]].push_back(r);
    rows.clear();
    rows.shrink_to_fit();

    const int first_child = static_cast<int>(tree_.size());
    tree_[node].feature = best_feature;
    tree_[node].first_child = first_child;
    tree_.resize(tree_.size() + states);
    const int label = tree_[node].label;
    used[best_feature] = 1;
    for (int s = 0; s < states; ++s) {
      Grow(first_child + s, std::move(partition[s]), depth + 1, used, label);
    }
    used[best_feature] = 0;
  }

  const TrainingView& view_;
  const RandomForestOptions& options_;
  Rng& rng_;
  const int classes_;
  const int features_per_split_;
  Tree tree_;
};

}  // namespace

RandomForestClassifier::RandomForestClassifier(
    std::vector<dataset::Variable> features, dataset::Variable target,
    std::vector<Tree> trees)
    : CategoricalClassifier(std::move(features), std::move(target)),
      trees_(std::move(trees)) {}

std::vector<int> RandomForestClassifier::PredictEncoded(
    const std::vector<std::span<const int>>& columns, int64_t rows) const {
  const int classes = target().cardinality();
  std::vector<int> out(rows);
  std::vector<int64_t> votes(classes);
  for (int64_t r = 0; r < rows; ++r) {
    std::fill(votes.begin(), votes.end(), 0);
    for (const Tree& tree : trees_) {
      int node = 0;
      while (tree[node].feature >= 0) {
        node = tree[node].first_child + columns[tree[node].feature][r];
      }
      ++votes[tree[node].label];
    }
    out[r] = MajorityClass(votes);
  }
  return out;
}

nlohmann::json RandomForestClassifier::ToJson() const {
  nlohmann::json out = SchemaJson();
  nlohmann::json trees = nlohmann::json::array();
  for (const Tree& tree : trees_) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const TreeNode& node : tree) {
      nodes.push_back({node.feature, node.first_child, node.label});
    }
    trees.push_back(std::move(nodes));
  }
  out["trees"] = std::move(trees);
  return out;
}

std::unique_ptr<RandomForestClassifier> TrainRandomForest(
    const dataset::Dataset& data, int target,
    const RandomForestOptions& options) {
  const TrainingView view = MakeTrainingView(data, target);
  Rng rng(options.seed);
  TreeBuilder builder(view, options, rng);
  std::vector<Tree> trees;
  for (int t = 0; t < options.trees; ++t) {
    std::vector<int64_t> sample(view.rows);
    for (int64_t& r : sample) r = static_cast<int64_t>(rng.UniformInt(view.rows));
    std::sort(sample.begin(), sample.end());
    trees.push_back(builder.Build(std::move(sample)));
  }
  return std::make_unique<RandomForestClassifier>(view.features, view.target,
                                                  std::move(trees));
}

}  // namespace laplace::models
