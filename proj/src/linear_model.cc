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
namespace internal {

std::vector<int> OneHotOffsets(const std::vector<dataset::Variable>& features) {
  std::vector<int> offsets = {0};
  for (const auto& f : features) offsets.push_back(offsets.back() + f.cardinality());
  return offsets;
}

namespace {

// Softmax of the logits of one row, written to `probabilities`.
void RowProbabilities(const LinearParameters& p, std::span<const int> offsets,
                      const std::vector<std::span<const int>>& columns,
                      int64_t row, std::vector<double>& probabilities) {
  probabilities = p.bias;
  for (size_t f = 0; f < columns.size(); ++f) {
    const int j = offsets[f] + columns[f][row];
    for (int c = 0; c < p.num_classes; ++c) {
      probabilities[c] += p.weights[c * p.dim + j];
    }
  }
  const double max = *std::max_element(probabilities.begin(), probabilities.end());
  double total = 0;
  for (double& z : probabilities) {
    z = std::exp(z - max);
    total += z;
  }
  for (double& z : probabilities) z /= total;
}

}  // namespace

LinearObjective EvaluateLinearObjective(const LinearParameters& parameters,
                                        const TrainingView& view,
                                        std::span<const int64_t> rows,
                                        double l2) {
  const std::vector<int> offsets = OneHotOffsets(view.features);
  LinearObjective out;
  out.weight_gradient.assign(parameters.weights.size(), 0);
  out.bias_gradient.assign(parameters.num_classes, 0);
  std::vector<double> probabilities;
  const double scale = 1.0 / static_cast<double>(rows.size());
  for (int64_t r : rows) {
    RowProbabilities(parameters, offsets, view.columns, r, probabilities);
    out.loss -= scale * std::log(probabilities[view.labels[r]]);
    for (int c = 0; c < parameters.num_classes; ++c) {
      const double residual =
          scale * (probabilities[c] - (c == view.labels[r] ? 1.0 : 0.0));
      out.bias_gradient[c] += residual;
      for (size_t f = 0; f < view.columns.size(); ++f) {
        out.weight_gradient[c * parameters.dim + offsets[f] + view.columns[f][r]] +=
            residual;
      }
    }
  }
  for (size_t i = 0; i < parameters.weights.size(); ++i) {
    out.loss += 0.5 * l2 * parameters.weights[i] * parameters.weights[i];
    out.weight_gradient[i] += l2 * parameters.weights[i];
  }
  return out;
}

}  // namespace internal

LinearClassifier::LinearClassifier(std::vector<dataset::Variable> features,
                                   dataset::Variable target,
                                   LinearParameters parameters)
    : CategoricalClassifier(std::move(features), std::move(target)),
      parameters_(std::move(parameters)),
      offsets_(internal::OneHotOffsets(this->features())) {}

std::vector<int> LinearClassifier::PredictEncoded(
    const std::vector<std::span<const int>>& columns, int64_t rows) const {
  std::vector<int> out(rows);
  std::vector<double> logits;
  for (int64_t r = 0; r < rows; ++r) {
    logits = parameters_.bias;
    for (size_t f = 0; f < columns.size(); ++f) {
      const int j = offsets_[f] + columns[f][r];
      for (int c = 0; c < parameters_.num_classes; ++c) {
        logits[c] += parameters_.weights[c * parameters_.dim + j];
      }
    }
    out[r] = bn::ArgMax(logits);
  }
  return out;
}

nlohmann::json LinearClassifier::ToJson() const {
  nlohmann::json out = SchemaJson();
  out["weights"] = parameters_.weights;
  out["bias"] = parameters_.bias;
  return out;
}

std::unique_ptr<LinearClassifier> TrainLinear(const dataset::Dataset& data,
                                              int target,
                                              const LinearOptions& options) {
  const TrainingView view = MakeTrainingView(data, target);
  const std::vector<int> offsets = internal::OneHotOffsets(view.features);
  LinearParameters p;
  p.num_classes = view.target.cardinality();
  p.dim = offsets.back();
  p.weights.assign(static_cast<size_t>(p.num_classes) * p.dim, 0);
  p.bias.assign(p.num_classes, 0);

  Rng rng(options.seed);
  std::vector<int64_t> order(view.rows);
  std::iota(order.begin(), order.end(), 0);
  const double lr = options.learning_rate;
  // Implicit (proximal) L2 step: stable for any l2.
  const double shrink = 1.0 / (1.0 + lr * options.l2);
  std::vector<double> probabilities;
  std::vector<double> residual(p.num_classes);
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    rng.Shuffle(order);
    for (size_t begin = 0; begin < order.size(); begin += options.batch_size) {
      const size_t end = std::min(order.size(), begin + options.batch_size);
      const double step = lr / static_cast<double>(end - begin);
      // Accumulate the batch gradient first so the update uses one point.
      std::vector<std::pair<int, double>> updates;
      std::vector<double> bias_update(p.num_classes, 0);
      for (size_t i = begin; i < end; ++i) {
        const int64_t r = order[i];
        probabilities = p.bias;
        for (size_t f = 0; f < view.columns.size(); ++f) {
          const int j = offsets[f] + view.columns[f][r];
          for (int c = 0; c < p.num_classes; ++c) {
            probabilities[c] += p.weights[c * p.dim + j];
          }
        }
        const double max =
            *std::max_element(probabilities.begin(), probabilities.end());
        double total = 0;
        for (double& z : probabilities) {
          z = std::exp(z - max);
          total += z;
        }
        for (int c = 0; c < p.num_classes; ++c) {
          residual[c] =
              probabilities[c] / total - (c == view.labels[r] ? 1.0 : 0.0);
          bias_update[c] += residual[c];
          for (size_t f = 0; f < view.columns.size(); ++f) {
            updates.emplace_back(c * p.dim + offsets[f] + view.columns[f][r],
                                 residual[c]);
          }
        }
      }
      for (const auto& [index, g] : updates) p.weights[index] -= step * g;
      for (double& w : p.weights) w *= shrink;
      for (int c = 0; c < p.num_classes; ++c) p.bias[c] -= step * bias_update[c];
    }
  }
  return std::make_unique<LinearClassifier>(view.features, view.target,
                                            std::move(p));
}

}  // namespace laplace::models
