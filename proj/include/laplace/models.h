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

#ifndef LAPLACE_MODELS_H_
#define LAPLACE_MODELS_H_

#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"
#include "laplace/bayes_net.h"
#include "laplace/dataset.h"

namespace laplace::models {

// Black-box classifier contract: a batch of feature rows in, one class label
// per row out.
class ModelAdapter {
 public:
  virtual ~ModelAdapter() = default;

  // Columns of `features` are matched to feature_names() by name; extra
  // columns are ignored. The result has one label per row, each drawn from
  // labels().
  virtual absl::StatusOr<std::vector<std::string>> PredictBatch(
      const dataset::Dataset& features) const = 0;

  virtual const std::vector<std::string>& feature_names() const = 0;
  // The fixed set of labels the model can emit.
  virtual const std::vector<std::string>& labels() const = 0;
  virtual bool concurrency_safe() const { return true; }
  virtual std::string type() const = 0;
};

// Base of the built-in classifiers. Holds the training schema and maps
// incoming columns onto it by name and state label.
class CategoricalClassifier : public ModelAdapter {
 public:
  CategoricalClassifier(std::vector<dataset::Variable> features,
                        dataset::Variable target);

  absl::StatusOr<std::vector<std::string>> PredictBatch(
      const dataset::Dataset& features) const override;
  const std::vector<std::string>& feature_names() const override {
    return feature_names_;
  }
  const std::vector<std::string>& labels() const override {
    return target_.states;
  }

  // Class indices for rows already encoded in the training schema.
  // columns[f] holds feature f.
  virtual std::vector<int> PredictEncoded(
      const std::vector<std::span<const int>>& columns, int64_t rows) const = 0;

  // Serialized model, including the schema. See ModelFromJson().
  virtual nlohmann::json ToJson() const = 0;

  const std::vector<dataset::Variable>& features() const { return features_; }
  const dataset::Variable& target() const { return target_; }

 protected:
  nlohmann::json SchemaJson() const;

 private:
  std::vector<dataset::Variable> features_;
  std::vector<std::string> feature_names_;
  dataset::Variable target_;
};

// Training data layout shared by the trainers: every column except `target`
// is a feature.
struct TrainingView {
  std::vector<dataset::Variable> features;
  std::vector<std::span<const int>> columns;
  dataset::Variable target;
  std::span<const int> labels;
  int64_t rows = 0;
};
TrainingView MakeTrainingView(const dataset::Dataset& data, int target);

// --- Naive Bayes -----------------------------------------------------------

class NaiveBayesClassifier : public CategoricalClassifier {
 public:
  NaiveBayesClassifier(std::vector<dataset::Variable> features,
                       dataset::Variable target, std::vector<double> log_prior,
                       std::vector<std::vector<double>> log_likelihood);

  std::vector<int> PredictEncoded(const std::vector<std::span<const int>>& columns,
                                  int64_t rows) const override;
  nlohmann::json ToJson() const override;
  std::string type() const override { return "naive_bayes"; }

 private:
  std::vector<double> log_prior_;
  // log_likelihood_[f][state * num_classes + class]
  std::vector<std::vector<double>> log_likelihood_;
};

std::unique_ptr<NaiveBayesClassifier> TrainNaiveBayes(
    const dataset::Dataset& data, int target,
    double smoothing = bn::kDefaultSmoothing);

// --- Random forest ---------------------------------------------------------

struct RandomForestOptions {
  int trees = 100;
  // 0 means unlimited.
  int max_depth = 0;
  uint64_t seed = 1;
};

// Flat tree. Internal nodes split multiway on a feature; child for state s is
// nodes[first_child + s].
struct TreeNode {
  int feature = -1;  // -1 for leaves
  int first_child = 0;
  int label = 0;  // majority class of the node's training rows
};
using Tree = std::vector<TreeNode>;

class RandomForestClassifier : public CategoricalClassifier {
 public:
  RandomForestClassifier(std::vector<dataset::Variable> features,
                         dataset::Variable target, std::vector<Tree> trees);

  std::vector<int> PredictEncoded(const std::vector<std::span<const int>>& columns,
                                  int64_t rows) const override;
  nlohmann::json ToJson() const override;
  std::string type() const override { return "random_forest"; }
  const std::vector<Tree>& trees() const { return trees_; }

 private:
  std::vector<Tree> trees_;
};

// Bagged Gini trees with sqrt(d) candidate features per split and majority
// vote; ties go to the lowest class index.
std::unique_ptr<RandomForestClassifier> TrainRandomForest(
    const dataset::Dataset& data, int target, const RandomForestOptions& options);

// --- Multinomial logistic regression ---------------------------------------

struct LinearOptions {
  double l2 = 1e-4;
  int epochs = 30;
  int batch_size = 32;
  double learning_rate = 0.2;
  uint64_t seed = 1;
};

// Softmax over one-hot encoded features. weights[c * dim + j], one bias per
// class. The bias is not regularized.
struct LinearParameters {
  int num_classes = 0;
  int dim = 0;
  std::vector<double> weights;
  std::vector<double> bias;
};

class LinearClassifier : public CategoricalClassifier {
 public:
  LinearClassifier(std::vector<dataset::Variable> features,
                   dataset::Variable target, LinearParameters parameters);

  std::vector<int> PredictEncoded(const std::vector<std::span<const int>>& columns,
                                  int64_t rows) const override;
  nlohmann::json ToJson() const override;
  std::string type() const override { return "linear"; }
  const LinearParameters& parameters() const { return parameters_; }

 private:
  LinearParameters parameters_;
  std::vector<int> offsets_;
};

std::unique_ptr<LinearClassifier> TrainLinear(const dataset::Dataset& data,
                                              int target,
                                              const LinearOptions& options);

namespace internal {

// Mean cross-entropy over `rows` plus (l2 / 2) * |weights|^2, and its
// gradient (same layout as LinearParameters).
struct LinearObjective {
  double loss = 0;
  std::vector<double> weight_gradient;
  std::vector<double> bias_gradient;
};
LinearObjective EvaluateLinearObjective(const LinearParameters& parameters,
                                        const TrainingView& view,
                                        std::span<const int64_t> rows,
                                        double l2);
std::vector<int> OneHotOffsets(const std::vector<dataset::Variable>& features);

}  // namespace internal

// --- Bayesian network classifier -------------------------------------------

// Predicts the most probable target state given every other node.
class BnClassifier : public CategoricalClassifier {
 public:
  BnClassifier(bn::BayesianNetwork network, int target);

  std::vector<int> PredictEncoded(const std::vector<std::span<const int>>& columns,
                                  int64_t rows) const override;
  nlohmann::json ToJson() const override;
  std::string type() const override { return "bayesian_network"; }
  const bn::BayesianNetwork& network() const { return network_; }
  int target_node() const { return target_node_; }

 private:
  bn::BayesianNetwork network_;
  int target_node_;
};

// Reconstructs any built-in classifier from its ToJson() form.
absl::StatusOr<std::unique_ptr<CategoricalClassifier>> ModelFromJson(
    const nlohmann::json& json);

// --- External process ------------------------------------------------------

struct ExternalAdapterOptions {
  // Shell command prefix; invoked as `<command> --predict <in.csv> <out.csv>`.
  std::string command;
  std::vector<std::string> feature_names;
  std::vector<std::string> labels;
  // Directory for the exchange files. Empty means the system temp dir.
  std::string scratch_dir;
};

// Batch prediction through a separate process. Input CSV has a header row and
// state labels as cells; output is one UTF-8 label per LF-terminated line,
// line i answering row i. Failures (non-zero exit, unknown label, wrong line
// count) return kUnavailable with the captured stderr.
class ExternalAdapter : public ModelAdapter {
 public:
  explicit ExternalAdapter(ExternalAdapterOptions options);

  absl::StatusOr<std::vector<std::string>> PredictBatch(
      const dataset::Dataset& features) const override;
  const std::vector<std::string>& feature_names() const override {
    return options_.feature_names;
  }
  const std::vector<std::string>& labels() const override {
    return options_.labels;
  }
  bool concurrency_safe() const override { return false; }
  std::string type() const override { return "external"; }

 private:
  ExternalAdapterOptions options_;
  mutable std::mutex mu_;
};

// Parses the prediction protocol's output file contents.
absl::StatusOr<std::vector<std::string>> ParsePredictionOutput(
    std::string_view text);

}  // namespace laplace::models

#endif  // LAPLACE_MODELS_H_
