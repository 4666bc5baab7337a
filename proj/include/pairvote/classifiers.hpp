// Copyright 2026 The pairvote Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef PAIRVOTE_CLASSIFIERS_HPP_
#define PAIRVOTE_CLASSIFIERS_HPP_

#include "pairvote/dataset.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pairvote {

enum class ClassifierKind { logistic, svm, nn };

std::string_view to_string(ClassifierKind kind);
ClassifierKind parse_classifier_kind(std::string_view text);

struct TrainConfig {
  double learning_rate = 0.1;
  std::size_t max_epochs = 1000;
  double tolerance = 1e-6;  // stop once the per-epoch loss decrease falls below this
  double l2 = 1e-4;         // weights only, biases are not penalized
  std::uint64_t seed = 0;

  void validate() const;
};

/// Defaults for the network: 2000 epochs, improvement tolerance 1e-6.
TrainConfig default_nn_config();

/// Logistic regression or linear SVM. Binary models keep a single weight row
/// scoring class_order[1]; multiclass models keep one row per class.
struct LinearModel {
  ClassifierKind kind = ClassifierKind::logistic;
  std::vector<std::string> class_order;
  Eigen::MatrixXd weights;  // rows x input_dim
  Eigen::VectorXd bias;     // rows

  std::size_t input_dim() const noexcept { return static_cast<std::size_t>(weights.cols()); }
  std::size_t classes() const noexcept { return class_order.size(); }
};

struct NnDims {
  std::size_t input = 0;
  std::size_t hidden = 50;
  std::size_t output = 2;
};

/// One hidden layer, sigmoid units throughout.
struct NnModel {
  std::vector<std::string> class_order;
  Eigen::MatrixXd hidden_weights;  // input x hidden
  Eigen::VectorXd hidden_bias;     // hidden
  Eigen::MatrixXd output_weights;  // hidden x output
  Eigen::VectorXd output_bias;     // output

  NnDims dims() const noexcept {
    return {static_cast<std::size_t>(hidden_weights.rows()), static_cast<std::size_t>(hidden_weights.cols()),
            static_cast<std::size_t>(output_weights.cols())};
  }
  std::size_t input_dim() const noexcept { return static_cast<std::size_t>(hidden_weights.rows()); }
};

/// Class index into the model's class order plus the per-class scores it was
/// chosen from (argmax, ties to the lowest index).
struct Prediction {
  std::size_t index = 0;
  std::string label;
  std::vector<double> scores;
};

// Dataset-level entry points. Class order is the dataset's label universe and
// every class must have at least one row.
LinearModel train_logistic(const Dataset& data, const TrainConfig& config);
LinearModel train_svm(const Dataset& data, const TrainConfig& config);
NnModel train_nn(const Dataset& data, const TrainConfig& config, NnDims dims);

/// Optional training diagnostics: objective value after every accepted epoch
/// (entry 0 is the initial value).
struct TrainTrace {
  std::vector<double> losses;
};

// Matrix-level variants used by the wrapper fitness loop; labels are class
// indices in [0, classes).
LinearModel fit_logistic(const FeatureMatrix& x, std::span<const std::size_t> labels, std::size_t classes,
                         const TrainConfig& config, TrainTrace* trace = nullptr);
LinearModel fit_svm(const FeatureMatrix& x, std::span<const std::size_t> labels, std::size_t classes,
                    const TrainConfig& config, TrainTrace* trace = nullptr);
NnModel fit_nn(const FeatureMatrix& x, std::span<const std::size_t> labels, std::size_t classes, const TrainConfig& config,
               NnDims dims, TrainTrace* trace = nullptr);

/// Per-class scores: probabilities for logistic regression, decision values
/// (binary: [-f, f]) for the SVM, sigmoid outputs for the network
/// (single-output binary nets report [1 - o, o]).
std::vector<double> score(const LinearModel& model, std::span<const double> features);
std::vector<double> score(const NnModel& model, std::span<const double> features);

Prediction predict(const LinearModel& model, std::span<const double> features);
Prediction predict(const NnModel& model, std::span<const double> features);

/// Predicted class index for every row of `x`.
std::vector<std::size_t> predict_indices(const LinearModel& model, const FeatureMatrix& x);
std::vector<std::size_t> predict_indices(const NnModel& model, const FeatureMatrix& x);

/// Hidden-layer activations: the network's transformed feature space.
Eigen::VectorXd hidden_transform(const NnModel& model, std::span<const double> features);
FeatureMatrix hidden_transform(const NnModel& model, const FeatureMatrix& x);

/// Index of the largest value, lowest index on ties.
std::size_t argmax(std::span<const double> scores);

}  // namespace pairvote

#endif  // PAIRVOTE_CLASSIFIERS_HPP_
