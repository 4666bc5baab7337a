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

#include "pairvote/classifiers.hpp"

#include "pairvote/error.hpp"
#include "pairvote/objectives.hpp"
#include "pairvote/random.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>

namespace pairvote {

namespace {

void check_training_input(const FeatureMatrix& x, std::span<const std::size_t> labels, std::size_t classes,
                          const TrainConfig& config) {
  config.validate();
  if (x.rows() == 0 || x.cols() == 0) {
    throw ClassifierError("training data is empty");
  }
  if (labels.size() != static_cast<std::size_t>(x.rows())) {
    throw ClassifierError(fmt::format("{} labels for {} rows", labels.size(), x.rows()));
  }
  if (classes < 2) {
    throw ClassifierError("training needs at least two classes");
  }
  std::vector<std::size_t> counts(classes, 0);
  for (const auto label : labels) {
    if (label >= classes) {
      throw ClassifierError(fmt::format("label index {} out of range for {} classes", label, classes));
    }
    ++counts[label];
  }
  for (std::size_t k = 0; k < classes; ++k) {
    if (counts[k] == 0) {
      throw ClassifierError(fmt::format("class {} has no training rows (single-class or incomplete data)", k));
    }
  }
}

std::vector<std::string> default_class_order(std::size_t classes) {
  std::vector<std::string> order;
  for (std::size_t k = 0; k < classes; ++k) {
    order.push_back(std::to_string(k));
  }
  return order;
}

void check_finite(double loss, std::string_view what, std::size_t epoch) {
  if (!std::isfinite(loss)) {
    throw ClassifierError(fmt::format("{} training diverged: non-finite loss at epoch {}", what, epoch));
  }
}

Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> values) {
  return {values.data(), static_cast<Eigen::Index>(values.size())};
}

void check_dim(std::size_t expected, std::size_t actual) {
  if (expected != actual) {
    throw ClassifierError(fmt::format("feature vector has length {}, model expects {}", actual, expected));
  }
}

/// One binary subgradient descent run on targets in {-1, +1}. Returns the
/// iterate with the lowest objective seen.
std::pair<Eigen::RowVectorXd, double> fit_hinge(const FeatureMatrix& x, std::span<const double> targets,
                                                 const TrainConfig& config, TrainTrace* trace) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(1, x.cols());
  Eigen::VectorXd b = Eigen::VectorXd::Zero(1);
  auto current = hinge_objective(w, b, x, targets, config.l2);
  check_finite(current.loss, "svm", 0);
  Eigen::MatrixXd best_w = w;
  double best_b = b(0);
  double best_loss = current.loss;
  if (trace != nullptr) {
    trace->losses.push_back(current.loss);
  }
  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    w -= config.learning_rate * current.weights;
    b -= config.learning_rate * current.bias;
    auto next = hinge_objective(w, b, x, targets, config.l2);
    check_finite(next.loss, "svm", epoch);
    if (trace != nullptr) {
      trace->losses.push_back(next.loss);
    }
    const double decrease = current.loss - next.loss;
    current = std::move(next);
    if (current.loss < best_loss) {
      best_loss = current.loss;
      best_w = w;
      best_b = b(0);
    }
    if (decrease >= 0.0 && decrease < config.tolerance) {
      break;
    }
  }
  return {best_w.row(0), best_b};
}

}  // namespace

std::string_view to_string(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::logistic:
      return "lr";
    case ClassifierKind::svm:
      return "svm";
    case ClassifierKind::nn:
      return "nn";
  }
  return "?";
}

ClassifierKind parse_classifier_kind(std::string_view text) {
  if (text == "lr" || text == "logistic") {
    return ClassifierKind::logistic;
  }
  if (text == "svm") {
    return ClassifierKind::svm;
  }
  if (text == "nn") {
    return ClassifierKind::nn;
  }
  throw ClassifierError(fmt::format("unknown classifier kind '{}' (expected lr, svm or nn)", text));
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ClassifierError("learning rate must be positive");
  }
  if (max_epochs < 1) {
    throw ClassifierError("max epochs must be at least 1");
  }
  if (!(tolerance >= 0.0) || !(l2 >= 0.0)) {
    throw ClassifierError("tolerance and l2 strength must be non-negative");
  }
}

TrainConfig default_nn_config() {
  TrainConfig config;
  config.max_epochs = 2000;
  config.tolerance = 1e-6;
  return config;
}

LinearModel fit_logistic(const FeatureMatrix& x, std::span<const std::size_t> labels, std::size_t classes,
                         const TrainConfig& config, TrainTrace* trace) {
  check_training_input(x, labels, classes, config);
  const Eigen::Index rows = classes == 2 ? 1 : static_cast<Eigen::Index>(classes);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(rows, x.cols());
  Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);

  auto current = logistic_objective(w, b, x, labels, config.l2);
  check_finite(current.loss, "logistic", 0);
  if (trace != nullptr) {
    trace->losses.push_back(current.loss);
  }
  double step = config.learning_rate;
  const double min_step = config.learning_rate * 0x1.0p-40;
  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    // halve the step until the objective does not increase
    bool accepted = false;
    while (step >= min_step) {
      Eigen::MatrixXd w_next = w - step * current.weights;
      Eigen::VectorXd b_next = b - step * current.bias;
      auto next = logistic_objective(w_next, b_next, x, labels, config.l2);
      if (std::isfinite(next.loss) && next.loss <= current.loss + 1e-12) {
        const double decrease = current.loss - next.loss;
        w = std::move(w_next);
        b = std::move(b_next);
        current = std::move(next);
        if (trace != nullptr) {
          trace->losses.push_back(current.loss);
        }
        accepted = decrease >= config.tolerance;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      break;
    }
  }
  check_finite(current.loss, "logistic", config.max_epochs);
  return {ClassifierKind::logistic, default_class_order(classes), std::move(w), std::move(b)};
}

LinearModel fit_svm(const FeatureMatrix& x, std::span<const std::size_t> labels, std::size_t classes,
                    const TrainConfig& config, TrainTrace* trace) {
  check_training_input(x, labels, classes, config);
  std::vector<double> targets(labels.size());
  if (classes == 2) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      targets[i] = labels[i] == 1 ? 1.0 : -1.0;
    }
    auto [w, b] = fit_hinge(x, targets, config, trace);
    LinearModel model{ClassifierKind::svm, default_class_order(classes), Eigen::MatrixXd(1, x.cols()), Eigen::VectorXd(1)};
    model.weights.row(0) = w;
    model.bias(0) = b;
    return model;
  }
  // one-vs-rest
  LinearModel model{ClassifierKind::svm, default_class_order(classes),
                    Eigen::MatrixXd(static_cast<Eigen::Index>(classes), x.cols()),
                    Eigen::VectorXd(static_cast<Eigen::Index>(classes))};
  for (std::size_t k = 0; k < classes; ++k) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
      targets[i] = labels[i] == k ? 1.0 : -1.0;
    }
    auto [w, b] = fit_hinge(x, targets, config, k == 0 ? trace : nullptr);
    model.weights.row(static_cast<Eigen::Index>(k)) = w;
    model.bias(static_cast<Eigen::Index>(k)) = b;
  }
  return model;
}

NnModel fit_nn(const FeatureMatrix& x, std::span<const std::size_t> labels, std::size_t classes, const TrainConfig& config,
               NnDims dims, TrainTrace* trace) {
  check_training_input(x, labels, classes, config);
  if (dims.input != static_cast<std::size_t>(x.cols())) {
    throw ClassifierError(fmt::format("network input dim {} does not match {} feature columns", dims.input, x.cols()));
  }
  if (dims.hidden == 0) {
    throw ClassifierError("hidden layer must have at least one unit");
  }
  const bool single_output = dims.output == 1;
  if (!(dims.output == classes || (single_output && classes == 2))) {
    throw ClassifierError(fmt::format("network output dim {} does not fit {} classes", dims.output, classes));
  }

  Rng rng(config.seed);
  const auto init = [&rng](std::size_t fan_in, std::size_t fan_out) {
    const double range = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Eigen::MatrixXd m(static_cast<Eigen::Index>(fan_in), static_cast<Eigen::Index>(fan_out));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        m(r, c) = rng.uniform(-range, range);
      }
    }
    return m;
  };
  NnParams params;
  params.hidden_weights = init(dims.input, dims.hidden);
  params.hidden_bias = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dims.hidden));
  params.output_weights = init(dims.hidden, dims.output);
  params.output_bias = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dims.output));

  Eigen::MatrixXd targets = Eigen::MatrixXd::Zero(x.rows(), static_cast<Eigen::Index>(dims.output));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (single_output) {
      targets(static_cast<Eigen::Index>(i), 0) = labels[i] == 1 ? 1.0 : 0.0;
    } else {
      targets(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(labels[i])) = 1.0;
    }
  }

  auto current = nn_objective(params, x, targets, config.l2);
  check_finite(current.loss, "nn", 0);
  if (trace != nullptr) {
    trace->losses.push_back(current.loss);
  }
  const double lr = config.learning_rate;
  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    params.hidden_weights -= lr * current.grad.hidden_weights;
    params.hidden_bias -= lr * current.grad.hidden_bias;
    params.output_weights -= lr * current.grad.output_weights;
    params.output_bias -= lr * current.grad.output_bias;
    auto next = nn_objective(params, x, targets, config.l2);
    check_finite(next.loss, "nn", epoch);
    if (trace != nullptr) {
      trace->losses.push_back(next.loss);
    }
    const double improvement = current.loss - next.loss;
    current = std::move(next);
    if (improvement < config.tolerance) {
      break;
    }
  }
  return {default_class_order(classes), std::move(params.hidden_weights), std::move(params.hidden_bias),
          std::move(params.output_weights), std::move(params.output_bias)};
}

namespace {

template <typename Model>
Model with_class_order(Model model, const Dataset& data) {
  model.class_order = data.universe().labels();
  return model;
}

void require_labelled(const Dataset& data) {
  if (!data.has_labels()) {
    throw ClassifierError("training data has no labels");
  }
  const auto counts = data.class_counts();
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] == 0) {
      throw ClassifierError(fmt::format("class '{}' has no training rows", data.universe().label(k)));
    }
  }
}

}  // namespace

LinearModel train_logistic(const Dataset& data, const TrainConfig& config) {
  require_labelled(data);
  return with_class_order(fit_logistic(data.features(), data.labels(), data.universe().size(), config), data);
}

LinearModel train_svm(const Dataset& data, const TrainConfig& config) {
  require_labelled(data);
  return with_class_order(fit_svm(data.features(), data.labels(), data.universe().size(), config), data);
}

NnModel train_nn(const Dataset& data, const TrainConfig& config, NnDims dims) {
  require_labelled(data);
  return with_class_order(fit_nn(data.features(), data.labels(), data.universe().size(), config, dims), data);
}

std::size_t argmax(std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < scores.size(); ++k) {
    if (scores[k] > scores[best]) {
      best = k;
    }
  }
  return best;
}

std::vector<double> score(const LinearModel& model, std::span<const double> features) {
  check_dim(model.input_dim(), features.size());
  const Eigen::VectorXd z = model.weights * as_vector(features) + model.bias;
  if (model.weights.rows() == 1) {
    if (model.kind == ClassifierKind::logistic) {
      const double p = sigmoid(z(0));
      return {1.0 - p, p};
    }
    return {-z(0), z(0)};
  }
  if (model.kind == ClassifierKind::logistic) {
    const double top = z.maxCoeff();
    const Eigen::VectorXd e = (z.array() - top).exp();
    const Eigen::VectorXd p = e / e.sum();
    return {p.data(), p.data() + p.size()};
  }
  return {z.data(), z.data() + z.size()};
}

std::vector<double> score(const NnModel& model, std::span<const double> features) {
  const Eigen::VectorXd hidden = hidden_transform(model, features);
  const Eigen::VectorXd logits = model.output_weights.transpose() * hidden + model.output_bias;
  std::vector<double> out;
  if (logits.size() == 1) {
    const double o = sigmoid(logits(0));
    return {1.0 - o, o};
  }
  for (Eigen::Index j = 0; j < logits.size(); ++j) {
    out.push_back(sigmoid(logits(j)));
  }
  return out;
}

namespace {

template <typename Model>
Prediction make_prediction(const Model& model, std::vector<double> scores) {
  Prediction p;
  p.index = argmax(scores);
  p.label = p.index < model.class_order.size() ? model.class_order[p.index] : std::to_string(p.index);
  p.scores = std::move(scores);
  return p;
}

}  // namespace

Prediction predict(const LinearModel& model, std::span<const double> features) {
  return make_prediction(model, score(model, features));
}

Prediction predict(const NnModel& model, std::span<const double> features) {
  return make_prediction(model, score(model, features));
}

std::vector<std::size_t> predict_indices(const LinearModel& model, const FeatureMatrix& x) {
  check_dim(model.input_dim(), static_cast<std::size_t>(x.cols()));
  std::vector<std::size_t> out(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    out[static_cast<std::size_t>(i)] = argmax(score(model, std::span<const double>(x.row(i).data(), static_cast<std::size_t>(x.cols()))));
  }
  return out;
}

std::vector<std::size_t> predict_indices(const NnModel& model, const FeatureMatrix& x) {
  check_dim(model.input_dim(), static_cast<std::size_t>(x.cols()));
  std::vector<std::size_t> out(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    out[static_cast<std::size_t>(i)] = argmax(score(model, std::span<const double>(x.row(i).data(), static_cast<std::size_t>(x.cols()))));
  }
  return out;
}

Eigen::VectorXd hidden_transform(const NnModel& model, std::span<const double> features) {
  check_dim(model.input_dim(), features.size());
  Eigen::VectorXd h = model.hidden_weights.transpose() * as_vector(features) + model.hidden_bias;
  return h.unaryExpr([](double v) { return sigmoid(v); });
}

FeatureMatrix hidden_transform(const NnModel& model, const FeatureMatrix& x) {
  check_dim(model.input_dim(), static_cast<std::size_t>(x.cols()));
  FeatureMatrix h = x * model.hidden_weights;
  h.rowwise() += model.hidden_bias.transpose();
  return h.unaryExpr([](double v) { return sigmoid(v); });
}

}  // namespace pairvote
