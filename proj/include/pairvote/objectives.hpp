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

#ifndef PAIRVOTE_OBJECTIVES_HPP_
#define PAIRVOTE_OBJECTIVES_HPP_

#include "pairvote/dataset.hpp"

#include <Eigen/Dense>

#include <span>

namespace pairvote {

// Training objectives and their analytic gradients. All losses are means over
// rows plus (l2 / 2) * ||weights||^2; biases are unpenalized.

struct LinearGradient {
  double loss = 0.0;
  Eigen::MatrixXd weights;
  Eigen::VectorXd bias;
};

/// Cross-entropy. A single weight row means the binary sigmoid model with
/// labels in {0, 1}; K rows mean softmax over K classes.
LinearGradient logistic_objective(const Eigen::MatrixXd& weights, const Eigen::VectorXd& bias, const FeatureMatrix& x,
                                  std::span<const std::size_t> labels, double l2);

/// Mean hinge loss max(0, 1 - t * f(x)) for targets t in {-1, +1}; the
/// returned gradient is the subgradient that takes 0 at the kink.
LinearGradient hinge_objective(const Eigen::MatrixXd& weights, const Eigen::VectorXd& bias, const FeatureMatrix& x,
                               std::span<const double> targets, double l2);

struct NnParams {
  Eigen::MatrixXd hidden_weights;
  Eigen::VectorXd hidden_bias;
  Eigen::MatrixXd output_weights;
  Eigen::VectorXd output_bias;
};

struct NnGradient {
  double loss = 0.0;
  NnParams grad;
};

/// Summed per-output binary cross-entropy of sigmoid outputs against 0/1
/// targets (rows x outputs), averaged over rows.
NnGradient nn_objective(const NnParams& params, const FeatureMatrix& x, const Eigen::MatrixXd& targets, double l2);

/// log(1 + exp(z)) without overflow.
double softplus(double z);
double sigmoid(double z);

}  // namespace pairvote

#endif  // PAIRVOTE_OBJECTIVES_HPP_
