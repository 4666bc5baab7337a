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

#include "pairvote/objectives.hpp"

#include <cmath>

namespace pairvote {

double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

LinearGradient logistic_objective(const Eigen::MatrixXd& weights, const Eigen::VectorXd& bias, const FeatureMatrix& x,
                                  std::span<const std::size_t> labels, double l2) {
  const auto n = x.rows();
  const double inv_n = 1.0 / static_cast<double>(n);
  LinearGradient out;
  if (weights.rows() == 1) {
    const Eigen::VectorXd z = (x * weights.row(0).transpose()).array() + bias(0);
    Eigen::VectorXd residual(n);
    double loss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double y = labels[static_cast<std::size_t>(i)] == 1 ? 1.0 : 0.0;
      loss += softplus(z(i)) - y * z(i);
      residual(i) = sigmoid(z(i)) - y;
    }
    out.loss = loss * inv_n + 0.5 * l2 * weights.squaredNorm();
    out.weights = (residual.transpose() * x) * inv_n + l2 * weights;
    out.bias = Eigen::VectorXd::Constant(1, residual.sum() * inv_n);
    return out;
  }

  Eigen::MatrixXd z = x * weights.transpose();
  z.rowwise() += bias.transpose();
  double loss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double top = z.row(i).maxCoeff();
    const double lse = top + std::log((z.row(i).array() - top).exp().sum());
    const auto y = static_cast<Eigen::Index>(labels[static_cast<std::size_t>(i)]);
    loss += lse - z(i, y);
    z.row(i) = (z.row(i).array() - lse).exp();  // now the softmax probabilities
    z(i, y) -= 1.0;                             // and now the residual
  }
  out.loss = loss * inv_n + 0.5 * l2 * weights.squaredNorm();
  out.weights = (z.transpose() * x) * inv_n + l2 * weights;
  out.bias = z.colwise().sum().transpose() * inv_n;
  return out;
}

LinearGradient hinge_objective(const Eigen::MatrixXd& weights, const Eigen::VectorXd& bias, const FeatureMatrix& x,
                               std::span<const double> targets, double l2) {
  const auto n = x.rows();
  const double inv_n = 1.0 / static_cast<double>(n);
  const Eigen::VectorXd f = (x * weights.row(0).transpose()).array() + bias(0);
  Eigen::VectorXd coeff = Eigen::VectorXd::Zero(n);
  double loss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = targets[static_cast<std::size_t>(i)];
    const double slack = 1.0 - t * f(i);
    if (slack > 0.0) {
      loss += slack;
      coeff(i) = -t;
    }
  }
  LinearGradient out;
  out.loss = loss * inv_n + 0.5 * l2 * weights.squaredNorm();
  out.weights = (coeff.transpose() * x) * inv_n + l2 * weights;
  out.bias = Eigen::VectorXd::Constant(1, coeff.sum() * inv_n);
  return out;
}

NnGradient nn_objective(const NnParams& params, const FeatureMatrix& x, const Eigen::MatrixXd& targets, double l2) {
  const auto n = x.rows();
  const double inv_n = 1.0 / static_cast<double>(n);

  Eigen::MatrixXd hidden = x * params.hidden_weights;
  hidden.rowwise() += params.hidden_bias.transpose();
  hidden = hidden.unaryExpr([](double v) { return sigmoid(v); });

  Eigen::MatrixXd logits = hidden * params.output_weights;
  logits.rowwise() += params.output_bias.transpose();

  double loss = 0.0;
  Eigen::MatrixXd delta_out(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    for (Eigen::Index j = 0; j < logits.cols(); ++j) {
      const double z = logits(i, j);
      const double t = targets(i, j);
      loss += softplus(z) - t * z;
      delta_out(i, j) = (sigmoid(z) - t) * inv_n;
    }
  }

  NnGradient out;
  out.loss = loss * inv_n +
             0.5 * l2 * (params.hidden_weights.squaredNorm() + params.output_weights.squaredNorm());
  out.grad.output_weights = hidden.transpose() * delta_out + l2 * params.output_weights;
  out.grad.output_bias = delta_out.colwise().sum().transpose();
  const Eigen::MatrixXd delta_hidden =
      ((delta_out * params.output_weights.transpose()).array() * hidden.array() * (1.0 - hidden.array())).matrix();
  out.grad.hidden_weights = x.transpose() * delta_hidden + l2 * params.hidden_weights;
  out.grad.hidden_bias = delta_hidden.colwise().sum().transpose();
  return out;
}

}  // namespace pairvote
