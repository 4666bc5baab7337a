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

#ifndef PAIRVOTE_MODEL_IO_HPP_
#define PAIRVOTE_MODEL_IO_HPP_

#include "pairvote/classifiers.hpp"
#include "pairvote/dataset.hpp"

#include <json.hpp>

#include <variant>

namespace pairvote {

using AnyModel = std::variant<LinearModel, NnModel>;

// JSON forms of trained models. Matrices are flattened row-major; doubles are
// written in shortest round-trip form so reading back is bit-exact.

nlohmann::json to_json(const LinearModel& model);
nlohmann::json to_json(const NnModel& model);
nlohmann::json to_json(const AnyModel& model);
nlohmann::json to_json(const Scaler& scaler);

AnyModel model_from_json(const nlohmann::json& doc);
Scaler scaler_from_json(const nlohmann::json& doc);

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const nlohmann::json& flat, Eigen::Index rows, Eigen::Index cols);
nlohmann::json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const nlohmann::json& flat);

std::size_t input_dim(const AnyModel& model);
const std::vector<std::string>& class_order(const AnyModel& model);
Prediction predict(const AnyModel& model, std::span<const double> features);
std::vector<std::size_t> predict_indices(const AnyModel& model, const FeatureMatrix& x);

}  // namespace pairvote

#endif  // PAIRVOTE_MODEL_IO_HPP_
