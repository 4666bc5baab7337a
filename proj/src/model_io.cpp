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

#include "pairvote/model_io.hpp"

#include "pairvote/error.hpp"

#include <fmt/core.h>

namespace pairvote {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& m) {
  json flat = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      flat.push_back(m(r, c));
    }
  }
  return flat;
}

Eigen::MatrixXd matrix_from_json(const json& flat, Eigen::Index rows, Eigen::Index cols) {
  if (!flat.is_array() || flat.size() != static_cast<std::size_t>(rows * cols)) {
    throw ClassifierError(fmt::format("weight array has {} entries, expected {}x{}", flat.size(), rows, cols));
  }
  Eigen::MatrixXd m(rows, cols);
  std::size_t i = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = flat.at(i++).get<double>();
    }
  }
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json flat = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    flat.push_back(v(i));
  }
  return flat;
}

Eigen::VectorXd vector_from_json(const json& flat) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(flat.size()));
  for (std::size_t i = 0; i < flat.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = flat.at(i).get<double>();
  }
  return v;
}

json to_json(const LinearModel& model) {
  return {
      {"kind", std::string(to_string(model.kind))},
      {"class_order", model.class_order},
      {"dims", {{"input", model.weights.cols()}, {"rows", model.weights.rows()}}},
      {"weights", {{"w", matrix_to_json(model.weights)}, {"b", vector_to_json(model.bias)}}},
  };
}

json to_json(const NnModel& model) {
  const auto dims = model.dims();
  return {
      {"kind", "nn"},
      {"class_order", model.class_order},
      {"dims", {{"input", dims.input}, {"hidden", dims.hidden}, {"output", dims.output}}},
      {"weights",
       {{"hidden_w", matrix_to_json(model.hidden_weights)},
        {"hidden_b", vector_to_json(model.hidden_bias)},
        {"output_w", matrix_to_json(model.output_weights)},
        {"output_b", vector_to_json(model.output_bias)}}},
  };
}

json to_json(const AnyModel& model) {
  return std::visit([](const auto& m) { return to_json(m); }, model);
}

json to_json(const Scaler& scaler) {
  return {{"mean", vector_to_json(scaler.mean)}, {"inv_std", vector_to_json(scaler.inv_std)}};
}

AnyModel model_from_json(const json& doc) {
  try {
    const auto kind = parse_classifier_kind(doc.at("kind").get<std::string>());
    const auto& dims = doc.at("dims");
    const auto& weights = doc.at("weights");
    if (kind == ClassifierKind::nn) {
      NnModel model;
      model.class_order = doc.at("class_order").get<std::vector<std::string>>();
      const auto input = dims.at("input").get<Eigen::Index>();
      const auto hidden = dims.at("hidden").get<Eigen::Index>();
      const auto output = dims.at("output").get<Eigen::Index>();
      model.hidden_weights = matrix_from_json(weights.at("hidden_w"), input, hidden);
      model.hidden_bias = vector_from_json(weights.at("hidden_b"));
      model.output_weights = matrix_from_json(weights.at("output_w"), hidden, output);
      model.output_bias = vector_from_json(weights.at("output_b"));
      if (model.hidden_bias.size() != hidden || model.output_bias.size() != output) {
        throw ClassifierError("network bias length does not match its layer");
      }
      return model;
    }
    LinearModel model;
    model.kind = kind;
    model.class_order = doc.at("class_order").get<std::vector<std::string>>();
    const auto input = dims.at("input").get<Eigen::Index>();
    const auto rows = dims.at("rows").get<Eigen::Index>();
    model.weights = matrix_from_json(weights.at("w"), rows, input);
    model.bias = vector_from_json(weights.at("b"));
    if (model.bias.size() != rows) {
      throw ClassifierError("bias length does not match weight rows");
    }
    return model;
  } catch (const json::exception& e) {
    throw ClassifierError(fmt::format("malformed model document: {}", e.what()));
  }
}

Scaler scaler_from_json(const json& doc) {
  try {
    Scaler scaler{vector_from_json(doc.at("mean")), vector_from_json(doc.at("inv_std"))};
    if (scaler.mean.size() != scaler.inv_std.size()) {
      throw ClassifierError("scaler mean and inv_std lengths differ");
    }
    return scaler;
  } catch (const json::exception& e) {
    throw ClassifierError(fmt::format("malformed scaler document: {}", e.what()));
  }
}

std::size_t input_dim(const AnyModel& model) {
  return std::visit([](const auto& m) { return m.input_dim(); }, model);
}

const std::vector<std::string>& class_order(const AnyModel& model) {
  return std::visit([](const auto& m) -> const std::vector<std::string>& { return m.class_order; }, model);
}

Prediction predict(const AnyModel& model, std::span<const double> features) {
  return std::visit([&](const auto& m) { return predict(m, features); }, model);
}

std::vector<std::size_t> predict_indices(const AnyModel& model, const FeatureMatrix& x) {
  return std::visit([&](const auto& m) { return predict_indices(m, x); }, model);
}

}  // namespace pairvote
