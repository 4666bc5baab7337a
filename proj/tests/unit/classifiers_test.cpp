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
#include "pairvote/model_io.hpp"
#include "support/fixtures.hpp"
#include "support/gradcheck.hpp"

#include <doctest.h>

#include <numeric>

namespace pairvote {
namespace {

using testing::make_dataset;

Dataset two_clusters(std::uint64_t seed, std::size_t per_class = 30) {
  Rng rng(seed);
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < per_class; ++i) {
    rows.push_back({-3.0 + 0.5 * rng.normal(), -3.0 + 0.5 * rng.normal()});
    labels.emplace_back("left");
    rows.push_back({3.0 + 0.5 * rng.normal(), 3.0 + 0.5 * rng.normal()});
    labels.emplace_back("right");
  }
  return make_dataset(rows, labels);
}

Dataset three_clusters(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  const double centers[3][2] = {{-4, 0}, {4, 0}, {0, 5}};
  const char* names[3] = {"a", "b", "c"};
  for (int i = 0; i < 25; ++i) {
    for (int k = 0; k < 3; ++k) {
      rows.push_back({centers[k][0] + 0.5 * rng.normal(), centers[k][1] + 0.5 * rng.normal()});
      labels.emplace_back(names[k]);
    }
  }
  return make_dataset(rows, labels);
}

template <typename Model>
double training_accuracy(const Model& model, const Dataset& data) {
  const auto predicted = predict_indices(model, data.features());
  std::size_t correct = 0;
  for (std::size_t r = 0; r < predicted.size(); ++r) {
    correct += predicted[r] == data.labels()[r] ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(predicted.size());
}

TEST_CASE("separable clusters are fitted exactly") {
  const auto data = two_clusters(1);
  CHECK(training_accuracy(train_logistic(data, {}), data) == 1.0);
  const auto svm = train_svm(data, {});
  CHECK(training_accuracy(svm, data) == 1.0);
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const auto row = data.features().row(static_cast<Eigen::Index>(r));
    const double f = score(svm, std::span<const double>(row.data(), 2))[1];
    CHECK((data.labels()[r] == 1 ? f : -f) > 0.0);
  }
  auto nn_config = default_nn_config();
  CHECK(training_accuracy(train_nn(data, nn_config, {2, 5, 2}), data) == 1.0);

  const auto multi = three_clusters(2);
  CHECK(training_accuracy(train_logistic(multi, {}), multi) == 1.0);
  CHECK(training_accuracy(train_svm(multi, {}), multi) == 1.0);
  CHECK(training_accuracy(train_nn(multi, nn_config, {2, 6, 3}), multi) == 1.0);
}

TEST_CASE("a point labelled once per class gets probability one half") {
  const auto data = make_dataset({{0.7, -1.2}, {0.7, -1.2}}, {"a", "b"});
  const auto model = train_logistic(data, {});
  const std::vector<double> x{0.7, -1.2};
  const auto scores = score(model, x);
  CHECK(scores[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(scores[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("analytic gradients agree with central differences") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    CAPTURE(seed);
    CHECK(testing::logistic_gradient_error(seed, 2) <= 1e-4);
    CHECK(testing::logistic_gradient_error(seed, 4) <= 1e-4);
    CHECK(testing::hinge_gradient_error(seed) <= 1e-4);
    CHECK(testing::nn_gradient_error(seed) <= 1e-4);
  }
}

TEST_CASE("logistic regression loss never increases") {
  const auto data = three_clusters(5);
  TrainTrace trace;
  TrainConfig config;
  config.learning_rate = 5.0;
  fit_logistic(data.features(), data.labels(), 3, config, &trace);
  REQUIRE(trace.losses.size() > 2);
  for (std::size_t i = 1; i < trace.losses.size(); ++i) {
    CHECK(trace.losses[i] <= trace.losses[i - 1] + 1e-12);
  }
}

TEST_CASE("logistic predictions ignore training row order") {
  const auto data = two_clusters(7);
  std::vector<std::size_t> order(data.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::reverse(order.begin(), order.end());
  const auto a = train_logistic(data, {});
  const auto b = train_logistic(data.select_rows(order), {});
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const std::vector<double> x{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    CHECK(predict(a, x).index == predict(b, x).index);
  }
}

TEST_CASE("scaling features keeps SVM training predictions") {
  const auto data = two_clusters(11);
  const double c = 2.5;
  const auto scaled = data.with_features(data.features() * c);
  TrainConfig config;
  const auto base = train_svm(data, config);
  config.l2 *= c * c;
  const auto other = train_svm(scaled, config);
  CHECK(predict_indices(base, data.features()) == predict_indices(other, scaled.features()));
}

TEST_CASE("network matches the requested shape") {
  Rng rng(1);
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  const std::vector<std::string> universe{"N", "A", "B", "H", "S", "D", "F"};
  for (int r = 0; r < 14; ++r) {
    std::vector<double> row(988);
    for (auto& v : row) {
      v = rng.normal();
    }
    rows.push_back(row);
    labels.push_back(universe[static_cast<std::size_t>(r % 7)]);
  }
  const auto data = make_dataset(rows, labels, {}, universe);
  TrainConfig config = default_nn_config();
  config.max_epochs = 2;
  const auto model = train_nn(data, config, {988, 50, 7});
  CHECK(model.hidden_weights.rows() == 988);
  CHECK(model.hidden_weights.cols() == 50);
  CHECK(model.output_weights.rows() == 50);
  CHECK(model.output_weights.cols() == 7);
  const auto scores = score(model, rows.front());
  for (const double s : scores) {
    CHECK(s > 0.0);
    CHECK(s < 1.0);
  }
  CHECK(hidden_transform(model, rows.front()).size() == 50);
  CHECK(hidden_transform(model, rows[3]) == hidden_transform(model, rows[3]));
}

TEST_CASE("network learns XOR") {
  const auto data = make_dataset({{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {"off", "on", "on", "off"});
  std::size_t solved = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    TrainConfig config;
    config.learning_rate = 2.0;
    config.max_epochs = 5000;
    config.tolerance = 0.0;
    config.l2 = 0.0;
    config.seed = seed;
    solved += training_accuracy(train_nn(data, config, {2, 4, 2}), data) == 1.0 ? 1 : 0;
  }
  CHECK(solved >= 4);
}

TEST_CASE("prediction conventions") {
  LinearModel zero{ClassifierKind::logistic, {"x", "y", "z"}, Eigen::MatrixXd::Zero(3, 2), Eigen::VectorXd::Zero(3)};
  const std::vector<double> v{0.3, -0.2};
  CHECK(predict(zero, v).index == 0);
  CHECK(predict(zero, v).label == "x");

  const auto data = two_clusters(4);
  const auto lr = train_logistic(data, {});
  const std::vector<double> probe{0.4, -0.1};
  const auto s = score(lr, probe);
  CHECK(s[1] == doctest::Approx(1.0 - s[0]).epsilon(1e-12));

  NnModel flat{{"a", "b"}, Eigen::MatrixXd::Zero(2, 3), Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Ones(3, 2),
               Eigen::VectorXd::Zero(2)};
  const auto h = hidden_transform(flat, probe);
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    CHECK(h(i) == 0.5);
  }

  const std::vector<double> tie{1.0, 3.0, 3.0};
  CHECK(argmax(tie) == 1);
}

TEST_CASE("training errors") {
  const auto data = two_clusters(1);
  const auto single = make_dataset({{1.0}, {2.0}}, {"a", "a"}, {}, {"a", "b"});
  CHECK_THROWS_AS(train_logistic(single, {}), ClassifierError);
  CHECK_THROWS_AS(train_svm(single, {}), ClassifierError);

  const auto lr = train_logistic(data, {});
  const std::vector<double> wrong{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(predict(lr, wrong), ClassifierError);

  TrainConfig wild = default_nn_config();
  wild.learning_rate = 1e200;
  try {
    train_nn(data, wild, {2, 4, 2});
    FAIL("expected divergence");
  } catch (const ClassifierError& e) {
    CHECK(std::string(e.what()).find("epoch") != std::string::npos);
  }
  TrainConfig bad;
  bad.learning_rate = 0.0;
  CHECK_THROWS_AS(bad.validate(), ClassifierError);
}

TEST_CASE("training is deterministic and models round-trip through JSON") {
  const auto data = three_clusters(8);
  TrainConfig config = default_nn_config();
  config.seed = 42;
  config.max_epochs = 300;
  const auto a = train_nn(data, config, {2, 5, 3});
  const auto b = train_nn(data, config, {2, 5, 3});
  CHECK(to_json(a).dump() == to_json(b).dump());

  for (const AnyModel& model : {AnyModel(a), AnyModel(train_logistic(data, {})), AnyModel(train_svm(data, {}))}) {
    const auto text = to_json(model).dump();
    const auto loaded = model_from_json(nlohmann::json::parse(text));
    CHECK(to_json(loaded).dump() == text);
    CHECK(predict_indices(loaded, data.features()) == predict_indices(model, data.features()));
  }
}

}  // namespace
}  // namespace pairvote
