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

#include "pairvote/ensemble.hpp"
#include "pairvote/error.hpp"
#include "pairvote/synth.hpp"

#include <doctest.h>

#include <filesystem>

namespace pairvote {
namespace {

Dataset synthetic(std::size_t classes, std::uint64_t seed, std::size_t per_class = 30) {
  SynthSpec spec;
  spec.classes = classes;
  spec.per_class = per_class;
  spec.noise_dims = 4;
  spec.informative_per_pair = 1;
  spec.separation = 4.0;
  spec.seed = seed;
  return make_synthetic(spec);
}

std::map<PairKey, SubspaceSpec> pair_genomes(const Dataset& data) {
  std::map<PairKey, SubspaceSpec> out;
  const auto pairs = all_pairs(data.universe().size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    out.emplace(pairs[k], Genome({k, data.dims() - 1}, data.dims()));
  }
  return out;
}

TEST_CASE("one model per pair in canonical order") {
  const auto data = synthetic(7, 1, 12);
  const auto ensemble = train_ensemble(data, pair_genomes(data), {});
  REQUIRE(ensemble.models().size() == 21);
  for (const auto& pm : ensemble.models()) {
    const auto& order = class_order(pm.model);
    REQUIRE(order.size() == 2);
    CHECK(order[0] == data.universe().label(pm.key.first()));
    CHECK(order[1] == data.universe().label(pm.key.second()));
    CHECK(pm.scaler.dims() == data.dims());
  }

  const auto two = synthetic(2, 2);
  CHECK(train_ensemble(two, pair_genomes(two), {}).models().size() == 1);
}

TEST_CASE("verdicts, classification and batches agree") {
  const auto data = synthetic(4, 3);
  EnsembleConfig config;
  config.classifier = ClassifierKind::svm;
  const auto ensemble = train_ensemble(data, pair_genomes(data), config);
  const auto batch = classify_batch(ensemble, data.features(), 3);
  std::size_t correct = 0;
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const auto row = data.features().row(static_cast<Eigen::Index>(r));
    const std::span<const double> x(row.data(), data.dims());
    const auto verdicts = pairwise_verdicts(ensemble, x);
    CHECK(verdicts.complete());
    for (const auto& key : all_pairs(4)) {
      CHECK(key.contains(*verdicts.get(key)));
    }
    CHECK(verdicts == pairwise_verdicts(ensemble, x));
    const auto tally = classify(ensemble, x);
    CHECK(tally == vote_decision(verdicts));
    CHECK(tally == batch[r]);
    CHECK(tally.winner < 4);
    correct += tally.winner == data.labels()[r] ? 1 : 0;
  }
  CHECK(correct > data.rows() * 9 / 10);
  const std::vector<double> wrong(3, 0.0);
  CHECK_THROWS_AS(classify(ensemble, wrong), VoteError);
}

TEST_CASE("network transform path trains one network per pair") {
  const auto data = synthetic(3, 4);
  std::map<PairKey, SubspaceSpec> subspaces;
  for (const auto& key : all_pairs(3)) {
    subspaces.emplace(key, NnTransformSpec{8});
  }
  EnsembleConfig config;
  config.classifier = ClassifierKind::nn;
  config.train = default_nn_config();
  config.train.max_epochs = 400;
  const auto ensemble = train_ensemble(data, subspaces, config);
  for (const auto& pm : ensemble.models()) {
    CHECK_FALSE(pm.subspace.has_value());
    REQUIRE(std::holds_alternative<NnModel>(pm.model));
    CHECK(std::get<NnModel>(pm.model).dims().hidden == 8);
    CHECK(std::get<NnModel>(pm.model).dims().input == data.dims());
  }
  const auto batch = classify_batch(ensemble, data.features());
  std::size_t correct = 0;
  for (std::size_t r = 0; r < data.rows(); ++r) {
    correct += batch[r].winner == data.labels()[r] ? 1 : 0;
  }
  CHECK(correct > data.rows() * 8 / 10);
}

TEST_CASE("training errors") {
  const auto data = synthetic(3, 5);
  auto subspaces = pair_genomes(data);
  subspaces.erase(PairKey(0, 2));
  CHECK_THROWS_AS(train_ensemble(data, subspaces, {}), VoteError);
  const std::vector<std::string> drop{"c2"};
  const auto missing = drop_labels(data, drop);
  DatasetParts parts = missing.parts();
  parts.universe = data.universe();
  CHECK_THROWS_AS(train_ensemble(Dataset(parts), pair_genomes(data), {}), Error);
}

TEST_CASE("training is deterministic for any job count and survives a save and load") {
  const auto data = synthetic(4, 6);
  EnsembleConfig config;
  config.seed = 9;
  config.jobs = 1;
  const auto a = train_ensemble(data, pair_genomes(data), config);
  config.jobs = 4;
  const auto b = train_ensemble(data, pair_genomes(data), config);
  for (std::size_t i = 0; i < a.models().size(); ++i) {
    CHECK(to_json(a.models()[i], a.universe()).dump() == to_json(b.models()[i], b.universe()).dump());
  }

  const auto dir = std::filesystem::temp_directory_path() / "pairvote_ensemble_test";
  std::filesystem::remove_all(dir);
  save_ensemble(a, dir, {{"note", "unit"}});
  CHECK(std::filesystem::exists(dir / "manifest.json"));
  const auto loaded = load_ensemble(dir);
  CHECK(loaded.universe() == a.universe());
  const auto before = classify_batch(a, data.features());
  const auto after = classify_batch(loaded, data.features());
  CHECK(before == after);
  for (std::size_t i = 0; i < a.models().size(); ++i) {
    CHECK(to_json(a.models()[i], a.universe()).dump() == to_json(loaded.models()[i], loaded.universe()).dump());
  }
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace pairvote
