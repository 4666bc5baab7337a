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

#include "pairvote/dataset_io.hpp"
#include "pairvote/error.hpp"
#include "pairvote/parallel.hpp"

#include <fmt/core.h>

#include <algorithm>

namespace pairvote {

using nlohmann::json;

PairwiseEnsemble::PairwiseEnsemble(LabelUniverse universe, std::size_t feature_count, std::vector<PairModel> models)
    : universe_(std::move(universe)), feature_count_(feature_count), models_(std::move(models)) {
  const auto m = universe_.size();
  if (m < 2) {
    throw VoteError("an ensemble needs at least two labels");
  }
  std::sort(models_.begin(), models_.end(), [](const PairModel& a, const PairModel& b) { return a.key < b.key; });
  const auto expected = all_pairs(m);
  if (models_.size() != expected.size()) {
    throw VoteError(fmt::format("ensemble over {} labels needs {} pair models, got {}", m, expected.size(), models_.size()));
  }
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const auto& pm = models_[i];
    if (!(pm.key == expected[i])) {
      throw VoteError(fmt::format("pair ({}, {}) is missing or duplicated", expected[i].first(), expected[i].second()));
    }
    const auto& order = class_order(pm.model);
    if (order.size() != 2 || order[0] != universe_.label(pm.key.first()) || order[1] != universe_.label(pm.key.second())) {
      throw VoteError(fmt::format("model class order does not match pair {}", pair_name(universe_, pm.key)));
    }
    if (pm.scaler.dims() != feature_count_) {
      throw VoteError(fmt::format("scaler of pair {} covers {} columns, ensemble has {}", pair_name(universe_, pm.key),
                                  pm.scaler.dims(), feature_count_));
    }
    const auto model_input = pm.subspace ? pm.subspace->size() : feature_count_;
    if (input_dim(pm.model) != model_input) {
      throw VoteError(fmt::format("pair {}: subspace has {} dims, model expects {}", pair_name(universe_, pm.key),
                                  model_input, input_dim(pm.model)));
    }
  }
}

const PairModel& PairwiseEnsemble::model(const PairKey& key) const {
  return models_.at(key.ordinal(universe_.size()));
}

PairwiseEnsemble train_ensemble(const Dataset& data, const std::map<PairKey, SubspaceSpec>& subspaces,
                                const EnsembleConfig& config) {
  if (!data.has_labels()) {
    throw VoteError("ensemble training needs labelled data");
  }
  const auto& universe = data.universe();
  const auto pairs = all_pairs(universe.size());
  for (const auto& key : pairs) {
    if (subspaces.find(key) == subspaces.end()) {
      throw VoteError(fmt::format("no subspace for pair {}", pair_name(universe, key)));
    }
  }
  std::vector<std::optional<PairModel>> trained(pairs.size());
  parallel_for(pairs.size(), config.jobs, [&](std::size_t i) {
    const auto& key = pairs[i];
    const auto pair_data = restrict(data, key.first(), key.second());
    const auto counts = pair_data.class_counts();
    if (counts[0] == 0 || counts[1] == 0) {
      throw VoteError(fmt::format("pair {} has rows of only one class", pair_name(universe, key)));
    }
    const auto standardized = standardize(pair_data);
    TrainConfig train = config.train;
    train.seed = derive_seed(config.seed, "ensemble/" + pair_name(universe, key));

    const auto& spec = subspaces.at(key);
    PairModel pm{key, standardized.scaler, std::nullopt, LinearModel{}};
    if (const auto* genome = std::get_if<Genome>(&spec)) {
      pm.subspace = *genome;
      const auto projected = standardized.train.with_features(genome->project(standardized.train.features()));
      switch (config.classifier) {
        case ClassifierKind::logistic:
          pm.model = train_logistic(projected, train);
          break;
        case ClassifierKind::svm:
          pm.model = train_svm(projected, train);
          break;
        case ClassifierKind::nn:
          pm.model = train_nn(projected, train, {genome->size(), 50, 2});
          break;
      }
    } else {
      const auto& nn = std::get<NnTransformSpec>(spec);
      pm.model = train_nn(standardized.train, train, {data.dims(), nn.hidden, 2});
    }
    trained[i] = std::move(pm);
  });
  std::vector<PairModel> models;
  models.reserve(trained.size());
  for (auto& pm : trained) {
    models.push_back(std::move(*pm));
  }
  return PairwiseEnsemble(universe, data.dims(), std::move(models));
}

std::size_t pair_verdict(const PairModel& model, std::span<const double> features) {
  Eigen::VectorXd scaled = model.scaler.apply(features);
  if (model.subspace) {
    Eigen::VectorXd projected(static_cast<Eigen::Index>(model.subspace->size()));
    for (std::size_t j = 0; j < model.subspace->size(); ++j) {
      projected(static_cast<Eigen::Index>(j)) = scaled(static_cast<Eigen::Index>(model.subspace->indices()[j]));
    }
    scaled = std::move(projected);
  }
  const auto prediction = predict(model.model, std::span<const double>(scaled.data(), static_cast<std::size_t>(scaled.size())));
  return prediction.index == 0 ? model.key.first() : model.key.second();
}

PairVerdicts pairwise_verdicts(const PairwiseEnsemble& ensemble, std::span<const double> features) {
  if (features.size() != ensemble.feature_count()) {
    throw VoteError(fmt::format("feature vector has length {}, ensemble expects {}", features.size(), ensemble.feature_count()));
  }
  PairVerdicts verdicts(ensemble.universe().size());
  for (const auto& pm : ensemble.models()) {
    verdicts.set(pm.key, pair_verdict(pm, features));
  }
  return verdicts;
}

VoteTally classify(const PairwiseEnsemble& ensemble, std::span<const double> features) {
  return vote_decision(pairwise_verdicts(ensemble, features));
}

std::vector<VoteTally> classify_batch(const PairwiseEnsemble& ensemble, const FeatureMatrix& x, int jobs) {
  std::vector<VoteTally> out(static_cast<std::size_t>(x.rows()));
  parallel_for(out.size(), jobs, [&](std::size_t i) {
    out[i] = classify(ensemble, std::span<const double>(x.row(static_cast<Eigen::Index>(i)).data(), static_cast<std::size_t>(x.cols())));
  });
  return out;
}

json to_json(const PairModel& model, const LabelUniverse& universe) {
  json doc = to_json(model.model);
  doc["schema_version"] = kModelSchemaVersion;
  doc["pair"] = {universe.label(model.key.first()), universe.label(model.key.second())};
  doc["scaler"] = to_json(model.scaler);
  doc["subspace"] = model.subspace ? json(model.subspace->indices()) : json(nullptr);
  return doc;
}

PairModel pair_model_from_json(const json& doc, const LabelUniverse& universe) {
  try {
    if (doc.at("schema_version").get<int>() != kModelSchemaVersion) {
      throw VoteError("unsupported pair model schema version");
    }
    const auto labels = doc.at("pair").get<std::vector<std::string>>();
    if (labels.size() != 2) {
      throw VoteError("pair model must name exactly two labels");
    }
    PairModel pm{PairKey(universe.require_index(labels[0]), universe.require_index(labels[1])),
                 scaler_from_json(doc.at("scaler")), std::nullopt, model_from_json(doc)};
    if (!doc.at("subspace").is_null()) {
      pm.subspace = Genome(doc.at("subspace").get<std::vector<std::size_t>>(), pm.scaler.dims());
    }
    return pm;
  } catch (const json::exception& e) {
    throw VoteError(fmt::format("malformed pair model document: {}", e.what()));
  }
}

void save_ensemble(const PairwiseEnsemble& ensemble, const std::filesystem::path& dir, const json& metadata) {
  std::filesystem::create_directories(dir);
  json files = json::object();
  for (const auto& pm : ensemble.models()) {
    const auto name = pair_name(ensemble.universe(), pm.key);
    auto file = fmt::format("pair_{:02d}_{:02d}.json", pm.key.first(), pm.key.second());
    write_text_file(dir / file, to_json(pm, ensemble.universe()).dump() + "\n");
    files[name] = file;
  }
  const json manifest = {
      {"schema_version", kEnsembleSchemaVersion},
      {"universe", ensemble.universe().labels()},
      {"feature_count", ensemble.feature_count()},
      {"pairs", files},
      {"metadata", metadata},
  };
  write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

PairwiseEnsemble load_ensemble(const std::filesystem::path& dir) {
  try {
    const auto manifest = json::parse(read_text_file(dir / "manifest.json"));
    if (manifest.at("schema_version").get<int>() != kEnsembleSchemaVersion) {
      throw VoteError("unsupported ensemble schema version");
    }
    LabelUniverse universe(manifest.at("universe").get<std::vector<std::string>>());
    std::vector<PairModel> models;
    for (const auto& [name, file] : manifest.at("pairs").items()) {
      models.push_back(pair_model_from_json(json::parse(read_text_file(dir / file.get<std::string>())), universe));
    }
    return PairwiseEnsemble(std::move(universe), manifest.at("feature_count").get<std::size_t>(), std::move(models));
  } catch (const json::exception& e) {
    throw VoteError(fmt::format("malformed ensemble in '{}': {}", dir.string(), e.what()));
  }
}

}  // namespace pairvote
