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

#ifndef PAIRVOTE_ENSEMBLE_HPP_
#define PAIRVOTE_ENSEMBLE_HPP_

#include "pairvote/classifiers.hpp"
#include "pairvote/dataset.hpp"
#include "pairvote/ga.hpp"
#include "pairvote/model_io.hpp"
#include "pairvote/voting.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace pairvote {

/// Per-pair network whose hidden layer becomes the pair's feature space.
struct NnTransformSpec {
  std::size_t hidden = 50;
};

using SubspaceSpec = std::variant<Genome, NnTransformSpec>;

/// One bi-classifier: the pair's scaler (fitted on the pair's training rows,
/// over all raw columns), an optional feature subset, and the model. The
/// model's class order is the pair's canonical order.
struct PairModel {
  PairKey key;
  Scaler scaler;
  std::optional<Genome> subspace;
  AnyModel model;
};

struct EnsembleConfig {
  ClassifierKind classifier = ClassifierKind::logistic;
  TrainConfig train;
  std::uint64_t seed = 0;
  int jobs = 1;
};

class PairwiseEnsemble {
 public:
  PairwiseEnsemble(LabelUniverse universe, std::size_t feature_count, std::vector<PairModel> models);

  const LabelUniverse& universe() const noexcept { return universe_; }
  std::size_t feature_count() const noexcept { return feature_count_; }
  /// Models in all_pairs order.
  const std::vector<PairModel>& models() const noexcept { return models_; }
  const PairModel& model(const PairKey& key) const;

 private:
  LabelUniverse universe_;
  std::size_t feature_count_;
  std::vector<PairModel> models_;
};

/// Trains one bi-classifier per label pair: restrict, standardize, then
/// project onto the pair's genome or train the pair network, and fit.
PairwiseEnsemble train_ensemble(const Dataset& data, const std::map<PairKey, SubspaceSpec>& subspaces,
                                const EnsembleConfig& config);

/// Verdict of the pair model for one raw (unscaled) feature vector.
std::size_t pair_verdict(const PairModel& model, std::span<const double> features);

PairVerdicts pairwise_verdicts(const PairwiseEnsemble& ensemble, std::span<const double> features);
VoteTally classify(const PairwiseEnsemble& ensemble, std::span<const double> features);
std::vector<VoteTally> classify_batch(const PairwiseEnsemble& ensemble, const FeatureMatrix& x, int jobs = 1);

inline constexpr int kModelSchemaVersion = 1;
inline constexpr int kEnsembleSchemaVersion = 1;

nlohmann::json to_json(const PairModel& model, const LabelUniverse& universe);
PairModel pair_model_from_json(const nlohmann::json& doc, const LabelUniverse& universe);

/// Writes manifest.json plus one JSON file per pair into `dir`. `metadata` is
/// embedded in the manifest (seeds, fingerprints).
void save_ensemble(const PairwiseEnsemble& ensemble, const std::filesystem::path& dir,
                   const nlohmann::json& metadata = nlohmann::json::object());
PairwiseEnsemble load_ensemble(const std::filesystem::path& dir);

}  // namespace pairvote

#endif  // PAIRVOTE_ENSEMBLE_HPP_
