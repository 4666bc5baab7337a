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

#ifndef PAIRVOTE_EXPERIMENT_HPP_
#define PAIRVOTE_EXPERIMENT_HPP_

#include "pairvote/classifiers.hpp"
#include "pairvote/dataset.hpp"
#include "pairvote/ensemble.hpp"
#include "pairvote/ga.hpp"
#include "pairvote/stats.hpp"
#include "pairvote/voting.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pairvote {

enum class Method { bi_voting, multiclass };
enum class SubspacePath { ga_selection, nn_transform };

std::string_view to_string(Method method);
std::string_view to_string(SubspacePath path);
Method parse_method(std::string_view text);
SubspacePath parse_subspace_path(std::string_view text);

struct ExperimentConfig {
  Method method = Method::bi_voting;
  SubspacePath path = SubspacePath::ga_selection;
  ClassifierKind classifier = ClassifierKind::logistic;
  /// Classifier columns of a comparison on the GA path.
  std::vector<ClassifierKind> classifiers = {ClassifierKind::logistic, ClassifierKind::svm};
  GaConfig ga;
  TrainConfig train;                         // final LR / SVM models
  TrainConfig nn_train = default_nn_config();  // networks
  std::size_t nn_hidden = 50;
  std::size_t n_folds = 5;
  std::uint64_t master_seed = 0;
  std::vector<std::string> labels;                                 // universe order override
  std::vector<std::string> exclude_from_report = {"disgust"};      // recall computed but flagged
  std::vector<std::string> exclude_from_training;                  // rows dropped before CV

  void validate() const;
  /// Hash of the canonical JSON form.
  std::string fingerprint() const;
};

nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig experiment_config_from_json(const nlohmann::json& doc, ExperimentConfig base = {});

struct EmotionRecall {
  std::string label;
  std::size_t correct = 0;
  std::size_t total = 0;
  std::optional<double> recall;  // undefined when the label never occurs
  bool flagged = false;          // on the exclude-from-report list
};

/// Recall per universe label from (true, predicted) index pairs.
std::vector<EmotionRecall> per_emotion_recall(std::span<const std::pair<std::size_t, std::size_t>> predictions,
                                              const LabelUniverse& universe, std::span<const std::string> flagged = {});

struct FoldResult {
  std::size_t fold = 0;
  std::vector<std::string> test_speakers;
  std::size_t test_rows = 0;
  std::size_t correct = 0;
  double accuracy = 0.0;
  std::size_t competition_cases = 0;  // tallies whose max set had more than one label
};

struct MethodResult {
  Method method = Method::bi_voting;
  SubspacePath path = SubspacePath::ga_selection;
  ClassifierKind classifier = ClassifierKind::logistic;
  std::vector<FoldResult> folds;
  double mean_accuracy = 0.0;
  double pooled_accuracy = 0.0;
  std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]
  std::vector<EmotionRecall> recall;
  /// Selected subspaces per fold: pair name -> genome, or "global" -> genome.
  std::vector<std::map<std::string, Genome>> genomes;

  std::vector<double> fold_accuracies() const;
  /// "bi-voting/ga-selection/lr"
  std::string scope() const;
};

/// Speaker-leakage check of one fold of one run.
struct LeakageAudit {
  std::string run;
  std::size_t fold = 0;
  std::size_t datasets_checked = 0;
  std::size_t rows_checked = 0;
  std::size_t violations = 0;
};

struct TTestRow {
  ClassifierKind classifier = ClassifierKind::logistic;
  TTestResult result;
};

/// Common features between each pair genome and the global genome, per fold.
struct OverlapSeries {
  ClassifierKind classifier = ClassifierKind::logistic;
  std::vector<std::string> pairs;  // short names, all_pairs order
  std::vector<std::vector<std::size_t>> counts;  // [pair][fold]
  std::vector<double> mean;                      // [pair]
};

inline constexpr int kReportSchemaVersion = 1;

struct ExperimentReport {
  std::string config_fingerprint;
  std::uint64_t master_seed = 0;
  LabelUniverse universe;
  std::size_t n_folds = 0;
  std::vector<Fold> plan;
  std::vector<MethodResult> results;
  std::vector<TTestRow> ttests;
  std::vector<OverlapSeries> overlap;
  std::vector<LeakageAudit> audits;

  const MethodResult* find(Method method, ClassifierKind classifier) const;
};

struct RunOptions {
  int jobs = 1;
  bool verbose = false;  // per-generation GA lines
  std::function<void(const std::string&)> log;
};

/// Speaker-independent cross-validation of one method (config.method,
/// config.path, config.classifier).
ExperimentReport run_cv(const ExperimentConfig& config, const Dataset& data, const RunOptions& options = {});

/// Runs both methods for every classifier column (GA path: config.classifiers;
/// NN path: the network), then the paired t-tests and, on the GA path, the
/// overlap series.
ExperimentReport run_comparison(const ExperimentConfig& config, const Dataset& data, const RunOptions& options = {});

/// Scores a saved ensemble on a labelled dataset as a single evaluation fold.
ExperimentReport evaluate_ensemble(const PairwiseEnsemble& ensemble, const Dataset& data, const ExperimentConfig& config);

/// "N-A" when label initials are unique, otherwise "neutral-anger".
std::string short_pair_name(const LabelUniverse& universe, const PairKey& key);

}  // namespace pairvote

#endif  // PAIRVOTE_EXPERIMENT_HPP_
