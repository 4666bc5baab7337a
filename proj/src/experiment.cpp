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

#include "pairvote/experiment.hpp"

#include "pairvote/error.hpp"
#include "pairvote/parallel.hpp"
#include "pairvote/random.hpp"

#include <fmt/core.h>
#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>

namespace pairvote {

using nlohmann::json;

std::string_view to_string(Method method) { return method == Method::bi_voting ? "bi-voting" : "multiclass"; }

std::string_view to_string(SubspacePath path) {
  return path == SubspacePath::ga_selection ? "ga-selection" : "nn-transform";
}

Method parse_method(std::string_view text) {
  if (text == "bi-voting") {
    return Method::bi_voting;
  }
  if (text == "multiclass") {
    return Method::multiclass;
  }
  throw ExperimentError(fmt::format("unknown method '{}' (expected bi-voting or multiclass)", text));
}

SubspacePath parse_subspace_path(std::string_view text) {
  if (text == "ga-selection" || text == "ga") {
    return SubspacePath::ga_selection;
  }
  if (text == "nn-transform" || text == "nn") {
    return SubspacePath::nn_transform;
  }
  throw ExperimentError(fmt::format("unknown subspace path '{}' (expected ga-selection or nn-transform)", text));
}

void ExperimentConfig::validate() const {
  if (path == SubspacePath::nn_transform && classifier != ClassifierKind::nn) {
    throw ExperimentError("the nn-transform path uses the nn classifier");
  }
  if (path == SubspacePath::ga_selection && classifier == ClassifierKind::nn) {
    throw ExperimentError("the ga-selection path uses the lr or svm classifier");
  }
  for (const auto kind : classifiers) {
    if (kind == ClassifierKind::nn) {
      throw ExperimentError("GA comparison columns must be lr or svm");
    }
  }
  if (n_folds < 1) {
    throw ExperimentError("n_folds must be at least 1");
  }
  if (nn_hidden < 1) {
    throw ExperimentError("nn_hidden must be at least 1");
  }
  train.validate();
  nn_train.validate();
}

json to_json(const ExperimentConfig& config) {
  json classifiers = json::array();
  for (const auto kind : config.classifiers) {
    classifiers.push_back(std::string(to_string(kind)));
  }
  return {
      {"method", std::string(to_string(config.method))},
      {"path", std::string(to_string(config.path))},
      {"classifier", std::string(to_string(config.classifier))},
      {"classifiers", classifiers},
      {"ga", to_json(config.ga)},
      {"train", to_json(config.train)},
      {"nn_train", to_json(config.nn_train)},
      {"nn_hidden", config.nn_hidden},
      {"n_folds", config.n_folds},
      {"master_seed", config.master_seed},
      {"labels", config.labels},
      {"exclude_from_report", config.exclude_from_report},
      {"exclude_from_training", config.exclude_from_training},
  };
}

ExperimentConfig experiment_config_from_json(const json& doc, ExperimentConfig base) {
  try {
    if (doc.contains("method")) {
      base.method = parse_method(doc.at("method").get<std::string>());
    }
    if (doc.contains("path")) {
      base.path = parse_subspace_path(doc.at("path").get<std::string>());
      if (base.path == SubspacePath::nn_transform && !doc.contains("classifier")) {
        base.classifier = ClassifierKind::nn;
      }
    }
    if (doc.contains("classifier")) {
      base.classifier = parse_classifier_kind(doc.at("classifier").get<std::string>());
    }
    if (doc.contains("classifiers")) {
      base.classifiers.clear();
      for (const auto& kind : doc.at("classifiers")) {
        base.classifiers.push_back(parse_classifier_kind(kind.get<std::string>()));
      }
    }
    if (doc.contains("ga")) {
      base.ga = ga_config_from_json(doc.at("ga"), base.ga);
    }
    if (doc.contains("train")) {
      base.train = train_config_from_json(doc.at("train"), base.train);
    }
    if (doc.contains("nn_train")) {
      base.nn_train = train_config_from_json(doc.at("nn_train"), base.nn_train);
    }
    base.nn_hidden = doc.value("nn_hidden", base.nn_hidden);
    base.n_folds = doc.value("n_folds", base.n_folds);
    base.master_seed = doc.value("master_seed", base.master_seed);
    base.labels = doc.value("labels", base.labels);
    base.exclude_from_report = doc.value("exclude_from_report", base.exclude_from_report);
    base.exclude_from_training = doc.value("exclude_from_training", base.exclude_from_training);
  } catch (const json::exception& e) {
    throw ExperimentError(fmt::format("malformed experiment config: {}", e.what()));
  }
  return base;
}

std::string ExperimentConfig::fingerprint() const { return to_hex(fnv1a(to_json(*this).dump())); }

std::vector<EmotionRecall> per_emotion_recall(std::span<const std::pair<std::size_t, std::size_t>> predictions,
                                              const LabelUniverse& universe, std::span<const std::string> flagged) {
  if (predictions.empty()) {
    throw ExperimentError("per-emotion recall needs at least one prediction");
  }
  std::vector<EmotionRecall> out;
  for (std::size_t k = 0; k < universe.size(); ++k) {
    EmotionRecall r;
    r.label = universe.label(k);
    r.flagged = std::find(flagged.begin(), flagged.end(), r.label) != flagged.end();
    out.push_back(std::move(r));
  }
  for (const auto& [truth, predicted] : predictions) {
    if (truth >= universe.size() || predicted >= universe.size()) {
      throw ExperimentError("prediction refers to a label outside the universe");
    }
    ++out[truth].total;
    out[truth].correct += truth == predicted ? 1 : 0;
  }
  for (auto& r : out) {
    if (r.total > 0) {
      r.recall = static_cast<double>(r.correct) / static_cast<double>(r.total);
    }
  }
  return out;
}

std::vector<double> MethodResult::fold_accuracies() const {
  std::vector<double> out;
  for (const auto& f : folds) {
    out.push_back(f.accuracy);
  }
  return out;
}

std::string MethodResult::scope() const {
  return fmt::format("{}/{}/{}", to_string(method), to_string(path), to_string(classifier));
}

const MethodResult* ExperimentReport::find(Method method, ClassifierKind classifier) const {
  for (const auto& r : results) {
    if (r.method == method && r.classifier == classifier) {
      return &r;
    }
  }
  return nullptr;
}

std::string short_pair_name(const LabelUniverse& universe, const PairKey& key) {
  std::set<char> initials;
  for (const auto& label : universe.labels()) {
    initials.insert(static_cast<char>(std::toupper(static_cast<unsigned char>(label.front()))));
  }
  if (initials.size() == universe.size()) {
    const auto initial = [&](std::size_t k) {
      return static_cast<char>(std::toupper(static_cast<unsigned char>(universe.label(k).front())));
    };
    return fmt::format("{}-{}", initial(key.first()), initial(key.second()));
  }
  return fmt::format("{}-{}", universe.label(key.first()), universe.label(key.second()));
}

namespace {

void emit(const RunOptions& options, const std::string& line) {
  if (options.log) {
    options.log(line);
  }
}

/// Counts rows of `rows` (or all rows) whose speaker is a test speaker.
class Auditor {
 public:
  Auditor(std::string run, std::size_t fold, std::vector<std::string> test_speakers)
      : test_speakers_(std::move(test_speakers)) {
    audit_.run = std::move(run);
    audit_.fold = fold;
  }

  void check(const Dataset& data, const std::vector<std::size_t>* rows = nullptr) {
    const std::lock_guard lock(mutex_);
    ++audit_.datasets_checked;
    const auto visit = [&](std::size_t r) {
      ++audit_.rows_checked;
      if (std::binary_search(test_speakers_.begin(), test_speakers_.end(), data.speakers().at(r))) {
        ++audit_.violations;
      }
    };
    if (rows != nullptr) {
      for (const auto r : *rows) {
        visit(r);
      }
    } else {
      for (std::size_t r = 0; r < data.rows(); ++r) {
        visit(r);
      }
    }
  }

  void check_ga(const Dataset& data, const GaResult& result) {
    for (const auto& split : result.splits) {
      check(data, &split.train_rows);
      check(data, &split.validation_rows);
    }
  }

  LeakageAudit finish() const {
    if (audit_.violations > 0) {
      throw ExperimentError(fmt::format("speaker leakage in {} fold {}: {} training rows belong to test speakers",
                                        audit_.run, audit_.fold, audit_.violations));
    }
    return audit_;
  }

 private:
  std::vector<std::string> test_speakers_;
  LeakageAudit audit_;
  std::mutex mutex_;
};

struct FoldOutcome {
  FoldResult result;
  std::vector<std::pair<std::size_t, std::size_t>> predictions;
  std::map<std::string, Genome> genomes;
  LeakageAudit audit;
};

GaConfig ga_for(const ExperimentConfig& config, std::uint64_t seed) {
  GaConfig ga = config.ga;
  ga.classifier = config.classifier;
  ga.seed = seed;
  return ga;
}

GaProgress ga_progress(const RunOptions& options, const std::string& tag) {
  if (!options.verbose || !options.log) {
    return {};
  }
  return [&options, tag](const GenerationStats& s) {
    options.log(fmt::format("{} gen {} best {:.4f} mean {:.4f}", tag, s.generation, s.best, s.mean));
  };
}

FoldOutcome run_bi_voting_fold(const ExperimentConfig& config, const Dataset& train, const Dataset& test,
                               std::uint64_t fold_seed, Auditor& auditor, const std::string& tag,
                               const RunOptions& options) {
  FoldOutcome out;
  const auto& universe = train.universe();
  const auto pairs = all_pairs(universe.size());
  std::vector<std::optional<SubspaceSpec>> specs(pairs.size());
  std::vector<std::optional<Genome>> selected(pairs.size());

  parallel_for(pairs.size(), options.jobs, [&](std::size_t i) {
    const auto& key = pairs[i];
    const auto name = pair_name(universe, key);
    const auto pair_train = restrict(train, key.first(), key.second());
    auditor.check(pair_train);
    if (config.path == SubspacePath::nn_transform) {
      specs[i] = NnTransformSpec{config.nn_hidden};
      return;
    }
    const auto standardized = standardize(pair_train);
    const auto result = run_ga(standardized.train, ga_for(config, derive_seed(fold_seed, "ga/" + name)), 1,
                               ga_progress(options, tag + " " + name));
    auditor.check_ga(standardized.train, result);
    emit(options, fmt::format("{} pair {}: fitness {:.4f} after {} generations ({} evaluations)", tag, name,
                              result.best_fitness, result.history.size(), result.evaluations));
    specs[i] = result.best;
    selected[i] = result.best;
  });

  std::map<PairKey, SubspaceSpec> subspaces;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    subspaces.emplace(pairs[i], *specs[i]);
    if (selected[i]) {
      out.genomes.emplace(pair_name(universe, pairs[i]), *selected[i]);
    }
  }
  EnsembleConfig ensemble_config;
  ensemble_config.classifier = config.classifier;
  ensemble_config.train = config.classifier == ClassifierKind::nn ? config.nn_train : config.train;
  ensemble_config.seed = derive_seed(fold_seed, "ensemble");
  ensemble_config.jobs = options.jobs;
  const auto ensemble = train_ensemble(train, subspaces, ensemble_config);

  const auto tallies = classify_batch(ensemble, test.features(), options.jobs);
  for (std::size_t r = 0; r < tallies.size(); ++r) {
    out.predictions.emplace_back(test.labels()[r], tallies[r].winner);
    out.result.competition_cases += tallies[r].max_set.size() > 1 ? 1 : 0;
  }
  return out;
}

FoldOutcome run_multiclass_fold(const ExperimentConfig& config, const Dataset& train, const Dataset& test,
                                std::uint64_t fold_seed, Auditor& auditor, const std::string& tag,
                                const RunOptions& options) {
  FoldOutcome out;
  const std::vector<Dataset> others{test};
  const auto standardized = standardize(train, others);
  const auto& std_train = standardized.train;
  const auto& std_test = standardized.others.front();
  auditor.check(std_train);
  const auto classes = train.universe().size();

  AnyModel model;
  FeatureMatrix test_x;
  if (config.path == SubspacePath::ga_selection) {
    const auto result = run_ga(std_train, ga_for(config, derive_seed(fold_seed, "ga/global")), options.jobs,
                               ga_progress(options, tag + " global"));
    auditor.check_ga(std_train, result);
    emit(options, fmt::format("{} global: fitness {:.4f} after {} generations ({} evaluations)", tag,
                              result.best_fitness, result.history.size(), result.evaluations));
    out.genomes.emplace("global", result.best);
    const auto x = result.best.project(std_train.features());
    TrainConfig train_config = config.train;
    train_config.seed = derive_seed(fold_seed, "multiclass");
    model = config.classifier == ClassifierKind::svm ? fit_svm(x, std_train.labels(), classes, train_config)
                                                     : fit_logistic(x, std_train.labels(), classes, train_config);
    test_x = result.best.project(std_test.features());
  } else {
    TrainConfig train_config = config.nn_train;
    train_config.seed = derive_seed(fold_seed, "multiclass");
    model = fit_nn(std_train.features(), std_train.labels(), classes, train_config,
                   {std_train.dims(), config.nn_hidden, classes});
    test_x = std_test.features();
  }
  const auto predicted = predict_indices(model, test_x);
  for (std::size_t r = 0; r < predicted.size(); ++r) {
    out.predictions.emplace_back(test.labels()[r], predicted[r]);
  }
  return out;
}

Dataset prepare(const ExperimentConfig& config, const Dataset& data) {
  if (!data.has_labels() || !data.has_speakers()) {
    throw ExperimentError("cross-validation needs labels and speaker ids");
  }
  Dataset prepared = data;
  if (!config.labels.empty()) {
    DatasetParts parts = data.parts();
    LabelUniverse universe(config.labels);
    for (auto& label : parts.labels) {
      label = universe.require_index(data.universe().label(label));
    }
    parts.universe = std::move(universe);
    prepared = Dataset(std::move(parts));
  }
  return drop_labels(prepared, config.exclude_from_training);
}

void finalize(MethodResult& result, std::vector<FoldOutcome>& outcomes, const LabelUniverse& universe,
              const ExperimentConfig& config) {
  std::vector<std::pair<std::size_t, std::size_t>> pooled;
  std::size_t correct = 0;
  for (auto& outcome : outcomes) {
    result.folds.push_back(outcome.result);
    result.genomes.push_back(std::move(outcome.genomes));
    pooled.insert(pooled.end(), outcome.predictions.begin(), outcome.predictions.end());
    correct += outcome.result.correct;
  }
  const auto accuracies = result.fold_accuracies();
  result.mean_accuracy = std::accumulate(accuracies.begin(), accuracies.end(), 0.0) / static_cast<double>(accuracies.size());
  result.pooled_accuracy = static_cast<double>(correct) / static_cast<double>(pooled.size());
  result.confusion.assign(universe.size(), std::vector<std::size_t>(universe.size(), 0));
  for (const auto& [truth, predicted] : pooled) {
    ++result.confusion[truth][predicted];
  }
  result.recall = per_emotion_recall(pooled, universe, config.exclude_from_report);
}

}  // namespace

ExperimentReport run_cv(const ExperimentConfig& config, const Dataset& data, const RunOptions& options) {
  config.validate();
  const auto prepared = prepare(config, data);
  const auto& universe = prepared.universe();
  const auto plan = make_speaker_folds(prepared, config.n_folds, derive_seed(config.master_seed, "folds"));

  ExperimentReport report;
  report.config_fingerprint = config.fingerprint();
  report.master_seed = config.master_seed;
  report.universe = universe;
  report.n_folds = plan.folds.size();
  report.plan = plan.folds;

  MethodResult result;
  result.method = config.method;
  result.path = config.path;
  result.classifier = config.classifier;
  const auto run_name = result.scope();

  std::vector<FoldOutcome> outcomes;
  for (std::size_t k = 0; k < plan.folds.size(); ++k) {
    const auto& fold = plan.folds[k];
    const auto fold_seed = derive_seed(config.master_seed, fmt::format("fold/{}", k));
    const auto [train, test] = split_fold(prepared, fold);
    const auto counts = train.class_counts();
    for (std::size_t c = 0; c < counts.size(); ++c) {
      if (counts[c] < 2) {
        throw ExperimentError(fmt::format("fold {}: class '{}' has {} training rows", k, universe.label(c), counts[c]));
      }
    }
    const auto tag = fmt::format("[{} fold {}]", run_name, k);
    emit(options, fmt::format("{} train speakers {} | test speakers {}", tag, fmt::join(fold.train_speakers, ","),
                              fmt::join(fold.test_speakers, ",")));
    Auditor auditor(run_name, k, fold.test_speakers);
    auditor.check(train);
    auto outcome = config.method == Method::bi_voting
                       ? run_bi_voting_fold(config, train, test, fold_seed, auditor, tag, options)
                       : run_multiclass_fold(config, train, test, fold_seed, auditor, tag, options);
    outcome.result.fold = k;
    outcome.result.test_speakers = fold.test_speakers;
    outcome.result.test_rows = test.rows();
    for (const auto& [truth, predicted] : outcome.predictions) {
      outcome.result.correct += truth == predicted ? 1 : 0;
    }
    outcome.result.accuracy = static_cast<double>(outcome.result.correct) / static_cast<double>(test.rows());
    report.audits.push_back(auditor.finish());
    emit(options, fmt::format("{} accuracy {:.4f} ({}/{})", tag, outcome.result.accuracy, outcome.result.correct,
                              outcome.result.test_rows));
    outcomes.push_back(std::move(outcome));
  }
  finalize(result, outcomes, universe, config);
  report.results.push_back(std::move(result));
  return report;
}

ExperimentReport run_comparison(const ExperimentConfig& config, const Dataset& data, const RunOptions& options) {
  std::vector<ClassifierKind> columns = config.path == SubspacePath::nn_transform
                                            ? std::vector<ClassifierKind>{ClassifierKind::nn}
                                            : config.classifiers;
  if (columns.empty()) {
    throw ExperimentError("comparison needs at least one classifier column");
  }
  ExperimentReport report;
  for (const auto kind : columns) {
    for (const auto method : {Method::bi_voting, Method::multiclass}) {
      ExperimentConfig run = config;
      run.method = method;
      run.classifier = kind;
      auto part = run_cv(run, data, options);
      if (report.results.empty()) {
        report = std::move(part);
      } else {
        report.results.push_back(std::move(part.results.front()));
        report.audits.insert(report.audits.end(), part.audits.begin(), part.audits.end());
      }
    }
  }
  report.config_fingerprint = config.fingerprint();

  for (const auto kind : columns) {
    const auto* bi = report.find(Method::bi_voting, kind);
    const auto* multi = report.find(Method::multiclass, kind);
    TTestRow row{kind, {}};
    if (report.n_folds >= 2) {
      row.result = paired_t_test(bi->fold_accuracies(), multi->fold_accuracies());
    } else {
      row.result.n = report.n_folds;
    }
    report.ttests.push_back(row);

    if (config.path != SubspacePath::ga_selection) {
      continue;
    }
    OverlapSeries series;
    series.classifier = kind;
    for (const auto& key : all_pairs(report.universe.size())) {
      series.pairs.push_back(short_pair_name(report.universe, key));
      std::vector<std::size_t> counts;
      for (std::size_t k = 0; k < report.n_folds; ++k) {
        const auto& global = multi->genomes[k].at("global");
        counts.push_back(subset_overlap(bi->genomes[k].at(pair_name(report.universe, key)), global));
      }
      series.mean.push_back(static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::size_t{0})) /
                            static_cast<double>(counts.size()));
      series.counts.push_back(std::move(counts));
    }
    report.overlap.push_back(std::move(series));
  }
  return report;
}

ExperimentReport evaluate_ensemble(const PairwiseEnsemble& ensemble, const Dataset& data, const ExperimentConfig& config) {
  if (!data.has_labels()) {
    throw ExperimentError("evaluation needs a labelled dataset");
  }
  const auto& universe = ensemble.universe();
  ExperimentReport report;
  report.config_fingerprint = config.fingerprint();
  report.master_seed = config.master_seed;
  report.universe = universe;
  report.n_folds = 1;
  Fold fold;
  fold.test_speakers = data.has_speakers() ? data.distinct_speakers() : std::vector<std::string>{};
  report.plan.push_back(fold);

  const auto kind = std::holds_alternative<NnModel>(ensemble.models().front().model)
                        ? ClassifierKind::nn
                        : std::get<LinearModel>(ensemble.models().front().model).kind;
  MethodResult result;
  result.method = Method::bi_voting;
  result.path = kind == ClassifierKind::nn && !ensemble.models().front().subspace ? SubspacePath::nn_transform
                                                                                  : SubspacePath::ga_selection;
  result.classifier = kind;

  FoldOutcome outcome;
  const auto tallies = classify_batch(ensemble, data.features());
  for (std::size_t r = 0; r < tallies.size(); ++r) {
    const auto truth = universe.require_index(data.label_of(r));
    outcome.predictions.emplace_back(truth, tallies[r].winner);
    outcome.result.correct += truth == tallies[r].winner ? 1 : 0;
    outcome.result.competition_cases += tallies[r].max_set.size() > 1 ? 1 : 0;
  }
  outcome.result.test_speakers = fold.test_speakers;
  outcome.result.test_rows = data.rows();
  outcome.result.accuracy = static_cast<double>(outcome.result.correct) / static_cast<double>(data.rows());
  std::vector<FoldOutcome> outcomes;
  outcomes.push_back(std::move(outcome));
  finalize(result, outcomes, universe, config);
  report.results.push_back(std::move(result));
  return report;
}

}  // namespace pairvote
