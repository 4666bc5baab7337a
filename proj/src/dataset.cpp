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

#include "pairvote/dataset.hpp"

#include "pairvote/error.hpp"
#include "pairvote/random.hpp"

#include <fmt/core.h>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

namespace pairvote {

LabelUniverse::LabelUniverse(std::vector<std::string> labels) : labels_(std::move(labels)) {
  std::set<std::string_view> seen;
  for (const auto& label : labels_) {
    if (label.empty()) {
      throw DatasetError("label universe contains an empty label");
    }
    if (!seen.insert(label).second) {
      throw DatasetError(fmt::format("label universe contains duplicate label '{}'", label));
    }
  }
}

std::optional<std::size_t> LabelUniverse::index_of(std::string_view label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t LabelUniverse::require_index(std::string_view label) const {
  if (const auto index = index_of(label)) {
    return *index;
  }
  throw DatasetError(fmt::format("unknown label '{}' (universe: {})", label, fmt::join(labels_, ", ")));
}

std::string_view to_string(Sex sex) {
  switch (sex) {
    case Sex::male:
      return "M";
    case Sex::female:
      return "F";
    case Sex::unknown:
      break;
  }
  return "";
}

Sex parse_sex(std::string_view text) {
  if (text == "M" || text == "m" || text == "male") {
    return Sex::male;
  }
  if (text == "F" || text == "f" || text == "female") {
    return Sex::female;
  }
  if (text.empty() || text == "?" || text == "unknown") {
    return Sex::unknown;
  }
  throw DatasetError(fmt::format("unrecognized sex value '{}'", text));
}

Dataset::Dataset(DatasetParts parts) : parts_(std::move(parts)) {
  const auto n = rows();
  if (n == 0) {
    throw DatasetError("dataset is empty (no rows)");
  }
  if (dims() == 0) {
    throw DatasetError("dataset has no feature columns");
  }
  if (parts_.utterance_ids.size() != n) {
    throw DatasetError(fmt::format("{} utterance ids for {} rows", parts_.utterance_ids.size(), n));
  }
  if (!parts_.feature_names.empty() && parts_.feature_names.size() != dims()) {
    throw DatasetError(fmt::format("{} feature names for {} columns", parts_.feature_names.size(), dims()));
  }
  std::unordered_set<std::string_view> ids;
  for (const auto& id : parts_.utterance_ids) {
    if (!ids.insert(id).second) {
      throw DatasetError(fmt::format("duplicate utterance id '{}'", id));
    }
  }
  for (Eigen::Index r = 0; r < parts_.features.rows(); ++r) {
    for (Eigen::Index c = 0; c < parts_.features.cols(); ++c) {
      if (!std::isfinite(parts_.features(r, c))) {
        throw DatasetError(fmt::format("non-finite value in row {} ('{}'), column {}", r,
                                       parts_.utterance_ids[static_cast<std::size_t>(r)], c));
      }
    }
  }
  if (!parts_.labels.empty()) {
    if (parts_.labels.size() != n) {
      throw DatasetError(fmt::format("{} labels for {} rows", parts_.labels.size(), n));
    }
    if (parts_.universe.size() < 2) {
      throw DatasetError("a labelled dataset needs a label universe of at least 2 labels");
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (parts_.labels[r] >= parts_.universe.size()) {
        throw DatasetError(fmt::format("label index {} out of range in row {}", parts_.labels[r], r));
      }
    }
  }
  if (!parts_.speakers.empty() && parts_.speakers.size() != n) {
    throw DatasetError(fmt::format("{} speaker ids for {} rows", parts_.speakers.size(), n));
  }
}

std::vector<std::string> Dataset::distinct_speakers() const {
  std::set<std::string> unique(parts_.speakers.begin(), parts_.speakers.end());
  return {unique.begin(), unique.end()};
}

std::vector<std::size_t> Dataset::class_counts() const {
  std::vector<std::size_t> counts(parts_.universe.size(), 0);
  for (const auto label : parts_.labels) {
    ++counts[label];
  }
  return counts;
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows) const {
  DatasetParts out;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), parts_.features.cols());
  out.utterance_ids.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = rows[i];
    out.features.row(static_cast<Eigen::Index>(i)) = parts_.features.row(static_cast<Eigen::Index>(r));
    out.utterance_ids.push_back(parts_.utterance_ids.at(r));
    if (has_labels()) {
      out.labels.push_back(parts_.labels[r]);
    }
    if (has_speakers()) {
      out.speakers.push_back(parts_.speakers[r]);
    }
  }
  out.feature_names = parts_.feature_names;
  out.universe = parts_.universe;
  out.speaker_sex = parts_.speaker_sex;
  return Dataset(std::move(out));
}

Dataset Dataset::with_features(FeatureMatrix features, std::vector<std::string> feature_names) const {
  if (static_cast<std::size_t>(features.rows()) != rows()) {
    throw DatasetError(fmt::format("replacement features have {} rows, dataset has {}", features.rows(), rows()));
  }
  DatasetParts out = parts_;
  out.features = std::move(features);
  out.feature_names = std::move(feature_names);
  return Dataset(std::move(out));
}

std::uint64_t Dataset::fingerprint() const {
  std::uint64_t h = fnv1a(std::span<const double>(parts_.features.data(), static_cast<std::size_t>(parts_.features.size())));
  h = fnv1a(fmt::format("{}x{}", rows(), dims()), h);
  for (const auto label : parts_.labels) {
    h = fnv1a(parts_.universe.label(label), h);
    h = fnv1a(std::string_view("\x1f", 1), h);
  }
  return h;
}

FeatureMatrix Scaler::apply(const FeatureMatrix& features) const {
  if (static_cast<std::size_t>(features.cols()) != dims()) {
    throw DatasetError(fmt::format("scaler fitted on {} columns applied to {}", dims(), features.cols()));
  }
  FeatureMatrix out = (features.rowwise() - mean.transpose()).array().rowwise() * inv_std.transpose().array();
  return out;
}

Eigen::VectorXd Scaler::apply(std::span<const double> row) const {
  if (row.size() != dims()) {
    throw DatasetError(fmt::format("scaler fitted on {} columns applied to a vector of length {}", dims(), row.size()));
  }
  const Eigen::Map<const Eigen::VectorXd> x(row.data(), static_cast<Eigen::Index>(row.size()));
  return ((x - mean).array() * inv_std.array()).matrix();
}

Dataset Scaler::apply(const Dataset& data) const { return data.with_features(apply(data.features()), data.feature_names()); }

Scaler fit_scaler(const Dataset& train) {
  const auto& x = train.features();
  const double n = static_cast<double>(x.rows());
  Scaler scaler;
  scaler.mean = x.colwise().sum().transpose() / n;
  scaler.inv_std.resize(x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const auto column = x.col(c);
    if (column.maxCoeff() == column.minCoeff()) {
      scaler.inv_std(c) = 0.0;
      continue;
    }
    const double variance = (column.array() - scaler.mean(c)).square().sum() / n;
    scaler.inv_std(c) = variance > 0.0 ? 1.0 / std::sqrt(variance) : 0.0;
  }
  return scaler;
}

Standardized standardize(const Dataset& train, std::span<const Dataset> others) {
  Standardized out{.train = {}, .others = {}, .scaler = fit_scaler(train)};
  out.train = out.scaler.apply(train);
  out.others.reserve(others.size());
  for (const auto& other : others) {
    out.others.push_back(out.scaler.apply(other));
  }
  return out;
}

Dataset restrict(const Dataset& data, std::size_t first, std::size_t second) {
  if (!data.has_labels()) {
    throw DatasetError("cannot restrict an unlabelled dataset to a pair");
  }
  const auto& universe = data.universe();
  if (first >= universe.size() || second >= universe.size()) {
    throw DatasetError("pair label index out of range");
  }
  if (first == second) {
    throw DatasetError(fmt::format("pair must consist of two different labels, got ('{}', '{}')",
                                   universe.label(first), universe.label(second)));
  }
  const auto lo = std::min(first, second);
  const auto hi = std::max(first, second);
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const auto label = data.labels()[r];
    if (label == lo || label == hi) {
      rows.push_back(r);
    }
  }
  if (rows.empty()) {
    throw DatasetError(fmt::format("no rows for pair ('{}', '{}')", universe.label(lo), universe.label(hi)));
  }
  DatasetParts out = data.select_rows(rows).parts();
  out.universe = LabelUniverse({universe.label(lo), universe.label(hi)});
  for (auto& label : out.labels) {
    label = label == lo ? 0 : 1;
  }
  return Dataset(std::move(out));
}

Dataset restrict(const Dataset& data, std::string_view first, std::string_view second) {
  return restrict(data, data.universe().require_index(first), data.universe().require_index(second));
}

Dataset drop_labels(const Dataset& data, std::span<const std::string> labels) {
  if (labels.empty() || !data.has_labels()) {
    return data;
  }
  const auto& universe = data.universe();
  std::vector<std::string> kept_labels;
  std::vector<std::size_t> remap(universe.size(), universe.size());
  for (std::size_t i = 0; i < universe.size(); ++i) {
    if (std::find(labels.begin(), labels.end(), universe.label(i)) == labels.end()) {
      remap[i] = kept_labels.size();
      kept_labels.push_back(universe.label(i));
    }
  }
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < data.rows(); ++r) {
    if (remap[data.labels()[r]] < universe.size()) {
      rows.push_back(r);
    }
  }
  DatasetParts out = data.select_rows(rows).parts();
  out.universe = LabelUniverse(std::move(kept_labels));
  for (auto& label : out.labels) {
    label = remap[label];
  }
  return Dataset(std::move(out));
}

namespace {

std::vector<std::vector<std::string>> deal_speakers(const Dataset& data, std::size_t groups, std::uint64_t seed) {
  const auto speakers = data.distinct_speakers();
  std::vector<std::string> males;
  std::vector<std::string> females;
  std::vector<std::string> unknown;
  for (const auto& speaker : speakers) {
    const auto it = data.speaker_sex().find(speaker);
    const Sex sex = it == data.speaker_sex().end() ? Sex::unknown : it->second;
    (sex == Sex::male ? males : sex == Sex::female ? females : unknown).push_back(speaker);
  }
  Rng rng(seed);
  rng.shuffle(std::span(males));
  rng.shuffle(std::span(females));
  rng.shuffle(std::span(unknown));

  std::vector<std::vector<std::string>> out(groups);
  std::size_t slot = 0;
  for (const auto* list : {&males, &females, &unknown}) {
    for (const auto& speaker : *list) {
      out[slot++ % groups].push_back(speaker);
    }
  }
  return out;
}

}  // namespace

SpeakerFoldPlan make_speaker_folds(const Dataset& data, std::size_t n_folds, std::uint64_t seed) {
  if (!data.has_speakers()) {
    throw DatasetError("speaker folds need speaker ids (load a manifest first)");
  }
  if (n_folds == 0) {
    throw DatasetError("number of folds must be at least 1");
  }
  const auto speakers = data.distinct_speakers();
  const std::size_t groups = n_folds == 1 ? std::min<std::size_t>(5, speakers.size()) : n_folds;
  if (speakers.size() < std::max<std::size_t>(groups, 2)) {
    throw DatasetError(fmt::format("{} speakers cannot fill {} speaker-independent folds", speakers.size(),
                                   std::max<std::size_t>(n_folds, 2)));
  }
  auto dealt = deal_speakers(data, groups, seed);
  SpeakerFoldPlan plan;
  for (std::size_t k = 0; k < n_folds; ++k) {
    Fold fold;
    fold.test_speakers = dealt[k];
    std::sort(fold.test_speakers.begin(), fold.test_speakers.end());
    for (const auto& speaker : speakers) {
      if (!std::binary_search(fold.test_speakers.begin(), fold.test_speakers.end(), speaker)) {
        fold.train_speakers.push_back(speaker);
      }
    }
    plan.folds.push_back(std::move(fold));
  }
  return plan;
}

FoldData split_fold(const Dataset& data, const Fold& fold) {
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const auto& speaker = data.speakers()[r];
    if (std::binary_search(fold.test_speakers.begin(), fold.test_speakers.end(), speaker)) {
      test_rows.push_back(r);
    } else if (std::binary_search(fold.train_speakers.begin(), fold.train_speakers.end(), speaker)) {
      train_rows.push_back(r);
    }
  }
  if (train_rows.empty() || test_rows.empty()) {
    throw DatasetError("fold leaves the training or the test partition empty");
  }
  return {data.select_rows(train_rows), data.select_rows(test_rows)};
}

}  // namespace pairvote
