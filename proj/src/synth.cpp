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

#include "pairvote/synth.hpp"

#include "pairvote/error.hpp"
#include "pairvote/random.hpp"

#include <fmt/core.h>

#include <set>

namespace pairvote {

namespace {

std::map<PairKey, std::vector<std::size_t>> informative_layout(const SynthSpec& spec) {
  if (!spec.informative.empty()) {
    return spec.informative;
  }
  std::map<PairKey, std::vector<std::size_t>> layout;
  std::size_t next = 0;
  for (const auto& key : all_pairs(spec.classes)) {
    auto& dims = layout[key];
    for (std::size_t k = 0; k < spec.informative_per_pair; ++k) {
      dims.push_back(next++);
    }
  }
  return layout;
}

}  // namespace

std::size_t synthetic_dims(const SynthSpec& spec) {
  std::size_t total = spec.noise_dims;
  for (const auto& [key, dims] : informative_layout(spec)) {
    total += dims.size();
  }
  return total;
}

Dataset make_synthetic(const SynthSpec& spec) {
  if (spec.classes < 2) {
    throw ExperimentError("synthetic data needs at least two classes");
  }
  if (spec.per_class == 0 || spec.speakers == 0) {
    throw ExperimentError("synthetic data needs samples and speakers");
  }
  if (!(spec.separation >= 0.0)) {
    throw ExperimentError("separation must be non-negative");
  }
  const auto layout = informative_layout(spec);
  const auto dims = synthetic_dims(spec);
  if (dims == 0) {
    throw ExperimentError("synthetic data needs at least one column");
  }
  std::set<std::size_t> used;
  for (const auto& [key, columns] : layout) {
    if (key.second() >= spec.classes) {
      throw ExperimentError("informative pair refers to a class outside the spec");
    }
    for (const auto c : columns) {
      if (c >= dims) {
        throw ExperimentError(fmt::format("informative column {} outside the {} columns", c, dims));
      }
      if (!used.insert(c).second) {
        throw ExperimentError(fmt::format("informative column {} is shared by more than one pair", c));
      }
    }
  }

  // class means: zero except +/- separation/2 on each pair's columns
  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(spec.classes), static_cast<Eigen::Index>(dims));
  for (const auto& [key, columns] : layout) {
    for (const auto c : columns) {
      means(static_cast<Eigen::Index>(key.first()), static_cast<Eigen::Index>(c)) = 0.5 * spec.separation;
      means(static_cast<Eigen::Index>(key.second()), static_cast<Eigen::Index>(c)) = -0.5 * spec.separation;
    }
  }

  DatasetParts parts;
  const auto n = spec.classes * spec.per_class;
  parts.features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dims));
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < spec.classes; ++k) {
    labels.push_back(fmt::format("c{}", k));
  }
  parts.universe = LabelUniverse(labels);
  for (std::size_t s = 0; s < spec.speakers; ++s) {
    parts.speaker_sex[fmt::format("s{:02d}", s)] = s % 2 == 0 ? Sex::male : Sex::female;
  }
  Rng rng(derive_seed(spec.seed, "synthetic"));
  std::size_t row = 0;
  for (std::size_t k = 0; k < spec.classes; ++k) {
    for (std::size_t i = 0; i < spec.per_class; ++i, ++row) {
      for (std::size_t c = 0; c < dims; ++c) {
        parts.features(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c)) =
            means(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(c)) + rng.normal();
      }
      const auto speaker = fmt::format("s{:02d}", i % spec.speakers);
      parts.utterance_ids.push_back(fmt::format("{}_c{}_{:04d}", speaker, k, i));
      parts.speakers.push_back(speaker);
      parts.labels.push_back(k);
    }
  }
  return Dataset(std::move(parts));
}

}  // namespace pairvote
