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

#ifndef PAIRVOTE_TESTS_SUPPORT_FIXTURES_HPP_
#define PAIRVOTE_TESTS_SUPPORT_FIXTURES_HPP_

#include "pairvote/dataset.hpp"
#include "pairvote/random.hpp"

#include <fmt/core.h>

#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace pairvote::testing {

/// Builds a dataset from rows, label names and speakers. Label universe is
/// `universe` when given, otherwise first appearance order.
inline Dataset make_dataset(const std::vector<std::vector<double>>& rows, const std::vector<std::string>& labels,
                            std::vector<std::string> speakers = {}, std::vector<std::string> universe = {},
                            std::map<std::string, Sex> sex = {}) {
  DatasetParts parts;
  const auto n = rows.size();
  const auto d = rows.empty() ? 0 : rows.front().size();
  parts.features.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      parts.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
    parts.utterance_ids.push_back(fmt::format("u{:04d}", r));
  }
  if (universe.empty()) {
    for (const auto& label : labels) {
      if (std::find(universe.begin(), universe.end(), label) == universe.end()) {
        universe.push_back(label);
      }
    }
  }
  if (!labels.empty()) {
    parts.universe = LabelUniverse(universe);
    for (const auto& label : labels) {
      parts.labels.push_back(parts.universe.require_index(label));
    }
  }
  parts.speakers = std::move(speakers);
  parts.speaker_sex = std::move(sex);
  return Dataset(std::move(parts));
}

/// Two-class problem on `dims` columns that is separable only in columns 0
/// and 1: both carry a shared N(0, 9) component z, and the label is the sign
/// of x0 - x1, kept at least `gap` away from zero. Either column alone is
/// nearly uninformative. The other columns are standard noise.
inline Dataset planted_pair(std::size_t rows, std::size_t dims, std::uint64_t seed, double gap = 0.5) {
  Rng rng(seed);
  std::vector<std::vector<double>> x;
  std::vector<std::string> labels;
  std::vector<std::string> speakers;
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<double> row(dims);
    for (auto& v : row) {
      v = rng.normal();
    }
    const bool positive = r % 2 == 0;
    const double d = (positive ? 1.0 : -1.0) * (std::abs(row[0]) + gap);
    const double z = 3.0 * row[1];
    row[0] = z + d / 2.0;
    row[1] = z - d / 2.0;
    x.push_back(std::move(row));
    labels.emplace_back(positive ? "pos" : "neg");
    speakers.push_back(fmt::format("s{}", r % 4));
  }
  return make_dataset(x, labels, speakers, {"neg", "pos"});
}

}  // namespace pairvote::testing

#endif  // PAIRVOTE_TESTS_SUPPORT_FIXTURES_HPP_
