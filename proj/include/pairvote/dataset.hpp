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

#ifndef PAIRVOTE_DATASET_HPP_
#define PAIRVOTE_DATASET_HPP_

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pairvote {

using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Ordered set of distinct class labels. The index of a label is its identity
/// everywhere else in the library (pair keys, vote counts, model class order).
class LabelUniverse {
 public:
  LabelUniverse() = default;
  explicit LabelUniverse(std::vector<std::string> labels);

  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  const std::string& label(std::size_t index) const { return labels_.at(index); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  std::optional<std::size_t> index_of(std::string_view label) const;
  /// Like index_of but throws DatasetError for unknown labels.
  std::size_t require_index(std::string_view label) const;

  friend bool operator==(const LabelUniverse&, const LabelUniverse&) = default;

 private:
  std::vector<std::string> labels_;
};

enum class Sex { unknown, male, female };

std::string_view to_string(Sex sex);
Sex parse_sex(std::string_view text);

/// Raw constituents of a Dataset. Optional columns are left empty.
struct DatasetParts {
  std::vector<std::string> utterance_ids;
  FeatureMatrix features;
  std::vector<std::string> feature_names;
  LabelUniverse universe;
  std::vector<std::size_t> labels;    // indices into universe, one per row
  std::vector<std::string> speakers;  // one per row
  std::map<std::string, Sex> speaker_sex;
};

/// Utterance-level feature table. Immutable once constructed; the constructor
/// enforces the row/column/label/speaker invariants and rejects non-finite values.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(DatasetParts parts);

  std::size_t rows() const noexcept { return static_cast<std::size_t>(parts_.features.rows()); }
  std::size_t dims() const noexcept { return static_cast<std::size_t>(parts_.features.cols()); }

  const FeatureMatrix& features() const noexcept { return parts_.features; }
  const std::vector<std::string>& utterance_ids() const noexcept { return parts_.utterance_ids; }
  const std::vector<std::string>& feature_names() const noexcept { return parts_.feature_names; }
  const LabelUniverse& universe() const noexcept { return parts_.universe; }
  const std::vector<std::size_t>& labels() const noexcept { return parts_.labels; }
  const std::vector<std::string>& speakers() const noexcept { return parts_.speakers; }
  const std::map<std::string, Sex>& speaker_sex() const noexcept { return parts_.speaker_sex; }

  bool has_labels() const noexcept { return !parts_.labels.empty(); }
  bool has_speakers() const noexcept { return !parts_.speakers.empty(); }

  const std::string& label_of(std::size_t row) const { return parts_.universe.label(parts_.labels.at(row)); }

  /// Sorted distinct speaker ids.
  std::vector<std::string> distinct_speakers() const;
  /// Number of rows per universe label.
  std::vector<std::size_t> class_counts() const;

  /// Subset of rows in the given order; universe and metadata are kept.
  Dataset select_rows(std::span<const std::size_t> rows) const;
  /// Same rows, features replaced (column count may change).
  Dataset with_features(FeatureMatrix features, std::vector<std::string> feature_names = {}) const;

  /// Content hash over features and labels; used to key memoized fitness.
  std::uint64_t fingerprint() const;

  const DatasetParts& parts() const noexcept { return parts_; }

 private:
  DatasetParts parts_;
};

/// Column-wise affine map fitted on training data: (x - mean) * inv_std.
/// Constant columns get inv_std = 0 and therefore map to 0.
struct Scaler {
  Eigen::VectorXd mean;
  Eigen::VectorXd inv_std;

  std::size_t dims() const noexcept { return static_cast<std::size_t>(mean.size()); }
  FeatureMatrix apply(const FeatureMatrix& features) const;
  Eigen::VectorXd apply(std::span<const double> row) const;
  Dataset apply(const Dataset& data) const;
};

Scaler fit_scaler(const Dataset& train);

struct Standardized {
  Dataset train;
  std::vector<Dataset> others;
  Scaler scaler;
};

/// Fits a Scaler on `train` (population standard deviation) and applies it to
/// `train` and every entry of `others`.
Standardized standardize(const Dataset& train, std::span<const Dataset> others = {});

/// Rows whose label is one of the two given labels. The result's universe is
/// exactly the pair, ordered by the labels' index in the source universe, so
/// restrict(d, a, b) and restrict(d, b, a) are identical.
Dataset restrict(const Dataset& data, std::string_view first, std::string_view second);
Dataset restrict(const Dataset& data, std::size_t first, std::size_t second);

/// Drops every row carrying one of the given labels and removes them from the universe.
Dataset drop_labels(const Dataset& data, std::span<const std::string> labels);

struct Fold {
  std::vector<std::string> train_speakers;  // sorted
  std::vector<std::string> test_speakers;   // sorted
};

struct SpeakerFoldPlan {
  std::vector<Fold> folds;
};

/// Speaker-independent fold assignment. Speakers are shuffled with `seed` and
/// dealt round-robin into `n_folds` test groups, males first and then females
/// when sex metadata is present, so 5 males and 5 females over 5 folds give
/// each test set one of each. n_folds == 1 yields a single hold-out fold: the
/// first test group of a min(5, speakers)-way deal.
SpeakerFoldPlan make_speaker_folds(const Dataset& data, std::size_t n_folds, std::uint64_t seed);

struct FoldData {
  Dataset train;
  Dataset test;
};

FoldData split_fold(const Dataset& data, const Fold& fold);

}  // namespace pairvote

#endif  // PAIRVOTE_DATASET_HPP_
