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

#ifndef PAIRVOTE_DATASET_IO_HPP_
#define PAIRVOTE_DATASET_IO_HPP_

#include "pairvote/dataset.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pairvote {

/// RFC-4180 style CSV: comma separated, double-quoted fields with "" escapes,
/// quoted fields may span lines. Blank lines are skipped. Each record keeps the
/// 1-based line number it started on.
struct CsvRecord {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

std::vector<CsvRecord> parse_csv(std::string_view text, const std::string& source = "<csv>");
std::string csv_escape(std::string_view field);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view contents);

/// Parses the ARFF subset written by openSMILE: @relation, numeric/real/integer
/// attributes, at most one string attribute (utterance id) and an optional
/// nominal attribute which becomes the label. '%' starts a comment. A '?' class
/// value leaves the dataset unlabelled; a '?' numeric value is rejected.
/// With `fixed_universe` the class values are mapped onto it (unknown values are
/// an error); otherwise the universe is the declared nominal order restricted to
/// values that occur.
Dataset parse_arff(std::string_view text, const std::string& source = "<arff>",
                   const std::optional<LabelUniverse>& fixed_universe = {});
Dataset parse_arff_file(const std::filesystem::path& path, const std::optional<LabelUniverse>& fixed_universe = {});

/// CSV with a header row. Columns named utterance_id (or name), speaker_id and
/// label are metadata; every other column must be numeric.
Dataset parse_feature_csv(std::string_view text, const std::string& source = "<csv>",
                          const std::optional<LabelUniverse>& fixed_universe = {});

/// Dispatches on extension: .arff is ARFF, anything else is CSV.
Dataset load_features(const std::filesystem::path& path, const std::optional<LabelUniverse>& fixed_universe = {});

/// Binds speaker ids and labels from a manifest with header
/// utterance_id,speaker_id,label[,sex]. Every dataset row must appear exactly
/// once. Without `fixed_universe` the label universe is built in order of first
/// appearance in the manifest.
Dataset parse_manifest(std::string_view text, const Dataset& data, const std::optional<LabelUniverse>& fixed_universe = {},
                       const std::string& source = "<manifest>");
Dataset parse_manifest_file(const std::filesystem::path& path, const Dataset& data,
                            const std::optional<LabelUniverse>& fixed_universe = {});

/// Feature CSV with metadata columns first; values use 17 significant digits
/// so load_features(write) reproduces every feature bit for bit.
std::string format_dataset_csv(const Dataset& data);
void write_dataset_csv(const Dataset& data, const std::filesystem::path& path);
/// Manifest (utterance_id,speaker_id,label,sex) for a labelled dataset with speakers.
std::string format_manifest_csv(const Dataset& data);

/// Metadata decoded from an EmoDB file name such as "03a01Wa": speaker "03",
/// text "a01", emotion code 'W' (anger), version "a".
struct EmodbName {
  std::string speaker;
  std::string text;
  std::string emotion;
  Sex sex = Sex::unknown;
};

/// Decodes an EmoDB utterance name (directory and extension are ignored).
/// Returns nullopt when the name does not follow the convention.
std::optional<EmodbName> parse_emodb_name(std::string_view name);

/// The seven EmoDB categories in the order Neutral, Anger, Boredom, Happiness,
/// Sadness, Disgust, Fear.
LabelUniverse emodb_universe();

/// Opt-in alternative to a manifest: derives speakers, labels and speaker sex
/// from EmoDB-style utterance ids.
Dataset annotate_emodb(const Dataset& data);

}  // namespace pairvote

#endif  // PAIRVOTE_DATASET_IO_HPP_
