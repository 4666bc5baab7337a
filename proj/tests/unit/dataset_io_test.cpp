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

#include "pairvote/dataset_io.hpp"
#include "pairvote/error.hpp"
#include "support/fixtures.hpp"

#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <set>

namespace pairvote {
namespace {

constexpr const char* kSmallArff = R"(% produced by hand
@relation tiny

@attribute name string
@attribute pitch_mean numeric
@attribute 'energy sd' REAL
@attribute zcr numeric
@attribute class {neutral,anger,fear}

@data
'03a01Wa',1.5,-2,3e-1,anger
03a01Nc,4,5.25,6,neutral
)";

TEST_CASE("hand-written ARFF keeps every value in row order") {
  const auto data = parse_arff(kSmallArff, "tiny.arff");
  REQUIRE(data.rows() == 2);
  REQUIRE(data.dims() == 3);
  CHECK(data.features()(0, 0) == 1.5);
  CHECK(data.features()(0, 1) == -2.0);
  CHECK(data.features()(0, 2) == 0.3);
  CHECK(data.features()(1, 0) == 4.0);
  CHECK(data.features()(1, 1) == 5.25);
  CHECK(data.features()(1, 2) == 6.0);
  CHECK(data.utterance_ids() == std::vector<std::string>{"03a01Wa", "03a01Nc"});
  CHECK(data.feature_names() == std::vector<std::string>{"pitch_mean", "energy sd", "zcr"});
  CHECK(data.universe().labels() == std::vector<std::string>{"neutral", "anger"});
  CHECK(data.label_of(0) == "anger");
}

TEST_CASE("ARFF with no data rows is rejected") {
  CHECK_THROWS_AS(parse_arff("@relation r\n@attribute a numeric\n@data\n% nothing\n"), DatasetError);
}

TEST_CASE("ARFF errors carry the line number") {
  try {
    parse_arff("@relation r\n@attribute a numeric\n@attribute b blob\n@data\n1,2\n", "bad.arff");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  try {
    parse_arff("@relation r\n@attribute a numeric\n@attribute b numeric\n@data\n1,2\n3\n", "bad.arff");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 6);
  }
  CHECK_THROWS_AS(parse_arff("@relation r\n@attribute a numeric\n@data\nnan\n"), DatasetError);
  CHECK_THROWS_AS(parse_arff("@relation r\n@attribute a numeric\n@data\ninf\n"), DatasetError);
  CHECK_THROWS_AS(parse_arff("@relation r\n@attribute a numeric\n@data\n?\n"), DatasetError);
}

TEST_CASE("ARFF with 988 numeric attributes and 535 rows") {
  std::string text = "@relation emo\n@attribute name string\n";
  for (int a = 0; a < 988; ++a) {
    text += fmt::format("@attribute f{} numeric\n", a);
  }
  text += "@attribute emotion {W,L,E,A,F,T,N}\n@data\n";
  const char codes[] = "WLEAFTN";
  for (int r = 0; r < 535; ++r) {
    text += fmt::format("u{}", r);
    for (int a = 0; a < 988; ++a) {
      text += fmt::format(",{}", (r * 31 + a) % 97 / 7.0);
    }
    text += fmt::format(",{}\n", codes[r % 7]);
  }
  const auto data = parse_arff(text);
  CHECK(data.dims() == 988);
  CHECK(data.rows() == 535);
  CHECK(data.universe().size() == 7);
}

TEST_CASE("fixed universe maps class values and rejects unknown ones") {
  const LabelUniverse fixed({"fear", "anger", "neutral"});
  const auto data = parse_arff(kSmallArff, "tiny.arff", fixed);
  CHECK(data.universe() == fixed);
  CHECK(data.labels()[0] == 1);
  CHECK_THROWS_AS(parse_arff(kSmallArff, "tiny.arff", LabelUniverse({"fear", "neutral"})), DatasetError);
}

TEST_CASE("manifest binds speakers and labels") {
  const auto features = parse_arff("@relation r\n@attribute id string\n@attribute a numeric\n@data\nx,1\ny,2\nz,3\n");
  const auto bound = parse_manifest("utterance_id,speaker_id,label,sex\nz,s2,b,f\nx,s1,a,m\ny,s1,b,m\n", features);
  CHECK(bound.speakers() == std::vector<std::string>{"s1", "s1", "s2"});
  CHECK(bound.universe().labels() == std::vector<std::string>{"b", "a"});
  CHECK(bound.label_of(0) == "a");
  CHECK(bound.speaker_sex().at("s2") == Sex::female);

  CHECK_THROWS_AS(parse_manifest("utterance_id,speaker_id,label\nx,s1,a\ny,s1,b\n", features), DatasetError);
  try {
    parse_manifest("utterance_id,speaker_id,label\nx,s1,a\nx,s1,b\nq,s2,a\n", features);
    FAIL("expected an error");
  } catch (const DatasetError& e) {
    const std::string what = e.what();
    CHECK(what.find("x") != std::string::npos);
    CHECK(what.find("q") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_manifest("utterance_id,label\nx,a\ny,b\nz,a\n", features), DatasetError);
  CHECK_THROWS_AS(parse_manifest("utterance_id,speaker_id,label\nx,s1,a\ny,s1,b\nz,s2,c\n", features,
                                 LabelUniverse({"a", "b"})),
                  DatasetError);
}

TEST_CASE("manifest over 535 rows with ten speakers") {
  std::string features = "utterance_id,f0\n";
  std::string manifest = "utterance_id,speaker_id,label\n";
  for (int r = 0; r < 535; ++r) {
    features += fmt::format("u{},{}\n", r, r);
    manifest += fmt::format("u{},{:02d},{}\n", r, 3 + r % 10, r % 2 == 0 ? "anger" : "neutral");
  }
  const auto bound = parse_manifest(manifest, parse_feature_csv(features));
  CHECK(bound.distinct_speakers().size() == 10);
}

TEST_CASE("EmoDB file names decode speaker, emotion and sex") {
  const auto name = parse_emodb_name("03a01Wa");
  REQUIRE(name.has_value());
  CHECK(name->speaker == "03");
  CHECK(name->emotion == "anger");
  CHECK(name->sex == Sex::male);
  CHECK(parse_emodb_name("wav/16b10Lb.wav")->emotion == "boredom");
  CHECK(parse_emodb_name("16b10Lb")->sex == Sex::female);
  CHECK(parse_emodb_name("08a02Ab")->emotion == "fear");
  CHECK(parse_emodb_name("08a02Fb")->emotion == "happiness");
  CHECK(parse_emodb_name("08a02Tb")->emotion == "sadness");
  CHECK(parse_emodb_name("08a02Eb")->emotion == "disgust");
  CHECK(parse_emodb_name("08a02Nb")->emotion == "neutral");
  CHECK_FALSE(parse_emodb_name("hello").has_value());
  CHECK_FALSE(parse_emodb_name("03a01Xa").has_value());
  CHECK(emodb_universe().labels() ==
        std::vector<std::string>{"neutral", "anger", "boredom", "happiness", "sadness", "disgust", "fear"});
}

TEST_CASE("dataset CSV round-trips every feature bit") {
  Rng rng(9);
  std::vector<std::vector<double>> rows;
  std::vector<std::string> labels;
  std::vector<std::string> speakers;
  for (int r = 0; r < 25; ++r) {
    rows.push_back({rng.normal() * 1e-7, rng.normal() * 1e9, 1.0 / 3.0 + r, -0.0});
    labels.emplace_back(r % 3 == 0 ? "a,b" : "c\"d");
    speakers.push_back(fmt::format("sp{}", r % 5));
  }
  const auto data = testing::make_dataset(rows, labels, speakers, {}, {{"sp0", Sex::female}});
  const auto path = std::filesystem::temp_directory_path() / "pairvote_io_test" / "data.csv";
  write_dataset_csv(data, path);
  const auto loaded = load_features(path, data.universe());
  REQUIRE(loaded.rows() == data.rows());
  CHECK(std::memcmp(loaded.features().data(), data.features().data(),
                    sizeof(double) * static_cast<std::size_t>(data.features().size())) == 0);
  CHECK(loaded.labels() == data.labels());
  CHECK(loaded.speakers() == data.speakers());
  CHECK(loaded.utterance_ids() == data.utterance_ids());
  CHECK(loaded.speaker_sex().at("sp0") == Sex::female);
  std::filesystem::remove_all(path.parent_path());
}

TEST_CASE("CSV parser follows quoting rules") {
  const auto records = parse_csv("a,\"b,c\",\"d\"\"e\"\n\"multi\nline\",x,y\n");
  REQUIRE(records.size() == 2);
  CHECK(records[0].fields == std::vector<std::string>{"a", "b,c", "d\"e"});
  CHECK(records[1].fields[0] == "multi\nline");
  CHECK(records[1].line == 2);
  CHECK_THROWS_AS(parse_csv("\"open\n"), ParseError);
}

TEST_CASE("unwritable path is an error") {
  CHECK_THROWS_AS(write_text_file("/proc/pairvote/none.txt", "x"), Error);
}

}  // namespace
}  // namespace pairvote
