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

#include "pairvote/cli.hpp"
#include "pairvote/dataset_io.hpp"
#include "pairvote/random.hpp"

#include <doctest.h>
#include <fmt/core.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

namespace pairvote {
namespace {

namespace fs = std::filesystem;

struct Run {
  int status = 0;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "pairvote");
  std::vector<const char*> argv;
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }
  std::ostringstream out;
  std::ostringstream err;
  Run run;
  run.status = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  run.out = out.str();
  run.err = err.str();
  return run;
}

const std::vector<std::string> kBudget{"--genome-size", "2", "--population", "6", "--generations", "3", "--stall", "3"};

std::vector<std::string> with_budget(std::vector<std::string> args) {
  args.insert(args.end(), kBudget.begin(), kBudget.end());
  return args;
}

class Workspace {
 public:
  Workspace() : dir_(fs::temp_directory_path() / fmt::format("pairvote_cli_{}", to_hex(fnv1a(fmt::format("{}", ::getpid()))))) {
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Workspace() { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

 private:
  fs::path dir_;
};

TEST_CASE("usage and argument errors") {
  const auto none = cli({});
  CHECK(none.status == 2);
  CHECK(none.err.find("Usage") != std::string::npos);
  CHECK(cli({"--help"}).status == 0);
  CHECK(cli({"synth", "--bogus"}).status != 0);
  const auto missing = cli({"compare"});
  CHECK(missing.status != 0);
  CHECK(missing.err.find("--features") != std::string::npos);
}

TEST_CASE("theorem verification") {
  const auto run = cli({"verify-theorem", "--m", "7", "--mode", "exhaustive"});
  CHECK(run.status == 0);
  CHECK(run.out.find("229376 cases, 0 failures") != std::string::npos);
  CHECK(cli({"verify-theorem", "--m", "9", "--mode", "sampled", "--trials", "1000"}).status == 0);
  CHECK(cli({"verify-theorem", "--m", "6", "--membership"}).out.find("32768 cases") != std::string::npos);
  const auto bad = cli({"verify-theorem", "--m", "9", "--mode", "exhaustive"});
  CHECK(bad.status == 1);
  CHECK(bad.err.find("pairvote:") == 0);
}

TEST_CASE("module errors name the module") {
  Workspace ws;
  write_text_file(ws.path("bad.arff"), "@relation r\n@attribute a numeric\n@data\n1\n1,2\n");
  const auto run = cli({"ingest", "--features", ws.path("bad.arff"), "--out", ws.path("x.csv")});
  CHECK(run.status == 1);
  CHECK(run.err.find("dataset:") == 0);
  CHECK(run.err.find("bad.arff:5") != std::string::npos);
}

TEST_CASE("synth, select, train and evaluate an ensemble") {
  Workspace ws;
  REQUIRE(cli({"--seed", "3", "synth", "--classes", "3", "--per-class", "30", "--noise-dims", "3",
               "--informative-per-pair", "1", "--out", ws.path("synth.csv"), "--manifest-out", ws.path("man.csv")})
              .status == 0);
  const auto ingest = cli({"ingest", "--features", ws.path("synth.csv"), "--manifest", ws.path("man.csv"), "--out",
                           ws.path("bound.csv")});
  REQUIRE(ingest.status == 0);
  CHECK(read_text_file(ws.path("bound.csv")) == read_text_file(ws.path("synth.csv")));

  const auto select = cli(with_budget({"--seed", "3", "select", "--features", ws.path("bound.csv"), "--out",
                                       ws.path("genomes")}));
  REQUIRE(select.status == 0);
  CHECK(select.err.find("master seed 3") != std::string::npos);
  CHECK(fs::exists(ws.path("genomes/genome_global.json")));
  const auto record = nlohmann::json::parse(read_text_file(ws.path("genomes/genome_c0_c2.json")));
  CHECK(record.at("provenance") == "c0|c2");
  CHECK(record.at("indices").size() == 2);

  REQUIRE(cli({"train", "--features", ws.path("bound.csv"), "--genomes", ws.path("genomes"), "--out",
               ws.path("ensemble")})
              .status == 0);
  const auto evaluate = cli({"evaluate", "--features", ws.path("bound.csv"), "--ensemble", ws.path("ensemble"),
                             "--format", "csv", "--out", ws.path("eval.csv")});
  REQUIRE(evaluate.status == 0);
  CHECK(read_text_file(ws.path("eval.csv")).find("bi-voting/ga-selection/lr,mean_accuracy") != std::string::npos);

  REQUIRE(cli({"train", "--features", ws.path("bound.csv"), "--path", "nn-transform", "--hidden", "3", "--out",
               ws.path("nn")})
              .status == 0);
  CHECK(cli({"evaluate", "--features", ws.path("bound.csv"), "--ensemble", ws.path("nn")}).status == 0);
}

TEST_CASE("compare writes identical reports for any job count") {
  Workspace ws;
  REQUIRE(cli({"--seed", "4", "synth", "--classes", "3", "--per-class", "20", "--noise-dims", "3",
               "--informative-per-pair", "1", "--out", ws.path("d.csv")})
              .status == 0);
  const auto one = cli(with_budget({"--seed", "8", "--jobs", "1", "compare", "--features", ws.path("d.csv"),
                                    "--out-dir", ws.path("a")}));
  const auto three = cli(with_budget({"--seed", "8", "--jobs", "3", "compare", "--features", ws.path("d.csv"),
                                      "--out-dir", ws.path("b")}));
  REQUIRE(one.status == 0);
  REQUIRE(three.status == 0);
  for (const auto* name : {"report.txt", "report.csv", "report.json"}) {
    CHECK(read_text_file(ws.path(std::string("a/") + name)) == read_text_file(ws.path(std::string("b/") + name)));
  }
  CHECK(one.out.find("Bi-classification and voting") != std::string::npos);
  CHECK(one.out.find("SVM") != std::string::npos);

  const auto overlap = cli({"overlap-report", "--report", ws.path("a/report.json")});
  REQUIRE(overlap.status == 0);
  CHECK(overlap.out.find("classifier,pair,fold,count") == 0);
  CHECK(overlap.out.find("lr,c0-c1,4,") != std::string::npos);
}

TEST_CASE("config file and environment override") {
  Workspace ws;
  REQUIRE(cli({"synth", "--classes", "3", "--per-class", "20", "--noise-dims", "2", "--informative-per-pair", "1",
               "--out", ws.path("d.csv")})
              .status == 0);
  write_text_file(ws.path("config.json"), R"({"method": "multiclass", "classifier": "svm", "n_folds": 2,
    "ga": {"genome_size": 2, "population_size": 4, "max_generations": 2}})");
  ::setenv("PAIRVOTE_CONFIG", ws.path("config.json").c_str(), 1);
  const auto run = cli({"evaluate", "--features", ws.path("d.csv"), "--format", "json"});
  ::unsetenv("PAIRVOTE_CONFIG");
  REQUIRE(run.status == 0);
  const auto doc = nlohmann::json::parse(run.out);
  CHECK(doc.at("n_folds") == 2);
  CHECK(doc.at("results")[0].at("method") == "multiclass");
  CHECK(doc.at("results")[0].at("classifier") == "svm");
}

}  // namespace
}  // namespace pairvote
