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
#include "pairvote/ensemble.hpp"
#include "pairvote/error.hpp"
#include "pairvote/experiment.hpp"
#include "pairvote/parallel.hpp"
#include "pairvote/random.hpp"
#include "pairvote/report.hpp"
#include "pairvote/synth.hpp"
#include "pairvote/voting.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>
#include <fmt/format.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pairvote {
namespace {

namespace fs = std::filesystem;

struct DataOptions {
  std::string features;
  std::string manifest;
  bool emodb_names = false;
  std::vector<std::string> labels;
};

struct ExperimentOverrides {
  std::string method;
  std::string path;
  std::string classifier;
  std::vector<std::string> classifiers;
  std::optional<std::size_t> folds;
  std::optional<std::size_t> genome_size;
  std::optional<std::size_t> population;
  std::optional<std::size_t> generations;
  std::optional<std::size_t> stall;
  std::optional<std::size_t> hidden;
};

struct Globals {
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::string config;
  bool verbose = false;
};

void add_data_options(CLI::App* cmd, DataOptions& data, bool required = true) {
  auto* features = cmd->add_option("--features", data.features, "Feature file (.arff or .csv)");
  if (required) {
    features->required();
  }
  cmd->add_option("--manifest", data.manifest, "Manifest CSV: utterance_id,speaker_id,label[,sex]");
  cmd->add_flag("--emodb-names", data.emodb_names, "Derive speaker and label from EmoDB utterance names");
  cmd->add_option("--labels", data.labels, "Label universe in order")->delimiter(',');
}

void add_experiment_options(CLI::App* cmd, ExperimentOverrides& o) {
  cmd->add_option("--method", o.method, "bi-voting | multiclass");
  cmd->add_option("--path", o.path, "ga-selection | nn-transform");
  cmd->add_option("--classifier", o.classifier, "lr | svm | nn");
  cmd->add_option("--classifiers", o.classifiers, "Comparison columns on the GA path")->delimiter(',');
  cmd->add_option("--folds", o.folds, "Speaker-independent folds");
  cmd->add_option("--genome-size", o.genome_size, "Features per selected subset");
  cmd->add_option("--population", o.population, "GA population size");
  cmd->add_option("--generations", o.generations, "GA generation limit");
  cmd->add_option("--stall", o.stall, "GA stall window");
  cmd->add_option("--hidden", o.hidden, "Hidden units of the transformation network");
}

std::optional<LabelUniverse> fixed_universe(const DataOptions& data) {
  if (data.labels.empty()) {
    return std::nullopt;
  }
  return LabelUniverse(data.labels);
}

Dataset load_dataset(const DataOptions& data) {
  const auto universe = fixed_universe(data);
  if (data.emodb_names && !data.manifest.empty()) {
    throw Error("cli", "--manifest and --emodb-names are mutually exclusive");
  }
  if (data.emodb_names) {
    auto annotated = annotate_emodb(load_features(data.features));
    if (universe) {
      DatasetParts parts = annotated.parts();
      for (auto& label : parts.labels) {
        label = universe->require_index(annotated.universe().label(label));
      }
      parts.universe = *universe;
      annotated = Dataset(std::move(parts));
    }
    return annotated;
  }
  if (!data.manifest.empty()) {
    return parse_manifest_file(data.manifest, load_features(data.features), universe);
  }
  return load_features(data.features, universe);
}

ExperimentConfig load_config(const Globals& globals, const ExperimentOverrides& o) {
  ExperimentConfig config;
  std::string path = globals.config;
  if (path.empty()) {
    if (const char* env = std::getenv("PAIRVOTE_CONFIG"); env != nullptr && *env != '\0') {
      path = env;
    }
  }
  if (!path.empty()) {
    try {
      config = experiment_config_from_json(nlohmann::json::parse(read_text_file(path)));
    } catch (const nlohmann::json::exception& e) {
      throw ExperimentError(fmt::format("cannot parse config {}: {}", path, e.what()));
    }
  }
  if (!o.method.empty()) {
    config.method = parse_method(o.method);
  }
  if (!o.path.empty()) {
    config.path = parse_subspace_path(o.path);
    if (config.path == SubspacePath::nn_transform && o.classifier.empty()) {
      config.classifier = ClassifierKind::nn;
    }
  }
  if (!o.classifier.empty()) {
    config.classifier = parse_classifier_kind(o.classifier);
  }
  if (!o.classifiers.empty()) {
    config.classifiers.clear();
    for (const auto& name : o.classifiers) {
      config.classifiers.push_back(parse_classifier_kind(name));
    }
  }
  if (o.folds) {
    config.n_folds = *o.folds;
  }
  if (o.genome_size) {
    config.ga.genome_size = *o.genome_size;
  }
  if (o.population) {
    config.ga.population_size = *o.population;
  }
  if (o.generations) {
    config.ga.max_generations = *o.generations;
  }
  if (o.stall) {
    config.ga.stall_window = *o.stall;
  }
  if (o.hidden) {
    config.nn_hidden = *o.hidden;
  }
  if (globals.seed) {
    config.master_seed = *globals.seed;
  }
  return config;
}

RunOptions run_options(const Globals& globals, std::ostream& err) {
  RunOptions options;
  options.jobs = globals.jobs;
  options.verbose = globals.verbose;
  options.log = [&err](const std::string& line) { err << line << '\n' << std::flush; };
  return options;
}

void log_run(std::ostream& err, const std::string& command, const ExperimentConfig& config) {
  err << fmt::format("{}: config {} master seed {}\n", command, config.fingerprint(), config.master_seed);
}

std::string file_label(const std::string& label) {
  std::string out;
  for (const char c : label) {
    out += std::isalnum(static_cast<unsigned char>(c)) != 0 ? c : '_';
  }
  return out;
}

std::string genome_file(const LabelUniverse& universe, const PairKey& key) {
  return fmt::format("genome_{}_{}.json", file_label(universe.label(key.first())), file_label(universe.label(key.second())));
}

/// Pair genomes from `dir` for every pair of the universe.
std::map<PairKey, SubspaceSpec> read_genomes(const fs::path& dir, const LabelUniverse& universe, std::size_t dims) {
  std::map<PairKey, SubspaceSpec> out;
  for (const auto& key : all_pairs(universe.size())) {
    const auto path = dir / genome_file(universe, key);
    GenomeRecord record;
    try {
      record = genome_record_from_json(nlohmann::json::parse(read_text_file(path)));
    } catch (const nlohmann::json::exception& e) {
      throw Error("cli", fmt::format("cannot parse {}: {}", path.string(), e.what()));
    }
    if (record.genome.feature_count() != dims) {
      throw Error("cli", fmt::format("{} selects from {} features, dataset has {}", path.string(),
                                     record.genome.feature_count(), dims));
    }
    out.emplace(key, record.genome);
  }
  return out;
}

void write_reports(const ExperimentReport& report, const std::string& out_dir, const std::string& out_file,
                   const std::string& format, std::ostream& out, std::ostream& err) {
  if (!out_dir.empty()) {
    for (const auto f : {ReportFormat::table, ReportFormat::csv, ReportFormat::json}) {
      const auto path = fs::path(out_dir) / fmt::format("report.{}", f == ReportFormat::table ? "txt" : to_string(f));
      emit_report(report, f, path);
      err << "wrote " << path.string() << '\n';
    }
  }
  const auto f = parse_report_format(format);
  if (!out_file.empty()) {
    emit_report(report, f, out_file);
    err << "wrote " << out_file << '\n';
  } else if (out_dir.empty() || f == ReportFormat::table) {
    out << format_report(report, f);
  }
}

int cmd_verify(std::size_t m, const std::string& mode_name, std::uint64_t trials, std::uint64_t seed, bool membership,
               std::ostream& out) {
  VerifyMode mode;
  if (mode_name == "exhaustive") {
    mode = VerifyMode::exhaustive;
  } else if (mode_name == "sampled") {
    mode = VerifyMode::sampled;
  } else {
    throw Error("cli", fmt::format("unknown verification mode '{}'", mode_name));
  }
  const auto report = membership ? verify_membership(m, mode, trials, seed) : verify_theorem(m, mode, trials, seed);
  out << fmt::format("{}, M = {}: {} cases, {} failures\n", membership ? "winner in max set" : "pair-sweeping label wins",
                     m, report.cases, report.failures);
  if (report.first_failure) {
    std::vector<std::string> verdicts;
    for (const auto& key : all_pairs(m)) {
      verdicts.push_back(fmt::format("{}-{}:{}", key.first(), key.second(), report.first_failure->at(key.first(), key.second())));
    }
    out << "first failure: " << fmt::format("{}", fmt::join(verdicts, " ")) << '\n';
  }
  return report.failures == 0 ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pairwise classification and voting for speech emotion recognition", "pairvote"};
  app.require_subcommand(0, 1);

  Globals globals;
  app.add_option("--seed", globals.seed, "Master seed");
  app.add_option("--jobs", globals.jobs, "Concurrent workers")->check(CLI::PositiveNumber);
  app.add_option("--config", globals.config, "Experiment config JSON (also PAIRVOTE_CONFIG)");
  app.add_flag("-v,--verbose", globals.verbose, "Per-generation progress");

  DataOptions data;
  ExperimentOverrides overrides;
  std::string out_path;
  std::string out_dir;
  std::string format = "table";

  auto* ingest = app.add_subcommand("ingest", "Bind features to speakers and labels; write a dataset CSV");
  add_data_options(ingest, data);
  std::string manifest_out;
  ingest->add_option("--out", out_path, "Dataset CSV")->required();
  ingest->add_option("--manifest-out", manifest_out, "Also write the bound manifest");

  auto* select = app.add_subcommand("select", "Select a feature subset per label pair and a global subset");
  add_data_options(select, data);
  add_experiment_options(select, overrides);
  select->add_option("--out", out_dir, "Genome directory")->required();

  auto* train = app.add_subcommand("train", "Train a pairwise ensemble on all rows");
  add_data_options(train, data);
  add_experiment_options(train, overrides);
  std::string genomes_dir;
  train->add_option("--genomes", genomes_dir, "Genome directory from select (GA path)");
  train->add_option("--out", out_dir, "Ensemble directory")->required();

  auto* evaluate = app.add_subcommand("evaluate", "Score a saved ensemble, or cross-validate one method");
  add_data_options(evaluate, data);
  add_experiment_options(evaluate, overrides);
  std::string ensemble_dir;
  evaluate->add_option("--ensemble", ensemble_dir, "Ensemble directory from train");
  evaluate->add_option("--out", out_path, "Report file");
  evaluate->add_option("--out-dir", out_dir, "Write report.txt, report.csv and report.json");
  evaluate->add_option("--format", format, "table | csv | json");

  auto* compare = app.add_subcommand("compare", "Cross-validate both methods and test the difference");
  add_data_options(compare, data);
  add_experiment_options(compare, overrides);
  compare->add_option("--out", out_path, "Report file");
  compare->add_option("--out-dir", out_dir, "Write report.txt, report.csv and report.json");
  compare->add_option("--format", format, "table | csv | json");

  auto* verify = app.add_subcommand("verify-theorem", "Check that a label winning all its pairs is elected");
  std::size_t verify_m = 7;
  std::string verify_mode = "exhaustive";
  std::uint64_t verify_trials = 100000;
  bool membership = false;
  verify->add_option("--m", verify_m, "Number of labels")->check(CLI::Range(2, 64));
  verify->add_option("--mode", verify_mode, "exhaustive | sampled");
  verify->add_option("--trials", verify_trials, "Assignments per target in sampled mode");
  verify->add_flag("--membership", membership, "Check instead that the winner is in the max set");

  auto* synth = app.add_subcommand("synth", "Write a synthetic benchmark with pair-specific subspaces");
  SynthSpec spec;
  synth->add_option("--classes", spec.classes, "Labels");
  synth->add_option("--per-class", spec.per_class, "Rows per label");
  synth->add_option("--noise-dims", spec.noise_dims, "Uninformative columns");
  synth->add_option("--informative-per-pair", spec.informative_per_pair, "Informative columns per pair");
  synth->add_option("--separation", spec.separation, "Class separation in noise standard deviations");
  synth->add_option("--speakers", spec.speakers, "Speakers");
  synth->add_option("--out", out_path, "Dataset CSV")->required();
  synth->add_option("--manifest-out", manifest_out, "Manifest CSV");

  auto* overlap = app.add_subcommand("overlap-report", "Common features between pair subsets and the global subset");
  std::string report_json;
  add_data_options(overlap, data, false);
  add_experiment_options(overlap, overrides);
  overlap->add_option("--report", report_json, "JSON report written by compare");
  overlap->add_option("--out", out_path, "CSV of classifier, pair, fold, count");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "cli: " << e.what() << "\n\n" << app.help();
    return 2;
  }
  if (app.get_subcommands().empty()) {
    err << app.help();
    return 2;
  }

  const auto started = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  };
  try {
    if (*verify) {
      return cmd_verify(verify_m, verify_mode, verify_trials, globals.seed.value_or(0), membership, out);
    }
    if (*synth) {
      spec.seed = derive_seed(globals.seed.value_or(0), "synth");
      const auto dataset = make_synthetic(spec);
      write_dataset_csv(dataset, out_path);
      if (!manifest_out.empty()) {
        write_text_file(manifest_out, format_manifest_csv(dataset));
      }
      err << fmt::format("synth: master seed {} fingerprint {} rows {} dims {}\n", globals.seed.value_or(0),
                         to_hex(dataset.fingerprint()), dataset.rows(), dataset.dims());
      return 0;
    }
    if (*ingest) {
      const auto dataset = load_dataset(data);
      write_dataset_csv(dataset, out_path);
      if (!manifest_out.empty()) {
        write_text_file(manifest_out, format_manifest_csv(dataset));
      }
      err << fmt::format("ingest: fingerprint {} rows {} dims {} labels {}\n", to_hex(dataset.fingerprint()), dataset.rows(),
                         dataset.dims(), fmt::join(dataset.universe().labels(), ","));
      return 0;
    }

    const auto config = load_config(globals, overrides);
    config.validate();
    const auto options = run_options(globals, err);

    if (*overlap && !report_json.empty()) {
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(read_text_file(report_json));
      } catch (const nlohmann::json::exception& e) {
        throw ExperimentError(fmt::format("cannot parse {}: {}", report_json, e.what()));
      }
      std::string csv = "classifier,pair,fold,count\n";
      for (const auto& series : doc.at("overlap")) {
        for (const auto& pair : series.at("pairs")) {
          const auto& counts = pair.at("counts");
          for (std::size_t k = 0; k < counts.size(); ++k) {
            csv += fmt::format("{},{},{},{}\n", series.at("classifier").get<std::string>(),
                               pair.at("pair").get<std::string>(), k, counts[k].get<std::size_t>());
          }
        }
      }
      if (out_path.empty()) {
        out << csv;
      } else {
        write_text_file(out_path, csv);
      }
      return 0;
    }

    if (data.features.empty()) {
      throw Error("cli", "--features is required");
    }
    auto dataset = drop_labels(load_dataset(data), config.exclude_from_training);
    log_run(err, app.get_subcommands().front()->get_name(), config);
    err << fmt::format("dataset: fingerprint {} rows {} dims {} labels {}\n", to_hex(dataset.fingerprint()), dataset.rows(),
                       dataset.dims(), fmt::join(dataset.universe().labels(), ","));

    if (*select) {
      if (config.classifier == ClassifierKind::nn) {
        throw Error("cli", "select runs the GA path; choose lr or svm");
      }
      const auto& universe = dataset.universe();
      const auto pairs = all_pairs(universe.size());
      std::vector<std::optional<GenomeRecord>> records(pairs.size() + 1);
      parallel_for(pairs.size() + 1, globals.jobs, [&](std::size_t i) {
        GaConfig ga = config.ga;
        ga.classifier = config.classifier;
        Dataset subset = dataset;
        std::string provenance = "global";
        if (i < pairs.size()) {
          provenance = pair_name(universe, pairs[i]);
          subset = restrict(dataset, pairs[i].first(), pairs[i].second());
        }
        ga.seed = derive_seed(config.master_seed, "select/" + provenance);
        const auto result = run_ga(standardize(subset).train, ga, 1);
        options.log(fmt::format("select {}: fitness {:.4f} after {} generations", provenance, result.best_fitness,
                                result.history.size()));
        records[i] = GenomeRecord{result.best, provenance, ga.fingerprint(), ga.seed, result.best_fitness};
      });
      for (std::size_t i = 0; i < records.size(); ++i) {
        const auto name = i < pairs.size() ? genome_file(universe, pairs[i]) : std::string("genome_global.json");
        write_text_file(fs::path(out_dir) / name, to_json(*records[i]).dump(2) + "\n");
      }
      err << fmt::format("wrote {} genomes to {} ({:.1f} s)\n", records.size(), out_dir, elapsed());
      return 0;
    }

    if (*train) {
      std::map<PairKey, SubspaceSpec> subspaces;
      if (config.path == SubspacePath::nn_transform) {
        for (const auto& key : all_pairs(dataset.universe().size())) {
          subspaces.emplace(key, NnTransformSpec{config.nn_hidden});
        }
      } else {
        if (genomes_dir.empty()) {
          throw Error("cli", "the GA path needs --genomes from select");
        }
        subspaces = read_genomes(genomes_dir, dataset.universe(), dataset.dims());
      }
      EnsembleConfig ensemble_config;
      ensemble_config.classifier = config.classifier;
      ensemble_config.train = config.classifier == ClassifierKind::nn ? config.nn_train : config.train;
      ensemble_config.seed = derive_seed(config.master_seed, "train");
      ensemble_config.jobs = globals.jobs;
      const auto ensemble = train_ensemble(dataset, subspaces, ensemble_config);
      save_ensemble(ensemble, out_dir,
                    {{"config_fingerprint", config.fingerprint()},
                     {"master_seed", config.master_seed},
                     {"dataset_fingerprint", to_hex(dataset.fingerprint())}});
      err << fmt::format("wrote ensemble of {} pair models to {} ({:.1f} s)\n", ensemble.models().size(), out_dir,
                         elapsed());
      return 0;
    }

    ExperimentReport report;
    if (*evaluate && !ensemble_dir.empty()) {
      report = evaluate_ensemble(load_ensemble(ensemble_dir), dataset, config);
    } else if (*evaluate) {
      report = run_cv(config, dataset, options);
    } else if (*compare) {
      report = run_comparison(config, dataset, options);
    } else {
      ExperimentConfig ga_config = config;
      ga_config.path = SubspacePath::ga_selection;
      report = run_comparison(ga_config, dataset, options);
      const auto text = format_overlap(report);
      if (out_path.empty()) {
        out << text;
      } else {
        write_text_file(out_path, text);
      }
      err << fmt::format("overlap-report finished ({:.1f} s)\n", elapsed());
      return 0;
    }
    write_reports(report, out_dir, out_path, format, out, err);
    err << fmt::format("{} finished ({:.1f} s)\n", app.get_subcommands().front()->get_name(), elapsed());
    return 0;
  } catch (const Error& e) {
    err << e.module() << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "internal: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace pairvote
