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

#ifndef PAIRVOTE_GA_HPP_
#define PAIRVOTE_GA_HPP_

#include "pairvote/classifiers.hpp"
#include "pairvote/dataset.hpp"
#include "pairvote/random.hpp"

#include <json.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pairvote {

/// Fixed-size set of distinct feature indices in [0, feature_count), kept in
/// ascending order.
class Genome {
 public:
  Genome() = default;
  Genome(std::vector<std::size_t> indices, std::size_t feature_count);

  const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  std::size_t feature_count() const noexcept { return feature_count_; }
  bool contains(std::size_t index) const;

  /// Columns of `x` selected by the genome, in ascending index order.
  FeatureMatrix project(const FeatureMatrix& x) const;

  friend auto operator<=>(const Genome&, const Genome&) = default;
  friend bool operator==(const Genome&, const Genome&) = default;

 private:
  std::vector<std::size_t> indices_;
  std::size_t feature_count_ = 0;
};

/// How wrapper fitness is measured: a stratified train/validation split of the
/// data handed to the GA, repeated and averaged.
struct FitnessScheme {
  double validation_fraction = 0.2;
  std::size_t repetitions = 3;
};

struct GaConfig {
  std::size_t genome_size = 50;
  std::size_t population_size = 100;
  double crossover_probability = 0.8;
  double mutation_probability = 0.1;  // per offspring, one gene substituted
  std::size_t max_generations = 300;
  std::size_t stall_window = 100;
  std::optional<double> mean_fitness_threshold;  // disabled unless set
  std::uint64_t seed = 0;
  ClassifierKind classifier = ClassifierKind::logistic;
  FitnessScheme scheme;
  TrainConfig fitness_train = default_fitness_train();

  static TrainConfig default_fitness_train();

  void validate(std::size_t feature_count) const;
  /// Hash of every field except the seed.
  std::string fingerprint() const;
};

nlohmann::json to_json(const GaConfig& config);
GaConfig ga_config_from_json(const nlohmann::json& doc, GaConfig base = {});
nlohmann::json to_json(const TrainConfig& config);
TrainConfig train_config_from_json(const nlohmann::json& doc, TrainConfig base = {});

struct Population {
  std::vector<Genome> genomes;
  std::vector<double> fitness;  // parallel to genomes once evaluated
  std::size_t generation = 0;
  Genome best;
  double best_fitness = 0.0;
  std::size_t best_generation = 0;
};

/// P uniform random G-subsets of [0, feature_count). Fitness is left empty.
Population init_population(const GaConfig& config, std::size_t feature_count, std::uint64_t seed);

struct InnerSplit {
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> validation_rows;
};

/// Stratified splits used by the fitness function. Each class contributes
/// round(fraction * count) validation rows, clamped so both sides keep at least
/// one row; a class with fewer than two rows is an error.
std::vector<InnerSplit> make_inner_splits(std::span<const std::size_t> labels, std::size_t classes,
                                          const FitnessScheme& scheme, std::uint64_t seed);

/// Wrapper fitness with memoization. Holds its own copy of the data; the cache
/// key is the genome, the data fingerprint and the config fingerprint being
/// fixed per evaluator.
class FitnessEvaluator {
 public:
  FitnessEvaluator(Dataset data, GaConfig config);

  double operator()(const Genome& genome);
  /// Evaluates a batch, computing uncached genomes on up to `jobs` threads.
  /// Results are identical for every jobs value.
  std::vector<double> evaluate(std::span<const Genome> genomes, int jobs = 1);

  std::size_t evaluations() const noexcept { return evaluations_; }
  const std::vector<InnerSplit>& splits() const noexcept { return splits_; }
  const Dataset& data() const noexcept { return data_; }
  std::string cache_key_prefix() const { return key_prefix_; }

 private:
  double compute(const Genome& genome) const;

  Dataset data_;
  GaConfig config_;
  std::vector<InnerSplit> splits_;
  std::string key_prefix_;
  std::map<std::vector<std::size_t>, double> cache_;
  std::mutex mutex_;
  std::size_t evaluations_ = 0;
};

/// Held-out accuracy of the configured classifier on `data` projected onto the
/// genome, averaged over the inner splits. Pure: no caching.
double fitness(const Genome& genome, const Dataset& data, const GaConfig& config);

/// Two-point crossover with random cuts 0 <= i < j <= G.
Genome two_point_crossover(const Genome& a, const Genome& b, Rng& rng);
/// child = a[0, i) + b[i, j) + a[j, G), then every later duplicate is replaced
/// by a uniform random index that is not in the child.
Genome splice_crossover(const Genome& a, const Genome& b, std::size_t first_cut, std::size_t second_cut, Rng& rng);

/// With `probability`, swaps one uniformly chosen gene for a uniform random
/// index outside the genome. Identity when the genome already holds every index.
Genome substitution_mutate(const Genome& genome, double probability, Rng& rng);

struct GenerationStats {
  std::size_t generation = 0;
  double best = 0.0;
  double mean = 0.0;
};

struct GaResult {
  Genome best;
  double best_fitness = 0.0;
  std::size_t best_generation = 0;
  std::vector<GenerationStats> history;  // generation 1 is the initial population
  std::size_t evaluations = 0;
  std::size_t distinct_genomes = 0;
  std::vector<InnerSplit> splits;
};

using GaProgress = std::function<void(const GenerationStats&)>;

/// Evolves feature subsets for `data` (two classes for a pair genome, all
/// classes for the global genome). Binary tournament parents, crossover with
/// the configured probability (otherwise a copy of the first parent), mutation,
/// then elitist truncation of parents and offspring. Stops at max_generations
/// or after stall_window generations without a new best.
GaResult run_ga(const Dataset& data, const GaConfig& config, int jobs = 1, const GaProgress& progress = {});

/// |set(a) ∩ set(b)|
std::size_t subset_overlap(const Genome& a, const Genome& b);

struct GenomeRecord {
  Genome genome;
  std::string provenance;  // "label_a|label_b" or "global"
  std::string config_fingerprint;
  std::uint64_t seed = 0;
  double fitness = 0.0;
};

inline constexpr int kGenomeSchemaVersion = 1;

nlohmann::json to_json(const GenomeRecord& record);
GenomeRecord genome_record_from_json(const nlohmann::json& doc);

}  // namespace pairvote

#endif  // PAIRVOTE_GA_HPP_
