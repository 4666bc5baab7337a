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

#include "pairvote/ga.hpp"

#include "pairvote/error.hpp"
#include "pairvote/parallel.hpp"

#include <fmt/core.h>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace pairvote {

using nlohmann::json;

Genome::Genome(std::vector<std::size_t> indices, std::size_t feature_count)
    : indices_(std::move(indices)), feature_count_(feature_count) {
  std::sort(indices_.begin(), indices_.end());
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
    throw GaError("genome contains duplicate feature indices");
  }
  if (!indices_.empty() && indices_.back() >= feature_count_) {
    throw GaError(fmt::format("genome index {} outside [0, {})", indices_.back(), feature_count_));
  }
}

bool Genome::contains(std::size_t index) const { return std::binary_search(indices_.begin(), indices_.end(), index); }

FeatureMatrix Genome::project(const FeatureMatrix& x) const {
  if (static_cast<std::size_t>(x.cols()) != feature_count_) {
    throw GaError(fmt::format("genome over {} features applied to {} columns", feature_count_, x.cols()));
  }
  FeatureMatrix out(x.rows(), static_cast<Eigen::Index>(indices_.size()));
  for (std::size_t j = 0; j < indices_.size(); ++j) {
    out.col(static_cast<Eigen::Index>(j)) = x.col(static_cast<Eigen::Index>(indices_[j]));
  }
  return out;
}

TrainConfig GaConfig::default_fitness_train() {
  TrainConfig config;
  config.max_epochs = 200;
  return config;
}

void GaConfig::validate(std::size_t feature_count) const {
  if (genome_size == 0) {
    throw GaError("genome size must be at least 1");
  }
  if (genome_size > feature_count) {
    throw GaError(fmt::format("genome size {} exceeds the {} available features", genome_size, feature_count));
  }
  if (population_size < 2) {
    throw GaError("population size must be at least 2");
  }
  const auto is_probability = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!is_probability(crossover_probability) || !is_probability(mutation_probability)) {
    throw GaError("crossover and mutation probabilities must lie in [0, 1]");
  }
  if (max_generations < 1 || stall_window < 1) {
    throw GaError("max generations and stall window must be at least 1");
  }
  if (!(scheme.validation_fraction > 0.0 && scheme.validation_fraction < 1.0) || scheme.repetitions < 1) {
    throw GaError("fitness scheme needs a validation fraction in (0, 1) and at least one repetition");
  }
  if (classifier == ClassifierKind::nn) {
    throw GaError("wrapper fitness supports the lr and svm classifiers");
  }
  fitness_train.validate();
}

json to_json(const TrainConfig& config) {
  return {{"learning_rate", config.learning_rate},
          {"max_epochs", config.max_epochs},
          {"tolerance", config.tolerance},
          {"l2", config.l2},
          {"seed", config.seed}};
}

TrainConfig train_config_from_json(const json& doc, TrainConfig base) {
  base.learning_rate = doc.value("learning_rate", base.learning_rate);
  base.max_epochs = doc.value("max_epochs", base.max_epochs);
  base.tolerance = doc.value("tolerance", base.tolerance);
  base.l2 = doc.value("l2", base.l2);
  base.seed = doc.value("seed", base.seed);
  return base;
}

json to_json(const GaConfig& config) {
  json doc = {
      {"genome_size", config.genome_size},
      {"population_size", config.population_size},
      {"crossover_probability", config.crossover_probability},
      {"mutation_probability", config.mutation_probability},
      {"max_generations", config.max_generations},
      {"stall_window", config.stall_window},
      {"mean_fitness_threshold", nullptr},
      {"seed", config.seed},
      {"classifier", std::string(to_string(config.classifier))},
      {"validation_fraction", config.scheme.validation_fraction},
      {"repetitions", config.scheme.repetitions},
      {"fitness_train", to_json(config.fitness_train)},
  };
  if (config.mean_fitness_threshold) {
    doc["mean_fitness_threshold"] = *config.mean_fitness_threshold;
  }
  return doc;
}

GaConfig ga_config_from_json(const json& doc, GaConfig base) {
  try {
    base.genome_size = doc.value("genome_size", base.genome_size);
    base.population_size = doc.value("population_size", base.population_size);
    base.crossover_probability = doc.value("crossover_probability", base.crossover_probability);
    base.mutation_probability = doc.value("mutation_probability", base.mutation_probability);
    base.max_generations = doc.value("max_generations", base.max_generations);
    base.stall_window = doc.value("stall_window", base.stall_window);
    if (doc.contains("mean_fitness_threshold")) {
      const auto& t = doc.at("mean_fitness_threshold");
      base.mean_fitness_threshold = t.is_null() ? std::nullopt : std::optional<double>(t.get<double>());
    }
    base.seed = doc.value("seed", base.seed);
    if (doc.contains("classifier")) {
      base.classifier = parse_classifier_kind(doc.at("classifier").get<std::string>());
    }
    base.scheme.validation_fraction = doc.value("validation_fraction", base.scheme.validation_fraction);
    base.scheme.repetitions = doc.value("repetitions", base.scheme.repetitions);
    if (doc.contains("fitness_train")) {
      base.fitness_train = train_config_from_json(doc.at("fitness_train"), base.fitness_train);
    }
  } catch (const json::exception& e) {
    throw GaError(fmt::format("malformed GA config: {}", e.what()));
  }
  return base;
}

std::string GaConfig::fingerprint() const {
  json doc = to_json(*this);
  doc.erase("seed");
  return to_hex(fnv1a(doc.dump()));
}

namespace {

/// Uniform index in [0, feature_count) that `taken` does not contain.
/// `taken` must be sorted and smaller than feature_count.
std::size_t draw_outside(const std::vector<std::size_t>& taken, std::size_t feature_count, Rng& rng) {
  if (taken.size() * 2 < feature_count) {
    while (true) {
      const auto candidate = rng.uniform_index(feature_count);
      if (!std::binary_search(taken.begin(), taken.end(), candidate)) {
        return candidate;
      }
    }
  }
  // pick the k-th free index
  auto k = rng.uniform_index(feature_count - taken.size());
  std::size_t t = 0;
  for (std::size_t candidate = 0; candidate < feature_count; ++candidate) {
    if (t < taken.size() && taken[t] == candidate) {
      ++t;
      continue;
    }
    if (k-- == 0) {
      return candidate;
    }
  }
  throw GaError("no free feature index left");
}

Genome random_genome(std::size_t size, std::size_t feature_count, Rng& rng) {
  std::vector<std::size_t> pool(feature_count);
  std::iota(pool.begin(), pool.end(), 0);
  for (std::size_t i = 0; i < size; ++i) {
    std::swap(pool[i], pool[i + rng.uniform_index(feature_count - i)]);
  }
  pool.resize(size);
  return Genome(std::move(pool), feature_count);
}

}  // namespace

Population init_population(const GaConfig& config, std::size_t feature_count, std::uint64_t seed) {
  config.validate(feature_count);
  Rng rng(seed);
  Population population;
  population.genomes.reserve(config.population_size);
  for (std::size_t i = 0; i < config.population_size; ++i) {
    population.genomes.push_back(random_genome(config.genome_size, feature_count, rng));
  }
  return population;
}

std::vector<InnerSplit> make_inner_splits(std::span<const std::size_t> labels, std::size_t classes,
                                          const FitnessScheme& scheme, std::uint64_t seed) {
  std::vector<std::vector<std::size_t>> by_class(classes);
  for (std::size_t r = 0; r < labels.size(); ++r) {
    by_class.at(labels[r]).push_back(r);
  }
  for (std::size_t k = 0; k < classes; ++k) {
    if (by_class[k].size() < 2) {
      throw GaError(fmt::format("inner split leaves class {} empty ({} rows)", k, by_class[k].size()));
    }
  }
  std::vector<InnerSplit> splits;
  for (std::size_t rep = 0; rep < scheme.repetitions; ++rep) {
    Rng rng(derive_seed(seed, fmt::format("inner-split/{}", rep)));
    InnerSplit split;
    for (auto rows : by_class) {
      rng.shuffle(std::span(rows));
      const auto n = rows.size();
      auto n_val = static_cast<std::size_t>(std::llround(scheme.validation_fraction * static_cast<double>(n)));
      n_val = std::clamp<std::size_t>(n_val, 1, n - 1);
      split.validation_rows.insert(split.validation_rows.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_val));
      split.train_rows.insert(split.train_rows.end(), rows.begin() + static_cast<std::ptrdiff_t>(n_val), rows.end());
    }
    std::sort(split.train_rows.begin(), split.train_rows.end());
    std::sort(split.validation_rows.begin(), split.validation_rows.end());
    splits.push_back(std::move(split));
  }
  return splits;
}

FitnessEvaluator::FitnessEvaluator(Dataset data, GaConfig config) : data_(std::move(data)), config_(std::move(config)) {
  if (!data_.has_labels()) {
    throw GaError("fitness needs labelled data");
  }
  config_.validate(data_.dims());
  splits_ = make_inner_splits(data_.labels(), data_.universe().size(), config_.scheme,
                              derive_seed(config_.seed, "fitness/inner-splits"));
  key_prefix_ = fmt::format("{}/{}", to_hex(data_.fingerprint()), config_.fingerprint());
}

double FitnessEvaluator::compute(const Genome& genome) const {
  if (genome.feature_count() != data_.dims()) {
    throw GaError(fmt::format("genome over {} features evaluated on {}-column data", genome.feature_count(), data_.dims()));
  }
  const auto& x = data_.features();
  const auto& labels = data_.labels();
  const auto& cols = genome.indices();
  const auto classes = data_.universe().size();
  const auto gather = [&](const std::vector<std::size_t>& rows) {
    FeatureMatrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < cols.size(); ++j) {
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            x(static_cast<Eigen::Index>(rows[i]), static_cast<Eigen::Index>(cols[j]));
      }
    }
    return out;
  };
  double total = 0.0;
  for (const auto& split : splits_) {
    const auto x_train = gather(split.train_rows);
    const auto x_val = gather(split.validation_rows);
    std::vector<std::size_t> y_train;
    y_train.reserve(split.train_rows.size());
    for (const auto r : split.train_rows) {
      y_train.push_back(labels[r]);
    }
    const auto model = config_.classifier == ClassifierKind::svm
                           ? fit_svm(x_train, y_train, classes, config_.fitness_train)
                           : fit_logistic(x_train, y_train, classes, config_.fitness_train);
    const auto predicted = predict_indices(model, x_val);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
      correct += predicted[i] == labels[split.validation_rows[i]] ? 1 : 0;
    }
    total += static_cast<double>(correct) / static_cast<double>(predicted.size());
  }
  return total / static_cast<double>(splits_.size());
}

double FitnessEvaluator::operator()(const Genome& genome) {
  return evaluate(std::span(&genome, 1)).front();
}

std::vector<double> FitnessEvaluator::evaluate(std::span<const Genome> genomes, int jobs) {
  std::vector<double> out(genomes.size(), 0.0);
  std::vector<const Genome*> pending;
  {
    const std::lock_guard lock(mutex_);
    std::set<std::vector<std::size_t>> queued;
    for (const auto& genome : genomes) {
      if (cache_.find(genome.indices()) == cache_.end() && queued.insert(genome.indices()).second) {
        pending.push_back(&genome);
      }
    }
  }
  std::vector<double> computed(pending.size(), 0.0);
  parallel_for(pending.size(), jobs, [&](std::size_t i) { computed[i] = compute(*pending[i]); });
  const std::lock_guard lock(mutex_);
  for (std::size_t i = 0; i < pending.size(); ++i) {
    cache_.emplace(pending[i]->indices(), computed[i]);
  }
  evaluations_ += pending.size();
  for (std::size_t i = 0; i < genomes.size(); ++i) {
    out[i] = cache_.at(genomes[i].indices());
  }
  return out;
}

double fitness(const Genome& genome, const Dataset& data, const GaConfig& config) {
  FitnessEvaluator evaluator(data, config);
  return evaluator(genome);
}

Genome splice_crossover(const Genome& a, const Genome& b, std::size_t first_cut, std::size_t second_cut, Rng& rng) {
  const auto size = a.size();
  if (b.size() != size || a.feature_count() != b.feature_count()) {
    throw GaError("crossover parents differ in size or feature count");
  }
  if (first_cut >= second_cut || second_cut > size) {
    throw GaError(fmt::format("invalid crossover cuts ({}, {}) for genome size {}", first_cut, second_cut, size));
  }
  std::vector<std::size_t> child(size);
  for (std::size_t k = 0; k < size; ++k) {
    child[k] = (k >= first_cut && k < second_cut) ? b.indices()[k] : a.indices()[k];
  }
  std::vector<std::size_t> present(child);
  std::sort(present.begin(), present.end());
  present.erase(std::unique(present.begin(), present.end()), present.end());
  std::vector<std::size_t> seen;
  for (std::size_t k = 0; k < size; ++k) {
    if (std::find(seen.begin(), seen.end(), child[k]) != seen.end()) {
      child[k] = draw_outside(present, a.feature_count(), rng);
      present.insert(std::upper_bound(present.begin(), present.end(), child[k]), child[k]);
    }
    seen.push_back(child[k]);
  }
  return Genome(std::move(child), a.feature_count());
}

Genome two_point_crossover(const Genome& a, const Genome& b, Rng& rng) {
  const auto size = a.size();
  if (size == 0) {
    return a;
  }
  // distinct cut points drawn from {0, ..., G}
  auto i = rng.uniform_index(size + 1);
  auto j = rng.uniform_index(size);
  if (j >= i) {
    ++j;
  }
  if (i > j) {
    std::swap(i, j);
  }
  return splice_crossover(a, b, i, j, rng);
}

Genome substitution_mutate(const Genome& genome, double probability, Rng& rng) {
  if (!rng.bernoulli(probability) || genome.size() >= genome.feature_count() || genome.size() == 0) {
    return genome;
  }
  auto indices = genome.indices();
  const auto position = rng.uniform_index(indices.size());
  indices[position] = draw_outside(genome.indices(), genome.feature_count(), rng);
  return Genome(std::move(indices), genome.feature_count());
}

namespace {

void sort_population(std::vector<Genome>& genomes, std::vector<double>& fitness) {
  std::vector<std::size_t> order(genomes.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    if (fitness[l] != fitness[r]) {
      return fitness[l] > fitness[r];
    }
    return genomes[l] < genomes[r];
  });
  std::vector<Genome> sorted_genomes;
  std::vector<double> sorted_fitness;
  sorted_genomes.reserve(order.size());
  sorted_fitness.reserve(order.size());
  for (const auto i : order) {
    sorted_genomes.push_back(std::move(genomes[i]));
    sorted_fitness.push_back(fitness[i]);
  }
  genomes = std::move(sorted_genomes);
  fitness = std::move(sorted_fitness);
}

GenerationStats stats_of(const Population& population) {
  const double sum = std::accumulate(population.fitness.begin(), population.fitness.end(), 0.0);
  return {population.generation, population.fitness.front(), sum / static_cast<double>(population.fitness.size())};
}

}  // namespace

GaResult run_ga(const Dataset& data, const GaConfig& config, int jobs, const GaProgress& progress) {
  config.validate(data.dims());
  FitnessEvaluator evaluator(data, config);
  const auto feature_count = data.dims();
  Rng rng(derive_seed(config.seed, "ga/evolution"));
  std::set<std::vector<std::size_t>> encountered;

  Population population = init_population(config, feature_count, derive_seed(config.seed, "ga/init"));
  for (const auto& g : population.genomes) {
    encountered.insert(g.indices());
  }
  population.fitness = evaluator.evaluate(population.genomes, jobs);
  sort_population(population.genomes, population.fitness);
  population.generation = 1;
  population.best = population.genomes.front();
  population.best_fitness = population.fitness.front();
  population.best_generation = 1;

  GaResult result;
  result.history.push_back(stats_of(population));
  if (progress) {
    progress(result.history.back());
  }
  const auto threshold_reached = [&] {
    return config.mean_fitness_threshold && result.history.back().mean >= *config.mean_fitness_threshold;
  };

  std::size_t stall = 0;
  const auto p = config.population_size;
  while (population.generation < config.max_generations && !threshold_reached()) {
    std::vector<Genome> offspring;
    offspring.reserve(p);
    for (std::size_t k = 0; k < p; ++k) {
      // population is sorted, so the lower index wins a binary tournament
      const auto first = std::min(rng.uniform_index(p), rng.uniform_index(p));
      const auto second = std::min(rng.uniform_index(p), rng.uniform_index(p));
      Genome child = rng.bernoulli(config.crossover_probability)
                         ? two_point_crossover(population.genomes[first], population.genomes[second], rng)
                         : population.genomes[first];
      child = substitution_mutate(child, config.mutation_probability, rng);
      encountered.insert(child.indices());
      offspring.push_back(std::move(child));
    }
    auto offspring_fitness = evaluator.evaluate(offspring, jobs);
    for (std::size_t k = 0; k < p; ++k) {
      population.genomes.push_back(std::move(offspring[k]));
      population.fitness.push_back(offspring_fitness[k]);
    }
    sort_population(population.genomes, population.fitness);
    population.genomes.resize(p);
    population.fitness.resize(p);
    ++population.generation;

    if (population.fitness.front() > population.best_fitness) {
      population.best = population.genomes.front();
      population.best_fitness = population.fitness.front();
      population.best_generation = population.generation;
      stall = 0;
    } else {
      ++stall;
    }
    result.history.push_back(stats_of(population));
    if (progress) {
      progress(result.history.back());
    }
    if (stall >= config.stall_window) {
      break;
    }
  }

  result.best = population.best;
  result.best_fitness = population.best_fitness;
  result.best_generation = population.best_generation;
  result.evaluations = evaluator.evaluations();
  result.distinct_genomes = encountered.size();
  result.splits = evaluator.splits();
  return result;
}

std::size_t subset_overlap(const Genome& a, const Genome& b) {
  std::vector<std::size_t> common;
  std::set_intersection(a.indices().begin(), a.indices().end(), b.indices().begin(), b.indices().end(),
                        std::back_inserter(common));
  return common.size();
}

json to_json(const GenomeRecord& record) {
  return {
      {"schema_version", kGenomeSchemaVersion},
      {"feature_count", record.genome.feature_count()},
      {"indices", record.genome.indices()},
      {"provenance", record.provenance},
      {"config_fingerprint", record.config_fingerprint},
      {"seed", record.seed},
      {"fitness", record.fitness},
  };
}

GenomeRecord genome_record_from_json(const json& doc) {
  try {
    const auto version = doc.at("schema_version").get<int>();
    if (version != kGenomeSchemaVersion) {
      throw GaError(fmt::format("unsupported genome schema version {}", version));
    }
    GenomeRecord record;
    record.genome = Genome(doc.at("indices").get<std::vector<std::size_t>>(), doc.at("feature_count").get<std::size_t>());
    record.provenance = doc.at("provenance").get<std::string>();
    record.config_fingerprint = doc.value("config_fingerprint", std::string());
    record.seed = doc.value("seed", std::uint64_t{0});
    record.fitness = doc.value("fitness", 0.0);
    return record;
  } catch (const json::exception& e) {
    throw GaError(fmt::format("malformed genome document: {}", e.what()));
  }
}

}  // namespace pairvote
