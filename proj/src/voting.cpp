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

#include "pairvote/voting.hpp"

#include "pairvote/error.hpp"
#include "pairvote/random.hpp"

#include <fmt/core.h>

#include <algorithm>

namespace pairvote {

PairKey::PairKey(std::size_t a, std::size_t b) : first_(std::min(a, b)), second_(std::max(a, b)) {
  if (a == b) {
    throw VoteError(fmt::format("a pair needs two distinct labels, got ({}, {})", a, b));
  }
}

std::size_t PairKey::ordinal(std::size_t labels) const noexcept {
  // pairs before row `first_`: sum_{i < first_} (labels - 1 - i)
  return first_ * (2 * labels - first_ - 1) / 2 + (second_ - first_ - 1);
}

std::vector<PairKey> all_pairs(std::size_t labels) {
  std::vector<PairKey> pairs;
  for (std::size_t i = 0; i < labels; ++i) {
    for (std::size_t j = i + 1; j < labels; ++j) {
      pairs.emplace_back(i, j);
    }
  }
  return pairs;
}

std::size_t pair_count(std::size_t labels) { return labels < 2 ? 0 : labels * (labels - 1) / 2; }

std::string pair_name(const LabelUniverse& universe, const PairKey& key) {
  return universe.label(key.first()) + "|" + universe.label(key.second());
}

PairVerdicts::PairVerdicts(std::size_t labels) : labels_(labels), winners_(pair_count(labels), labels) {
  if (labels < 2) {
    throw VoteError("voting needs at least two labels");
  }
}

void PairVerdicts::set(const PairKey& key, std::size_t winner) {
  if (key.second() >= labels_) {
    throw VoteError(fmt::format("pair ({}, {}) outside a universe of {} labels", key.first(), key.second(), labels_));
  }
  if (!key.contains(winner)) {
    throw VoteError(fmt::format("verdict {} is not a member of pair ({}, {})", winner, key.first(), key.second()));
  }
  winners_[key.ordinal(labels_)] = winner;
}

std::optional<std::size_t> PairVerdicts::get(const PairKey& key) const {
  if (key.second() >= labels_) {
    return std::nullopt;
  }
  const auto w = winners_[key.ordinal(labels_)];
  return w == labels_ ? std::nullopt : std::optional<std::size_t>(w);
}

std::size_t PairVerdicts::at(std::size_t a, std::size_t b) const {
  const PairKey key(a, b);
  if (const auto w = get(key)) {
    return *w;
  }
  throw VoteError(fmt::format("no verdict for pair ({}, {})", key.first(), key.second()));
}

bool PairVerdicts::complete() const {
  return std::none_of(winners_.begin(), winners_.end(), [&](std::size_t w) { return w == labels_; });
}

VoteTally vote_decision(const PairVerdicts& verdicts) {
  const auto m = verdicts.labels();
  if (!verdicts.complete()) {
    throw VoteError("verdict map is incomplete; every pair needs a verdict before voting");
  }
  VoteTally tally;
  tally.counts.assign(m, 0);
  for (const auto& key : all_pairs(m)) {
    ++tally.counts[*verdicts.get(key)];
  }
  const auto top = *std::max_element(tally.counts.begin(), tally.counts.end());
  for (std::size_t e = 0; e < m; ++e) {
    if (tally.counts[e] == top) {
      tally.max_set.push_back(e);
    }
  }
  auto champion = tally.max_set.front();
  for (std::size_t k = 1; k < tally.max_set.size(); ++k) {
    const auto challenger = tally.max_set[k];
    const auto winner = verdicts.at(champion, challenger);
    tally.trace.push_back({champion, challenger, winner});
    champion = winner;
  }
  tally.winner = champion;
  return tally;
}

namespace {

/// Fills the pairs not involving `target` from the bits of `assignment`
/// (bit set: the larger label wins) and gives `target` all of its own pairs.
PairVerdicts theorem_case(std::size_t m, std::size_t target, std::uint64_t assignment) {
  PairVerdicts verdicts(m);
  std::size_t bit = 0;
  for (const auto& key : all_pairs(m)) {
    if (key.contains(target)) {
      verdicts.set(key, target);
    } else {
      verdicts.set(key, ((assignment >> bit) & 1U) != 0 ? key.second() : key.first());
      ++bit;
    }
  }
  return verdicts;
}

PairVerdicts full_case(std::size_t m, std::uint64_t assignment) {
  PairVerdicts verdicts(m);
  std::size_t bit = 0;
  for (const auto& key : all_pairs(m)) {
    verdicts.set(key, ((assignment >> bit) & 1U) != 0 ? key.second() : key.first());
    ++bit;
  }
  return verdicts;
}

std::uint64_t random_bits(Rng& rng, std::size_t bits) {
  return bits >= 64 ? rng.next() : rng.next() & ((std::uint64_t{1} << bits) - 1);
}

}  // namespace

VerificationReport verify_theorem(std::size_t labels, VerifyMode mode, std::uint64_t trials, std::uint64_t seed) {
  if (labels < 2) {
    throw VoteError("theorem verification needs at least two labels");
  }
  const auto free_pairs = pair_count(labels - 1);
  VerificationReport report{labels, mode, 0, 0, std::nullopt};
  const auto check = [&](std::size_t target, std::uint64_t assignment) {
    auto verdicts = theorem_case(labels, target, assignment);
    ++report.cases;
    if (vote_decision(verdicts).winner != target) {
      ++report.failures;
      if (!report.first_failure) {
        report.first_failure = std::move(verdicts);
      }
    }
  };
  if (mode == VerifyMode::exhaustive) {
    if (labels > 7) {
      throw VoteError("exhaustive verification is limited to at most 7 labels");
    }
    for (std::size_t target = 0; target < labels; ++target) {
      for (std::uint64_t assignment = 0; assignment < (std::uint64_t{1} << free_pairs); ++assignment) {
        check(target, assignment);
      }
    }
    return report;
  }
  Rng rng(seed);
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto target = rng.uniform_index(labels);
    check(target, random_bits(rng, free_pairs));
  }
  return report;
}

VerificationReport verify_membership(std::size_t labels, VerifyMode mode, std::uint64_t trials, std::uint64_t seed) {
  if (labels < 2) {
    throw VoteError("membership verification needs at least two labels");
  }
  const auto pairs = pair_count(labels);
  VerificationReport report{labels, mode, 0, 0, std::nullopt};
  const auto check = [&](std::uint64_t assignment) {
    auto verdicts = full_case(labels, assignment);
    const auto tally = vote_decision(verdicts);
    ++report.cases;
    if (!std::binary_search(tally.max_set.begin(), tally.max_set.end(), tally.winner)) {
      ++report.failures;
      if (!report.first_failure) {
        report.first_failure = std::move(verdicts);
      }
    }
  };
  if (mode == VerifyMode::exhaustive) {
    if (labels > 6) {
      throw VoteError("exhaustive membership verification is limited to at most 6 labels");
    }
    for (std::uint64_t assignment = 0; assignment < (std::uint64_t{1} << pairs); ++assignment) {
      check(assignment);
    }
    return report;
  }
  Rng rng(seed);
  for (std::uint64_t t = 0; t < trials; ++t) {
    check(random_bits(rng, pairs));
  }
  return report;
}

}  // namespace pairvote
