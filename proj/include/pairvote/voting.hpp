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

#ifndef PAIRVOTE_VOTING_HPP_
#define PAIRVOTE_VOTING_HPP_

#include "pairvote/dataset.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pairvote {

/// Unordered pair of distinct label indices, stored with first < second.
class PairKey {
 public:
  PairKey(std::size_t a, std::size_t b);

  std::size_t first() const noexcept { return first_; }
  std::size_t second() const noexcept { return second_; }
  bool contains(std::size_t label) const noexcept { return label == first_ || label == second_; }

  /// Position in the lexicographic enumeration (0,1), (0,2), ..., (M-2,M-1).
  std::size_t ordinal(std::size_t labels) const noexcept;

  friend auto operator<=>(const PairKey&, const PairKey&) = default;
  friend bool operator==(const PairKey&, const PairKey&) = default;

 private:
  std::size_t first_;
  std::size_t second_;
};

/// All C(M, 2) pairs in lexicographic order.
std::vector<PairKey> all_pairs(std::size_t labels);
std::size_t pair_count(std::size_t labels);

/// "neutral|anger"-style name used for file names and report rows.
std::string pair_name(const LabelUniverse& universe, const PairKey& key);

/// Winner of every pair, stored densely in all_pairs order.
class PairVerdicts {
 public:
  explicit PairVerdicts(std::size_t labels);

  std::size_t labels() const noexcept { return labels_; }
  /// Records the bi-classifier verdict for the pair; winner must belong to it.
  void set(const PairKey& key, std::size_t winner);
  void set(std::size_t a, std::size_t b, std::size_t winner) { set(PairKey(a, b), winner); }
  std::optional<std::size_t> get(const PairKey& key) const;
  /// Throws VoteError when a pair has no verdict.
  std::size_t at(std::size_t a, std::size_t b) const;
  bool complete() const;

  friend bool operator==(const PairVerdicts&, const PairVerdicts&) = default;

 private:
  std::size_t labels_;
  std::vector<std::size_t> winners_;  // labels_ marks a missing verdict
};

struct CompetitionStep {
  std::size_t champion = 0;
  std::size_t challenger = 0;
  std::size_t winner = 0;

  friend bool operator==(const CompetitionStep&, const CompetitionStep&) = default;
};

struct VoteTally {
  std::vector<std::size_t> counts;     // wins per label
  std::vector<std::size_t> max_set;    // labels with the top count, ascending
  std::vector<CompetitionStep> trace;  // empty when max_set has one member
  std::size_t winner = 0;

  friend bool operator==(const VoteTally&, const VoteTally&) = default;
};

/// Counts pairwise wins, collects the labels tied for the most wins in
/// ascending label order m1..mK and, if K > 1, runs the competition: the
/// champion starts as m1 and is replaced by the verdict of (champion, mk) for
/// k = 2..K.
VoteTally vote_decision(const PairVerdicts& verdicts);

enum class VerifyMode { exhaustive, sampled };

struct VerificationReport {
  std::size_t labels = 0;
  VerifyMode mode = VerifyMode::exhaustive;
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  std::optional<PairVerdicts> first_failure;
};

/// Checks that a label winning all of its M - 1 pairs is always returned,
/// whatever the other C(M-1, 2) verdicts are. Exhaustive mode enumerates every
/// assignment for every target (requires 2 <= M <= 7); sampled mode draws
/// `trials` random (target, assignment) cases.
VerificationReport verify_theorem(std::size_t labels, VerifyMode mode, std::uint64_t trials = 0, std::uint64_t seed = 0);

/// Checks that the returned label is always in the max set, over every verdict
/// map (exhaustive, M <= 6) or `trials` random ones.
VerificationReport verify_membership(std::size_t labels, VerifyMode mode, std::uint64_t trials = 0, std::uint64_t seed = 0);

}  // namespace pairvote

#endif  // PAIRVOTE_VOTING_HPP_
