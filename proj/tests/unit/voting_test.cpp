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

#include "pairvote/error.hpp"
#include "pairvote/random.hpp"
#include "pairvote/voting.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

namespace pairvote {
namespace {

/// Straight transcription of the voting rule on a dense winner table, used as
/// a reference for vote_decision.
std::size_t reference_vote(std::size_t m, const std::vector<std::vector<std::size_t>>& winner) {
  std::vector<std::size_t> n(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      ++n[winner[i][j]];
    }
  }
  const auto top = *std::max_element(n.begin(), n.end());
  std::vector<std::size_t> emax;
  for (std::size_t e = 0; e < m; ++e) {
    if (n[e] == top) {
      emax.push_back(e);
    }
  }
  std::size_t em = emax.front();
  for (std::size_t k = 1; k < emax.size(); ++k) {
    const auto a = std::min(em, emax[k]);
    const auto b = std::max(em, emax[k]);
    em = winner[a][b];
  }
  return em;
}

PairVerdicts from_bits(std::size_t m, std::uint64_t bits, std::vector<std::vector<std::size_t>>* table = nullptr) {
  PairVerdicts v(m);
  if (table != nullptr) {
    table->assign(m, std::vector<std::size_t>(m, 0));
  }
  std::size_t bit = 0;
  for (const auto& key : all_pairs(m)) {
    const auto w = ((bits >> bit++) & 1U) != 0 ? key.second() : key.first();
    v.set(key, w);
    if (table != nullptr) {
      (*table)[key.first()][key.second()] = w;
    }
  }
  return v;
}

TEST_CASE("pair keys are canonical") {
  const PairKey k(4, 1);
  CHECK(k.first() == 1);
  CHECK(k.second() == 4);
  CHECK_THROWS_AS(PairKey(2, 2), VoteError);
  const auto pairs = all_pairs(7);
  REQUIRE(pairs.size() == 21);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    CHECK(pairs[i].ordinal(7) == i);
  }
}

TEST_CASE("single pair") {
  PairVerdicts v(2);
  v.set(0, 1, 0);
  const auto tally = vote_decision(v);
  CHECK(tally.winner == 0);
  CHECK(tally.counts == std::vector<std::size_t>{1, 0});
  CHECK(tally.trace.empty());
}

TEST_CASE("three-way cycle is settled by the competition") {
  PairVerdicts v(3);
  v.set(0, 1, 0);  // A beats B
  v.set(1, 2, 1);  // B beats C
  v.set(0, 2, 2);  // C beats A
  const auto tally = vote_decision(v);
  CHECK(tally.counts == std::vector<std::size_t>{1, 1, 1});
  CHECK(tally.max_set == std::vector<std::size_t>{0, 1, 2});
  REQUIRE(tally.trace.size() == 2);
  CHECK(tally.trace[0] == CompetitionStep{0, 1, 0});
  CHECK(tally.trace[1] == CompetitionStep{0, 2, 2});
  CHECK(tally.winner == 2);
}

TEST_CASE("vote_decision matches the reference on every map up to five labels") {
  for (std::size_t m = 2; m <= 5; ++m) {
    const auto pairs = pair_count(m);
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << pairs); ++bits) {
      std::vector<std::vector<std::size_t>> table;
      const auto v = from_bits(m, bits, &table);
      const auto tally = vote_decision(v);
      CHECK(tally.winner == reference_vote(m, table));
      CHECK(std::accumulate(tally.counts.begin(), tally.counts.end(), std::size_t{0}) == pairs);
      CHECK(std::find(tally.max_set.begin(), tally.max_set.end(), tally.winner) != tally.max_set.end());
    }
  }
}

TEST_CASE("incomplete or inconsistent verdicts are rejected") {
  PairVerdicts v(3);
  v.set(0, 1, 1);
  CHECK_FALSE(v.complete());
  CHECK_THROWS_AS(vote_decision(v), VoteError);
  CHECK_THROWS_AS(v.set(0, 1, 2), VoteError);
}

TEST_CASE("relabelling permutes the result") {
  Rng rng(5);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t m = 3 + rng.uniform_index(5);
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(perm));
    PairVerdicts v(m);
    PairVerdicts permuted(m);
    for (const auto& key : all_pairs(m)) {
      const auto w = rng.bernoulli(0.5) ? key.first() : key.second();
      v.set(key, w);
      permuted.set(perm[key.first()], perm[key.second()], perm[w]);
    }
    const auto tally = vote_decision(v);
    // With three or more tied labels the competition depends on label order.
    if (tally.max_set.size() <= 2) {
      CHECK(vote_decision(permuted).winner == perm[tally.winner]);
    }
  }
}

TEST_CASE("a label winning all of its pairs is elected") {
  const std::uint64_t expected[] = {0, 0, 2, 6, 32, 320, 6144, 229376};
  for (std::size_t m = 2; m <= 7; ++m) {
    const auto report = verify_theorem(m, VerifyMode::exhaustive);
    CHECK(report.cases == expected[m]);
    CHECK(report.failures == 0);
  }
  const auto sampled = verify_theorem(12, VerifyMode::sampled, 20000, 3);
  CHECK(sampled.cases == 20000);
  CHECK(sampled.failures == 0);
}

TEST_CASE("the winner always belongs to the max set") {
  CHECK(verify_membership(3, VerifyMode::exhaustive).cases == 8);
  CHECK(verify_membership(4, VerifyMode::exhaustive).cases == 64);
  CHECK(verify_membership(4, VerifyMode::exhaustive).failures == 0);
  const auto sampled = verify_membership(7, VerifyMode::sampled, 100000, 1);
  CHECK(sampled.cases == 100000);
  CHECK(sampled.failures == 0);
}

}  // namespace
}  // namespace pairvote
