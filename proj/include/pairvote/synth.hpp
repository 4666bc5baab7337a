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

#ifndef PAIRVOTE_SYNTH_HPP_
#define PAIRVOTE_SYNTH_HPP_

#include "pairvote/dataset.hpp"
#include "pairvote/voting.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace pairvote {

/// Gaussian benchmark in which every class pair is separable only in its own
/// informative dimensions. All columns are N(0, 1) noise except that, in the
/// informative columns of pair (a, b), class a has mean +separation/2 and
/// class b has mean -separation/2.
struct SynthSpec {
  std::size_t classes = 4;
  std::size_t per_class = 200;
  std::size_t noise_dims = 60;
  std::size_t informative_per_pair = 3;  // used when `informative` is empty
  double separation = 3.0;               // in noise standard deviations
  std::size_t speakers = 10;
  std::uint64_t seed = 0;
  /// Explicit informative columns per pair; when empty, pair k in all_pairs
  /// order gets columns [k * informative_per_pair, (k + 1) * informative_per_pair)
  /// and the noise columns follow.
  std::map<PairKey, std::vector<std::size_t>> informative;
};

/// Total column count: noise_dims plus all informative columns.
std::size_t synthetic_dims(const SynthSpec& spec);

/// Labels are "c0", "c1", ...; speakers "s00", "s01", ... are assigned
/// round-robin within each class and alternate male/female, so speaker folds
/// stay balanced. Deterministic given the seed.
Dataset make_synthetic(const SynthSpec& spec);

}  // namespace pairvote

#endif  // PAIRVOTE_SYNTH_HPP_
