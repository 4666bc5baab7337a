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

#ifndef PAIRVOTE_STATS_HPP_
#define PAIRVOTE_STATS_HPP_

#include <span>
#include <string_view>

namespace pairvote {

/// Regularized incomplete beta function I_x(a, b), evaluated with the
/// continued fraction (modified Lentz) on whichever side converges fastest.
double incomplete_beta(double a, double b, double x);

/// P(T <= t) for Student's t with `df` degrees of freedom.
double student_t_cdf(double t, double df);

enum class TTestStatus {
  ok,
  zero_variance,  // all paired differences equal; t undefined
  unavailable,    // fewer than two pairs (e.g. a single fold)
};

std::string_view to_string(TTestStatus status);

struct TTestResult {
  TTestStatus status = TTestStatus::unavailable;
  std::size_t n = 0;
  double mean_difference = 0.0;
  double sd_difference = 0.0;
  double t = 0.0;
  double df = 0.0;
  double p_value = 1.0;  // two-sided
  bool significant = false;
};

inline constexpr double kSignificanceLevel = 0.05;

/// Two-sided paired t-test on a - b. Requires equal lengths of at least 2.
/// Differences whose standard deviation is zero (relative to their mean, up
/// to rounding) give status zero_variance and are never significant.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace pairvote

#endif  // PAIRVOTE_STATS_HPP_
