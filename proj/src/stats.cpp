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

#include "pairvote/stats.hpp"

#include "pairvote/error.hpp"

#include <fmt/core.h>

#include <cmath>
#include <limits>
#include <vector>

namespace pairvote {

namespace {

double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 500;
  constexpr double kEpsilon = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) {
    d = kTiny;
  }
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) {
      d = kTiny;
    }
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) {
      c = kTiny;
    }
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) {
      d = kTiny;
    }
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) {
      c = kTiny;
    }
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEpsilon) {
      return h;
    }
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) {
    return 0.0;
  }
  if (x >= 1.0) {
    return 1.0;
  }
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
  const double x = df / (df + t * t);
  const double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, x);
  return t >= 0.0 ? 1.0 - tail : tail;
}

std::string_view to_string(TTestStatus status) {
  switch (status) {
    case TTestStatus::ok:
      return "ok";
    case TTestStatus::zero_variance:
      return "zero-variance";
    case TTestStatus::unavailable:
      return "unavailable";
  }
  return "?";
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ExperimentError(fmt::format("paired t-test needs equal lengths, got {} and {}", a.size(), b.size()));
  }
  if (a.size() < 2) {
    throw ExperimentError("paired t-test needs at least two pairs");
  }
  const auto n = a.size();
  std::vector<double> diff(n);
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    diff[i] = a[i] - b[i];
    mean += diff[i];
  }
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (const double d : diff) {
    ss += (d - mean) * (d - mean);
  }
  TTestResult result;
  result.n = n;
  result.mean_difference = mean;
  result.sd_difference = std::sqrt(ss / static_cast<double>(n - 1));
  result.df = static_cast<double>(n - 1);
  // differences such as 0.8-0.6 and 0.7-0.5 differ in the last bits only
  const double noise_floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(mean));
  if (result.sd_difference <= noise_floor) {
    result.status = TTestStatus::zero_variance;
    result.sd_difference = 0.0;
    result.t = 0.0;
    result.p_value = 1.0;
    result.significant = false;
    return result;
  }
  result.status = TTestStatus::ok;
  result.t = mean / (result.sd_difference / std::sqrt(static_cast<double>(n)));
  result.p_value = incomplete_beta(0.5 * result.df, 0.5, result.df / (result.df + result.t * result.t));
  result.significant = result.p_value < kSignificanceLevel;
  return result;
}

}  // namespace pairvote
