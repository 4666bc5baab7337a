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
#include "pairvote/stats.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace pairvote {
namespace {

TEST_CASE("incomplete beta agrees with Boost") {
  for (const double a : {0.5, 1.0, 2.5, 7.0, 30.0}) {
    for (const double b : {0.5, 1.0, 3.0, 12.0}) {
      for (const double x : {0.0, 1e-6, 0.05, 0.3, 0.5, 0.77, 0.999, 1.0}) {
        CAPTURE(a);
        CAPTURE(b);
        CAPTURE(x);
        CHECK(incomplete_beta(a, b, x) == doctest::Approx(boost::math::ibeta(a, b, x)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("t distribution agrees with Boost") {
  for (const double df : {1.0, 2.0, 4.0, 9.0, 30.0, 200.0}) {
    const boost::math::students_t dist(df);
    for (const double t : {-12.0, -3.0, -1.0, -0.1, 0.0, 0.4, 2.0, 5.5}) {
      CHECK(student_t_cdf(t, df) == doctest::Approx(boost::math::cdf(dist, t)).epsilon(1e-12));
    }
  }
}

TEST_CASE("two degrees of freedom have a closed form") {
  // F(t) = 1/2 + t / (2 sqrt(t^2 + 2)), so the two-sided p is 1 - t / sqrt(t^2 + 2).
  for (const double t : {0.5, 1.0, 3.0, 10.0}) {
    CHECK(1.0 - 2.0 * (1.0 - student_t_cdf(t, 2.0)) == doctest::Approx(t / std::sqrt(t * t + 2.0)).epsilon(1e-13));
  }
}

TEST_CASE("paired t statistic matches a hand calculation") {
  const std::vector<double> a{0.8, 0.7, 0.9};
  const std::vector<double> b{0.6, 0.65, 0.7};
  // d = (0.2, 0.05, 0.2), mean 0.15, sd = sqrt(0.015 / 2), t = 0.15 / (sd / sqrt(3)) = 3
  const auto r = paired_t_test(a, b);
  CHECK(r.status == TTestStatus::ok);
  CHECK(r.n == 3);
  CHECK(r.df == 2.0);
  CHECK(std::abs(r.mean_difference - 0.15) < 1e-12);
  CHECK(std::abs(r.t - 3.0) < 1e-10);
  CHECK(std::abs(r.p_value - (1.0 - 3.0 / std::sqrt(11.0))) < 1e-10);
  CHECK_FALSE(r.significant);
  const auto reversed = paired_t_test(b, a);
  CHECK(std::abs(reversed.t + 3.0) < 1e-10);
  CHECK(reversed.p_value == doctest::Approx(r.p_value).epsilon(1e-14));
}

TEST_CASE("significant difference over five folds") {
  const std::vector<double> a{0.74, 0.71, 0.78, 0.73, 0.76};
  const std::vector<double> b{0.65, 0.66, 0.67, 0.62, 0.66};
  const auto r = paired_t_test(a, b);
  CHECK(r.status == TTestStatus::ok);
  const boost::math::students_t dist(4.0);
  CHECK(r.p_value == doctest::Approx(2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t)))).epsilon(1e-12));
  CHECK(r.significant);
}

TEST_CASE("zero variance differences are flagged") {
  const std::vector<double> a{0.8, 0.7, 0.9, 0.75, 0.85};
  const std::vector<double> b{0.6, 0.5, 0.7, 0.55, 0.65};
  const auto constant = paired_t_test(a, b);
  CHECK(constant.status == TTestStatus::zero_variance);
  CHECK_FALSE(constant.significant);
  const auto same = paired_t_test(a, a);
  CHECK(same.status == TTestStatus::zero_variance);
  CHECK_FALSE(same.significant);
  CHECK(to_string(TTestStatus::zero_variance) == "zero-variance");
}

TEST_CASE("invalid inputs") {
  const std::vector<double> three{1, 2, 3};
  const std::vector<double> two{1, 2};
  const std::vector<double> one{1};
  CHECK_THROWS(paired_t_test(three, two));
  CHECK_THROWS(paired_t_test(one, one));
}

}  // namespace
}  // namespace pairvote
