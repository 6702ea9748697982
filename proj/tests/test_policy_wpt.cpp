// Copyright 2026 The wpcnsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "support.hpp"
#include "wpcn/error.hpp"
#include "wpcn/policy_wpt.hpp"
#include "wpcn/simd/kernels.hpp"

using namespace wpcn;

namespace {

Topology preset_topology() {
  Topology t;
  t.receivers = {{1.2, 1.2}, {2.0 * std::numbers::sqrt2, 0.0}};
  return t;
}

}  // namespace

TEST_CASE("sum_channel") {
  std::mt19937_64 rng(1);
  const CMatrix a = gram_cols(testing::random_matrix(2, 5, rng));
  const CMatrix b = gram_cols(testing::random_matrix(2, 5, rng));
  const CMatrix one[] = {a};
  CHECK(sum_channel(one) == a);
  const CMatrix ids[] = {CMatrix::identity(3), CMatrix::identity(3)};
  CHECK(sum_channel(ids) == 2.0 * CMatrix::identity(3));
  const CMatrix two[] = {a, b};
  const CMatrix s = sum_channel(two);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) CHECK(s(i, j) == a(i, j) + b(i, j));
  }
  const CMatrix bad[] = {a, CMatrix::identity(2)};
  CHECK_THROWS_AS(sum_channel(bad), Error);
}

TEST_CASE("optimal_decide") {
  const BeamDecision d = optimal_decide(CMatrix::identity(3), 0.0, 2.0);
  CHECK(d.transmit);
  CHECK(d.tx_power == doctest::Approx(2.0));
  CHECK_FALSE(optimal_decide(CMatrix::identity(3), 1e300, 2.0).transmit);
  const double dg[] = {2.0, 1.0};
  const CMatrix w = CMatrix::diagonal(dg);
  const BeamDecision e = optimal_decide(w, 1.0, 2.0);
  REQUIRE(e.transmit);
  CHECK(std::abs(e.x[1]) < 1e-12);
  CHECK(quadratic_form(w, e.x) == doctest::Approx(4.0));
  CHECK(silent_beam().x.empty());
}

TEST_CASE("mdpp_decide") {
  WptConfig cfg;
  cfg.v = 10.0;
  const double dg[] = {3.0, 1.0};
  const CMatrix w = CMatrix::diagonal(dg);
  CHECK(mdpp_decide(w, WptQueue{0.0}, cfg).transmit);
  const BeamDecision silent = mdpp_decide(w, WptQueue{31.0}, cfg);
  CHECK_FALSE(silent.transmit);
  CHECK(silent.tx_power == 0.0);
  // Z = V·λ_max exactly: inclusive
  CHECK(mdpp_decide(TopEigen{3.0, {1.0, 0.0}}, WptQueue{30.0}, cfg).transmit);
}

TEST_CASE("property: direction is scale-equivariant") {
  std::mt19937_64 rng(12);
  const CMatrix w = gram_cols(testing::random_matrix(3, 8, rng));
  const BeamDecision a = optimal_decide(w, 0.0, 2.0);
  const BeamDecision b = optimal_decide(7.5 * w, 0.0, 2.0);
  CHECK(std::abs(simd::dotc(a.x, b.x)) == doctest::Approx(2.0).epsilon(1e-10));
  // decision flips only through the threshold
  const double lam = top_eigen(w).value;
  CHECK(optimal_decide(w, lam * 0.999, 2.0).transmit);
  CHECK_FALSE(optimal_decide(w, lam * 1.001, 2.0).transmit);
  CHECK(optimal_decide(7.5 * w, lam * 1.001, 2.0).transmit);
}

TEST_CASE("update_queue") {
  CHECK(update_queue({0.0}, 2.0, 0.4).backlog == doctest::Approx(1.6));
  CHECK(update_queue({0.1}, 0.0, 0.4).backlog == 0.0);
  CHECK(update_queue({5.0}, 0.4, 0.4).backlog == doctest::Approx(5.0));
}

TEST_CASE("WptConfig validation") {
  WptConfig c;
  CHECK_NOTHROW(c.validate());
  c.p_avg = 3.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = WptConfig{};
  c.v = 0.0;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("threshold calibration") {
  const Topology t = preset_topology();
  Rng rng = make_rng(3, Stream::kCalibration);
  const auto lambdas = sample_lambda_max(t, 2000, rng);
  const double lo = *std::min_element(lambdas.begin(), lambdas.end());
  const double hi = *std::max_element(lambdas.begin(), lambdas.end());
  CHECK(threshold_from_samples(lambdas, 2.0, 2.0) == lo);
  CHECK(threshold_from_samples(lambdas, 1e-9, 2.0) == hi);

  WptConfig cfg;
  CHECK_THROWS_AS(calibrate_threshold(t, cfg, 999, rng), Error);
}

TEST_CASE("calibrated threshold hits the duty cycle on fresh slots") {
  const Topology t = preset_topology();
  WptConfig cfg;
  Rng r1 = make_rng(11, Stream::kCalibration);
  Rng r2 = make_rng(11, Stream::kCalibration);
  const double thr = calibrate_threshold(t, cfg, 100000, r1);
  CHECK(thr == calibrate_threshold(t, cfg, 100000, r2));
  Rng fresh = make_rng(12, Stream::kChannel);
  const auto lambdas = sample_lambda_max(t, 20000, fresh);
  double hits = 0.0;
  for (double l : lambdas) hits += l >= thr;
  CHECK(hits / 20000.0 == doctest::Approx(0.2).epsilon(0.05));
}
