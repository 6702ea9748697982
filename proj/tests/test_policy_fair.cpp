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
#include <random>

#include "oracles.hpp"
#include "support.hpp"
#include "wpcn/error.hpp"
#include "wpcn/policy_fair.hpp"

using namespace wpcn;

TEST_CASE("weighted_channel") {
  std::mt19937_64 rng(2);
  const CMatrix w1 = gram_cols(testing::random_matrix(2, 4, rng));
  const CMatrix w2 = gram_cols(testing::random_matrix(2, 4, rng));
  const CMatrix ws[] = {w1, w2};
  FairQueueSet q(2);
  CHECK(weighted_channel(ws, q).frobenius_norm() == 0.0);
  q.fairness[0] = 1.0;
  CHECK(weighted_channel(ws, q) == w1);
  q.fairness = {0.3, 1.2};
  q.min_power = {0.5, 0.1};
  q.avg_power = 0.7;
  const CMatrix got = weighted_channel(ws, q);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      const cplx want = 0.8 * w1(i, j) + 1.3 * w2(i, j) - (i == j ? 0.7 : 0.0);
      CHECK(std::abs(got(i, j) - want) < 1e-14);
    }
  }
  FairQueueSet bad(3);
  CHECK_THROWS_AS(weighted_channel(ws, bad), Error);
}

TEST_CASE("property: raising a receiver's backlog raises its weight") {
  std::mt19937_64 rng(6);
  const CMatrix w1 = gram_cols(testing::random_matrix(2, 5, rng));
  const CMatrix w2 = gram_cols(testing::random_matrix(2, 5, rng));
  const CMatrix ws[] = {w1, w2};
  FairQueueSet q(2);
  q.fairness = {1.0, 1.0};
  const CVector x = testing::random_vector(5, rng);
  double prev = quadratic_form(weighted_channel(ws, q), x);
  for (int step = 0; step < 5; ++step) {
    q.min_power[1] += 0.5;
    const double now = quadratic_form(weighted_channel(ws, q), x);
    CHECK(now - prev == doctest::Approx(0.5 * quadratic_form(w2, x)).epsilon(1e-10));
    CHECK(now > prev);
    prev = now;
  }
}

TEST_CASE("qf_decide") {
  CHECK_FALSE(qf_decide(-1.0 * CMatrix::identity(3), 2.0).transmit);
  const double d[] = {1.0, -1.0};
  const BeamDecision b = qf_decide(CMatrix::diagonal(d), 2.0);
  REQUIRE(b.transmit);
  CHECK(std::abs(b.x[0]) == doctest::Approx(std::sqrt(2.0)));
  CHECK(std::abs(b.x[1]) < 1e-12);
  const BeamDecision z = qf_decide(CMatrix(3, 3), 2.0);
  CHECK(z.transmit);
  CHECK(z.tx_power == doctest::Approx(2.0));
}

TEST_CASE("solve_gamma closed-form examples") {
  const double g1[] = {1.0};
  CHECK(solve_gamma(Utility::proportional_fair(), 1.0, g1, 2.0)[0] == doctest::Approx(1.0));
  const double g0[] = {0.0};
  CHECK(solve_gamma(Utility::proportional_fair(), 1.0, g0, 2.0)[0] == 2.0);
  const double gm[] = {0.3, 0.3};
  const auto mm = solve_gamma(Utility::max_min(), 1.0, gm, 2.0);
  CHECK(mm[0] == 2.0);
  CHECK(mm[1] == 2.0);
  const double heavy[] = {0.7, 0.7};
  CHECK(solve_gamma(Utility::max_min(), 1.0, heavy, 2.0)[0] == 0.0);
  const double gs[] = {0.5, 2.0, 1.0};
  const auto s = solve_gamma(Utility::sum(), 1.0, gs, 2.0);
  CHECK(s == std::vector<double>{2.0, 0.0, 2.0});
  const double ga[] = {4.0};
  CHECK(solve_gamma(Utility::alpha_fair(2.0), 1.0, ga, 2.0)[0] == doctest::Approx(0.5));
  CHECK_THROWS_AS(solve_gamma(Utility::alpha_fair(-1.0), 1.0, ga, 2.0), Error);
  CHECK_THROWS_AS(solve_gamma(Utility::sum(), 1.0, ga, 0.0), Error);
}

TEST_CASE("property: solve_gamma matches grid search for every utility, K <= 3") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ug(0.0, 3.0);
  const Utility kinds[] = {Utility::sum(), Utility::proportional_fair(), Utility::max_min(),
                           Utility::alpha_fair(0.5), Utility::alpha_fair(2.0)};
  for (const Utility& u : kinds) {
    for (std::size_t k = 1; k <= 3; ++k) {
      for (int trial = 0; trial < 3; ++trial) {
        std::vector<double> g(k);
        for (auto& x : g) x = ug(rng);
        const double v = 1.0 + trial;
        const double upper = 2.0;
        const std::size_t steps = k == 3 ? 100 : 1000;
        const auto got = solve_gamma(u, v, g, upper);
        const auto grid = testing::grid_search_gamma(u, v, g, upper, steps);
        const double h = upper / steps;
        CHECK(gamma_objective(u, v, g, got) <= grid.objective + 1e-9 * v);
        for (std::size_t i = 0; i < k; ++i) CHECK(std::abs(got[i] - grid.gamma[i]) <= h * 1.000001);
      }
    }
  }
}

TEST_CASE("generic solver agrees with the closed forms") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ug(0.2, 3.0);
  GenericUtility pf{[](std::span<const double> x) {
                      double s = 0.0;
                      for (double v : x) s += std::log(v);
                      return s;
                    },
                    [](std::span<const double> x, std::span<double> out) {
                      for (std::size_t i = 0; i < x.size(); ++i) out[i] = 1.0 / x[i];
                    }};
  for (int t = 0; t < 5; ++t) {
    std::vector<double> g{ug(rng), ug(rng)};
    const auto ref = solve_gamma(Utility::proportional_fair(), 1.0, g, 2.0);
    const auto got = solve_gamma_generic(pf, 1.0, g, 2.0);
    const double fr = gamma_objective(Utility::proportional_fair(), 1.0, g, ref);
    const double fg = gamma_objective(Utility::proportional_fair(), 1.0, g, got);
    CHECK(fg <= fr + 1e-6);
  }
}

TEST_CASE("update_fair_queues") {
  FairConfig cfg;
  cfg.p_avg = 0.4;
  FairQueueSet q(2);
  const double zero[] = {0.0, 0.0};
  const FairQueueSet same = update_fair_queues(q, zero, zero, 0.0, cfg);
  CHECK(same.fairness == q.fairness);
  CHECK(same.avg_power == 0.0);

  const double gamma[] = {1.0, 0.0};
  const double recv[] = {0.2, 0.5};
  cfg.p_min = 0.3;
  const FairQueueSet n = update_fair_queues(q, gamma, recv, 2.0, cfg);
  CHECK(n.fairness[0] == doctest::Approx(0.8));
  CHECK(n.fairness[1] == 0.0);
  CHECK(n.min_power[0] == doctest::Approx(0.1));
  CHECK(n.min_power[1] == 0.0);
  CHECK(n.avg_power == doctest::Approx(1.6));

  FairQueueSet z(1);
  z.avg_power = 1.0;
  const double g1[] = {0.0};
  cfg.p_min = 0.0;
  CHECK(update_fair_queues(z, g1, g1, 0.0, cfg).avg_power == doctest::Approx(0.6));
}

TEST_CASE("utility parsing") {
  CHECK(Utility::parse("mmf").kind == UtilityKind::kMaxMin);
  CHECK(Utility::parse("max-min").kind == UtilityKind::kMaxMin);
  CHECK(Utility::parse("proportional").kind == UtilityKind::kProportionalFair);
  CHECK(Utility::parse("none").kind == UtilityKind::kSum);
  CHECK(Utility::parse("alpha", 3.0).alpha == 3.0);
  CHECK_THROWS_AS(Utility::parse("bogus"), Error);
}
