// Copyright (2026) the mipdive project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <catch2/catch_amalgamated.hpp>

#include "mipdive/generators.hpp"
#include "mipdive/rng.hpp"
#include "mipdive/simplex.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace mipdive;

TEST_CASE("simplex solves the one-variable relaxation", "[simplex]") {
  MipInstance inst = testutil::make_lp("t", {-1.0}, {{1.0}}, {1.0}, {0.0}, {1.0});
  const LpResult r = solve_lp(inst);
  REQUIRE(r.status == LpStatus::kOptimal);
  CHECK_THAT(r.solution[0], Catch::Matchers::WithinAbs(1.0, 1e-9));
  CHECK_THAT(r.objective, Catch::Matchers::WithinAbs(-1.0, 1e-9));
}

TEST_CASE("simplex detects infeasibility", "[simplex]") {
  // x1 <= -1 with x1 >= 0
  MipInstance inst = testutil::make_lp("inf", {0.0}, {{1.0}}, {-1.0}, {0.0}, {kInf});
  CHECK(solve_lp(inst).status == LpStatus::kInfeasible);
}

TEST_CASE("simplex detects unboundedness", "[simplex]") {
  // min -x1 with x1 >= 0 and no restraining row
  MipInstance inst = testutil::make_lp("unb", {-1.0}, {{-1.0}}, {0.0}, {0.0}, {kInf});
  CHECK(solve_lp(inst).status == LpStatus::kUnbounded);
}

TEST_CASE("iteration cap reports kIterationLimit", "[simplex]") {
  MipInstance inst = gen_set_cover(8, 12, 0.3, 99);
  SimplexOptions opts;
  opts.iteration_cap = 1;
  CHECK(solve_lp(inst, opts).status == LpStatus::kIterationLimit);
}

TEST_CASE("random set-cover LP matches exhaustive vertex enumeration",
          "[simplex][oracle]") {
  // The 8x6 relaxation from the generator, relaxed to its box.
  MipInstance inst = gen_set_cover(6, 8, 0.25, 4242);
  MipInstance relax = inst;
  relax.integrality.assign(relax.num_vars, false);
  // Vertex enumeration over 8 variables is too big only when rows blow up;
  // here h = m + 2n and n = 8, still fine.
  const auto oracle = oracles::enumerate_lp_vertices(relax);
  const LpResult r = solve_lp(relax);
  REQUIRE(oracle.feasible);
  REQUIRE(r.status == LpStatus::kOptimal);
  CHECK_THAT(r.objective, Catch::Matchers::WithinAbs(oracle.objective, 1e-6));
}

TEST_CASE("random boxed LPs agree with the enumeration oracle", "[simplex][oracle]") {
  SplitMix64 rng(7);
  int optimal = 0;
  int infeasible = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(4));
    const int m = 1 + static_cast<int>(rng.below(5));
    std::vector<double> c(n), b(m), lb(n, 0.0), ub(n);
    std::vector<std::vector<double>> rows(m, std::vector<double>(n, 0.0));
    for (int j = 0; j < n; ++j) {
      c[j] = std::floor(rng.uniform(-5.0, 5.0));
      ub[j] = 1.0 + rng.below(3);
    }
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j)
        if (rng.uniform01() < 0.6) rows[i][j] = std::floor(rng.uniform(-3.0, 4.0));
      b[i] = std::floor(rng.uniform(-2.0, 6.0));
    }
    MipInstance inst = testutil::make_lp("rand", c, rows, b, lb, ub);
    const auto oracle = oracles::enumerate_lp_vertices(inst);
    const LpResult r = solve_lp(inst);
    if (oracle.feasible) {
      REQUIRE(r.status == LpStatus::kOptimal);
      CHECK_THAT(r.objective, Catch::Matchers::WithinAbs(oracle.objective, 1e-6));
      ++optimal;
    } else {
      REQUIRE(r.status == LpStatus::kInfeasible);
      ++infeasible;
    }
  }
  // Make sure the corpus exercised both outcomes.
  CHECK(optimal > 5);
  CHECK(infeasible > 2);
}

TEST_CASE("weak duality against integer-feasible points", "[simplex][property]") {
  for (uint64_t seed : {1ull, 2ull, 3ull}) {
    MipInstance inst = gen_set_cover(5, 8, 0.3, seed);
    const LpResult lp = solve_lp(inst);
    REQUIRE(lp.status == LpStatus::kOptimal);
    const auto opt = oracles::enumerate_optimum(inst);
    REQUIRE(opt.feasible);
    CHECK(lp.objective <= opt.objective + 1e-9);
  }
}

TEST_CASE("fixing more variables never lowers the LP optimum",
          "[simplex][property]") {
  MipInstance inst = gen_set_cover(5, 9, 0.3, 11);
  const auto opt = oracles::enumerate_optimum(inst);
  REQUIRE(opt.feasible);
  const PartialAssignment pa1 =
      partial_from_assignment(inst, {0, 3}, opt.best);
  const PartialAssignment pa2 =
      partial_from_assignment(inst, {0, 3, 5, 7}, opt.best);
  const LpResult l0 = solve_lp(inst);
  const LpResult l1 = solve_lp(fix_variables(inst, pa1));
  const LpResult l2 = solve_lp(fix_variables(inst, pa2));
  REQUIRE(l0.status == LpStatus::kOptimal);
  REQUIRE(l1.status == LpStatus::kOptimal);
  REQUIRE(l2.status == LpStatus::kOptimal);
  CHECK(l0.objective <= l1.objective + 1e-9);
  CHECK(l1.objective <= l2.objective + 1e-9);
}

TEST_CASE("a degenerate LP still terminates", "[simplex]") {
  // Classic cycling-prone shape: many ties at zero.
  MipInstance inst = testutil::make_lp(
      "degen", {-0.75, 150.0, -0.02, 6.0},
      {{0.25, -60.0, -0.04, 9.0}, {0.5, -90.0, -0.02, 3.0}, {0.0, 0.0, 1.0, 0.0}},
      {0.0, 0.0, 1.0}, {0.0, 0.0, 0.0, 0.0}, {kInf, kInf, kInf, kInf});
  const LpResult r = solve_lp(inst);
  REQUIRE(r.status == LpStatus::kOptimal);
  CHECK_THAT(r.objective, Catch::Matchers::WithinAbs(-0.05, 1e-9));
}
