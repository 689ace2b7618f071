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

#include "mipdive/branch_bound.hpp"
#include "mipdive/generators.hpp"
#include "mipdive/properties.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace mipdive;

TEST_CASE("feasible completion basics", "[properties]") {
  MipInstance inst = gen_set_cover(4, 6, 0.3, 3);
  const auto opt = oracles::enumerate_optimum(inst);
  REQUIRE(opt.feasible);

  SECTION("the empty subset holds on a feasible instance") {
    CHECK(property_feasible_completion(inst, opt.best, {}));
  }
  SECTION("a violating fixed value with no slack fails") {
    MipInstance tight = testutil::make_binary("t", {0.0}, {{1.0}}, {0.0});
    Assignment one{{1.0}};
    CHECK_FALSE(property_feasible_completion(tight, one, {0}));
  }
  SECTION("continuous variables are completed through the LP") {
    // One binary, one continuous: x1 + y <= 1, y >= 0.4 forced via -y <= -0.4.
    MipInstance mixed = mipdive::make_instance(
        "mixed", 2, 2, {0.0, 0.0}, {{0, 0, 1.0}, {0, 1, 1.0}, {1, 1, -1.0}},
        {1.0, -0.4}, {true, false}, {0.0, 0.0}, {1.0, 1.0});
    Assignment x{{1.0, 0.0}};
    CHECK_FALSE(property_feasible_completion(mixed, x, {0}));  // y needs 0.4
    Assignment x0{{0.0, 0.0}};
    CHECK(property_feasible_completion(mixed, x0, {0}));
  }
}

TEST_CASE("completion agrees with the solver on every subset", "[properties][oracle]") {
  MipInstance inst = gen_set_cover(4, 6, 0.3, 12);
  const auto opt = oracles::enumerate_optimum(inst);
  REQUIRE(opt.feasible);
  const auto universe = inst.discrete_indices();
  for (uint32_t bits = 0; bits < (1u << universe.size()); ++bits) {
    std::vector<int> subset;
    for (size_t k = 0; k < universe.size(); ++k)
      if (bits & (1u << k)) subset.push_back(universe[k]);
    const bool completion = property_feasible_completion(inst, opt.best, subset);
    const PartialAssignment pa = partial_from_assignment(inst, subset, opt.best);
    const SolveTrace t =
        solve_mip(fix_variables(inst, pa), 5.0, SolveMode::kFirstFeasible);
    CHECK(completion == t.has_incumbent());
  }
}

TEST_CASE("completability is monotone decreasing along chains",
          "[properties][lemma]") {
  for (uint64_t seed : {1ull, 4ull, 9ull}) {
    MipInstance inst = gen_set_cover(4, 8, 0.25, seed);
    const auto opt = oracles::enumerate_optimum(inst);
    REQUIRE(opt.feasible);
    const ChainCheckResult res =
        check_feasible_completion_monotone(inst, opt.best);
    CHECK(res.pairs_checked > 0);
    CHECK(res.violations == 0);
  }
}

TEST_CASE("the LP criterion grows along chains inside the feasible region",
          "[properties][lemma]") {
  for (uint64_t seed : {2ull, 6ull}) {
    MipInstance inst = gen_set_cover(4, 8, 0.25, seed);
    const auto opt = oracles::enumerate_optimum(inst);
    REQUIRE(opt.feasible);
    const LpResult root = solve_lp(inst);
    REQUIRE(root.status == LpStatus::kOptimal);
    const double kappa = root.objective + 0.3 * (opt.objective - root.objective);
    const ChainCheckResult res = check_lpsat_monotone(inst, opt.best, kappa);
    CHECK(res.pairs_checked > 0);
    CHECK(res.violations == 0);
  }
}

TEST_CASE("interval of certainty shows up empirically", "[properties]") {
  // A family where both 50%-crossings exist: the completion frequency falls
  // with coverage while the LP criterion frequency rises.
  MipInstance inst = gen_set_cover(5, 10, 0.3, 41);
  const auto opt = oracles::enumerate_optimum(inst);
  REQUIRE(opt.feasible);
  const LpResult root = solve_lp(inst);
  const double kappa = root.objective + 0.5 * (opt.objective - root.objective);

  // Use a deliberately imperfect value proposal so high coverage breaks
  // feasibility: flip the optimum on two columns.
  Assignment x = opt.best;
  x.values[0] = 1.0 - x.values[0];
  x.values[5] = 1.0 - x.values[5];

  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(i / 20.0);
  const auto feas = property_frequency_curve(
      inst, x, grid, 400, 7,
      [&](const std::vector<int>& s) {
        return property_feasible_completion(inst, x, s);
      });
  const auto lpsat = property_frequency_curve(
      inst, x, grid, 400, 8,
      [&](const std::vector<int>& s) {
        return property_lpsat(inst, x, s, kappa) &&
               property_feasible_completion(inst, x, s);
      });
  const auto p0 = crossing_point(feas, /*falling=*/true);
  if (!p0.has_value()) {
    SUCCEED("no falling crossing on this draw; nothing to assert");
    return;
  }
  // Frequency of the intersection at the midpoint of [q0, p0] must beat the
  // endpoint minimum when both thresholds exist.
  const auto q0 = crossing_point(lpsat, /*rising=*/false);
  if (!q0.has_value() || !(q0 < p0)) {
    SUCCEED("no ordered pair of crossings on this draw");
    return;
  }
  const auto freq_at = [&](double rho) {
    const auto c = property_frequency_curve(
        inst, x, {rho}, 400, 9,
        [&](const std::vector<int>& s) {
          return property_feasible_completion(inst, x, s) &&
                 property_lpsat(inst, x, s, kappa);
        });
    return c.frequency[0];
  };
  const double mid = 0.5 * (*q0 + *p0);
  CHECK(freq_at(mid) >= std::min(freq_at(*q0), freq_at(*p0)));
}

TEST_CASE("BCE descent lands on the target mean", "[properties]") {
  SECTION("mean 0.6 from a five-element batch") {
    const double w = bce_minimizer_descent({1, 1, 1, 0, 0}, 10000, 0.05);
    CHECK_THAT(w, Catch::Matchers::WithinAbs(0.6, 1e-4));
  }
  SECTION("extreme means") {
    CHECK_THAT(bce_minimizer_descent({1, 0, 0, 0, 0, 0, 0, 0, 0, 0}, 10000, 0.05),
               Catch::Matchers::WithinAbs(0.1, 1e-4));
    CHECK_THAT(bce_minimizer_descent({1, 1, 1, 1, 1, 1, 1, 1, 1, 0}, 10000, 0.05),
               Catch::Matchers::WithinAbs(0.9, 1e-4));
  }
}
