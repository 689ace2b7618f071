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
#include "mipdive/json_io.hpp"
#include "mipdive/rng.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace mipdive;

TEST_CASE("splitmix64 reference stream", "[rng]") {
  // Known output sequence for seed 0 (pins the exact state transition, so
  // ports in other languages can check against the same vector).
  SplitMix64 rng(0);
  CHECK(rng.next() == 0xE220A8397B1DCDAFULL);
  CHECK(rng.next() == 0x6E789E6AA1B965F4ULL);
  CHECK(rng.next() == 0x06C45D188009454FULL);
}

TEST_CASE("set cover: all-ones is always feasible", "[generators]") {
  for (uint64_t seed : {1ull, 7ull, 123ull}) {
    MipInstance inst = gen_set_cover(20, 40, 0.08, seed);
    Assignment ones{std::vector<double>(inst.num_vars, 1.0)};
    CHECK(check_feasible(inst, ones, 1e-9));
  }
}

TEST_CASE("set cover nonzero count stays in the repair bound", "[generators]") {
  MipInstance inst = gen_set_cover(50, 100, 0.05, 7);
  const auto nnz = static_cast<long>(inst.matrix.size());
  CHECK(nnz >= 2 * 50);
  CHECK(nnz <= static_cast<long>(std::ceil(0.05 * 50 * 100)) + 100);
}

TEST_CASE("tiny set cover optimum by brute force", "[generators][oracle]") {
  MipInstance inst = gen_set_cover(2, 2, 0.5, 3);
  // Full coverage is forced by the >=2 repair, so the optimum is the cheaper
  // single column.
  const auto oracle = oracles::enumerate_optimum(inst);
  REQUIRE(oracle.feasible);
  CHECK(oracle.objective ==
        std::min(inst.objective[0], inst.objective[1]));
  const SolveTrace t = solve_mip(inst, 5.0, SolveMode::kOptimize);
  CHECK_THAT(t.best_objective(), Catch::Matchers::WithinAbs(oracle.objective, 1e-9));
}

TEST_CASE("independent set: triangle and path shapes", "[generators]") {
  // nodes=3, affinity=2 starts from (and ends at) the triangle.
  MipInstance tri = gen_indep_set(3, 2, 1);
  const auto tri_opt = oracles::enumerate_optimum(tri);
  REQUIRE(tri_opt.feasible);
  CHECK(tri_opt.objective == -1.0);

  // A hand-built path of three nodes: edges (0,1), (1,2); optimum takes the
  // two endpoints.
  MipInstance path = testutil::make_binary(
      "path3", {-1.0, -1.0, -1.0}, {{1.0, 1.0, 0.0}, {0.0, 1.0, 1.0}},
      {1.0, 1.0});
  const auto path_opt = oracles::enumerate_optimum(path);
  CHECK(path_opt.objective == -2.0);
  const SolveTrace t = solve_mip(path, 5.0, SolveMode::kOptimize);
  CHECK_THAT(t.best_objective(), Catch::Matchers::WithinAbs(-2.0, 1e-9));
}

TEST_CASE("independent set optimum matches exhaustive search", "[generators][oracle]") {
  MipInstance inst = gen_indep_set(12, 2, 99);
  const auto oracle = oracles::enumerate_optimum(inst);
  const SolveTrace t = solve_mip(inst, 20.0, SolveMode::kOptimize);
  REQUIRE(t.status == MipStatus::kOptimal);
  CHECK_THAT(t.best_objective(), Catch::Matchers::WithinAbs(oracle.objective, 1e-9));
}

TEST_CASE("generators are deterministic in the seed", "[generators][determinism]") {
  const std::string a = write_instance_json(gen_set_cover(15, 30, 0.1, 77));
  const std::string b = write_instance_json(gen_set_cover(15, 30, 0.1, 77));
  const std::string c = write_instance_json(gen_set_cover(15, 30, 0.1, 78));
  CHECK(a == b);
  CHECK(a != c);
  const std::string d = write_instance_json(gen_indep_set(20, 4, 5));
  const std::string e = write_instance_json(gen_indep_set(20, 4, 5));
  CHECK(d == e);
}

TEST_CASE("generator parameter validation", "[generators]") {
  CHECK_THROWS_AS(gen_set_cover(0, 5, 0.1, 1), std::invalid_argument);
  CHECK_THROWS_AS(gen_set_cover(5, 4, 0.1, 1), std::invalid_argument);
  CHECK_THROWS_AS(gen_set_cover(5, 10, 1.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(gen_indep_set(3, 3, 1), std::invalid_argument);
  CHECK_THROWS_AS(gen_indep_set(5, 0, 1), std::invalid_argument);
}
