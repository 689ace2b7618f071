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

#include "mipdive/experiments.hpp"
#include "mipdive/generators.hpp"

using namespace mipdive;

namespace {

std::vector<MipInstance> family(uint64_t base_seed, int count) {
  std::vector<MipInstance> out;
  for (int i = 0; i < count; ++i)
    out.push_back(gen_set_cover(6, 12, 0.25, base_seed + i));
  return out;
}

ModelParams quick_model(const std::vector<MipInstance>& instances) {
  const auto examples = collect_targets(instances, 1.0);
  return train_nd(examples, 50, 3e-3, 7).params;
}

}  // namespace

TEST_CASE("sweep_cutoff covers the grid and degenerates correctly",
          "[experiments]") {
  const auto instances = family(500, 4);
  const ModelParams model = quick_model(instances);
  std::vector<ScoredInstance> scored;
  for (const auto& inst : instances) scored.push_back(score_instance(model, inst));

  ExperimentOptions opts;
  opts.budget = 0.5;

  SECTION("gamma of one with no clamped outputs matches the unfixed baseline") {
    bool any_clamped = false;
    for (const auto& s : scored)
      for (double p : s.output.probs)
        if (p <= clamped_sigmoid(-kSigmoidClamp) ||
            p >= clamped_sigmoid(kSigmoidClamp))
          any_clamped = true;
    REQUIRE_FALSE(any_clamped);
    const auto rows = sweep_cutoff(scored, {1.0}, opts);
    REQUIRE(rows.size() == 1);
    // No variable selected, so the sub-MIP is the original feasible instance.
    CHECK(rows[0].feasible_ratio == 1.0);
  }
  SECTION("every grid point produces a row") {
    const std::vector<double> gammas = {0.5, 0.7, 0.9, 0.99, 1.0};
    const auto rows = sweep_cutoff(scored, gammas, opts);
    REQUIRE(rows.size() == gammas.size());
    for (size_t i = 0; i < gammas.size(); ++i) CHECK(rows[i].gamma == gammas[i]);
    const std::string csv = cutoff_csv(rows);
    CHECK(csv.rfind("gamma,feasible_ratio,mean_pb\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + (long)rows.size());
  }
}

TEST_CASE("sweep_coverage reports the zero-coverage column as fully feasible",
          "[experiments]") {
  const auto instances = family(600, 3);
  const ModelParams model = quick_model(instances);
  ExperimentOptions opts;
  opts.budget = 0.5;
  const auto rows = sweep_coverage(model, {{1, instances}}, {0.0, 0.5},
                                   SubsetStrategy::kBernoulliRandom, 4, opts);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].rho == 0.0);
  CHECK(rows[0].feasible_ratio == 1.0);
  const std::string csv = coverage_csv(rows);
  CHECK(csv.rfind("scale,rho,feasible_ratio,mean_pb\n", 0) == 0);
}

TEST_CASE("an overfit model stays feasible at full coverage", "[experiments]") {
  // Single instance trained to convergence: the rounded vector reproduces
  // the target solution, so fixing everything keeps the instance feasible.
  MipInstance inst = gen_set_cover(5, 10, 0.3, 611);
  const auto examples = collect_targets({inst}, 1.0);
  REQUIRE(examples.size() == 1);
  const ModelParams model = train_nd(examples, 400, 1e-2, 3).params;
  ExperimentOptions opts;
  opts.budget = 1.0;
  const auto rows =
      sweep_coverage(model, {{1, {inst}}}, {1.0},
                     SubsetStrategy::kConfidenceTopK, 1, opts);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].feasible_ratio == 1.0);
}

TEST_CASE("benchmark internal consistency", "[experiments][bench]") {
  BenchConfig cfg;
  cfg.validation = family(700, 3);
  cfg.test = family(710, 4);
  cfg.nd_model = quick_model(cfg.validation);
  cfg.tal_model = cfg.nd_model;  // heads untrained; probe counting still applies
  cfg.budget = 0.4;
  cfg.reference_budget = 2.0;
  cfg.gamma_grid = {0.6, 0.8, 0.9, 0.95};
  cfg.fixed_clock_tick = 1e-4;
  const BenchResult result = run_benchmark(cfg);

  SECTION("row shape and totals") {
    CHECK(result.rows.size() == cfg.test.size() * 4);
    for (const MetricsRow& r : result.rows) {
      if (r.og_pct) CHECK(*r.og_pct >= 0.0);
      if (r.pi) CHECK(*r.pi >= -1e-9);
    }
  }
  SECTION("tal issues exactly one sub-MIP per test instance") {
    for (long probes : result.tal_probe_counts) CHECK(probes == 1);
  }
  SECTION("auto-tune probe budget respects the contract") {
    const long bound =
        static_cast<long>(cfg.gamma_grid.size()) +
        static_cast<long>(std::ceil(std::log2(cfg.gamma_grid.size())));
    for (long probes : result.tune_probe_counts) CHECK(probes <= bound);
  }
  SECTION("baseline PI matches a recomputation from its trace") {
    // Rows alone cannot be replayed, so re-run the baseline under the same
    // fixed clock and compare against the CSV value.
    ExperimentOptions opts;
    opts.budget = cfg.budget;
    opts.fixed_clock_tick = cfg.fixed_clock_tick;
    for (size_t i = 0; i < cfg.test.size(); ++i) {
      const MetricsRow& row = result.rows[i * 4];
      REQUIRE(row.method == "baseline");
      DeterministicClock clock(*cfg.fixed_clock_tick);
      MipSolveOptions sopts;
      sopts.clock = &clock;
      const SolveTrace t =
          solve_mip(cfg.test[i], cfg.budget, SolveMode::kOptimize, sopts);
      // Reference for this instance sits in the summary table.
      const auto& refs = result.summary.at("references");
      double ref = 0.0;
      for (const auto& r : refs)
        if (r.at("instance") == cfg.test[i].name) ref = r.at("reference").get<double>();
      Assignment all_upper{cfg.test[i].upper};
      const auto cap = check_feasible(cfg.test[i], all_upper, 1e-9)
                           ? std::optional<double>(
                                 objective_value(cfg.test[i], all_upper))
                           : std::nullopt;
      const auto pi = primal_integral(t, cfg.budget, ref, cap);
      REQUIRE(pi.has_value());
      REQUIRE(row.pi.has_value());
      CHECK_THAT(*row.pi, Catch::Matchers::WithinAbs(*pi, 1e-9));
    }
  }
  SECTION("fixed-clock reruns are byte-identical") {
    const BenchResult again = run_benchmark(cfg);
    CHECK(again.csv == result.csv);
  }
  SECTION("worker count does not change the artifact") {
    BenchConfig par = cfg;
    par.workers = 4;
    const BenchResult parallel = run_benchmark(par);
    CHECK(parallel.csv == result.csv);
  }
}
