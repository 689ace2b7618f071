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
#include "mipdive/properties.hpp"
#include "mipdive/tal.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace mipdive;

namespace {

// Unit knapsack: min -sum(x) subject to sum(x) <= k over r binaries. With
// near-one probabilities the top-k fixing is feasible exactly while
// ceil(rho * r) <= k, so the feasibility threshold sits at k/r.
MipInstance unit_knapsack(int r, int k) {
  return testutil::make_binary("knapsack_r" + std::to_string(r) + "_k" +
                                   std::to_string(k),
                               std::vector<double>(r, -1.0),
                               {std::vector<double>(r, 1.0)},
                               {static_cast<double>(k)});
}

// Backbone of zeros plus a positive output bias: every variable probability
// is sigma(bias), every pooled embedding is zero, so head outputs reduce to
// their bias terms. Keeps the head dynamics analytically transparent.
ModelParams biased_value_model(double out_bias) {
  ModelParams p = zeros_like_params();
  p.out_b.data[0] = out_bias;
  return p;
}

ModelOutput fake_output(std::vector<double> probs) {
  ModelOutput out;
  out.probs = std::move(probs);
  out.discrete.resize(out.probs.size());
  std::iota(out.discrete.begin(), out.discrete.end(), 0);
  return out;
}

}  // namespace

TEST_CASE("kappa interpolates between the LP bound and the incumbent", "[tal]") {
  CHECK(kappa_criterion(0.5, 100.0, 60.0) == 80.0);
  CHECK(kappa_criterion(0.0, 100.0, 60.0) == 60.0);
  CHECK(kappa_criterion(1.0, 100.0, 60.0) == 100.0);
  CHECK_THROWS_AS(kappa_criterion(0.5, 10.0, 60.0), std::invalid_argument);
}

TEST_CASE("feasibility indicator", "[tal]") {
  MipInstance knap = unit_knapsack(10, 5);
  const ModelOutput out = fake_output(std::vector<double>(10, 0.95));

  SECTION("zero coverage on a feasible instance") {
    CHECK(indicator_feasible(knap, out, 0.0, SubsetStrategy::kConfidenceTopK,
                             0, 2.0) == 1);
  }
  SECTION("constraint-violating fixing") {
    MipInstance tight = testutil::make_binary("t", {0.0}, {{1.0}}, {0.0});
    const ModelOutput one = fake_output({0.99});
    CHECK(indicator_feasible(tight, one, 1.0, SubsetStrategy::kConfidenceTopK,
                             0, 2.0) == 0);
  }
  SECTION("agreement with exhaustive completion enumeration") {
    MipInstance inst = gen_set_cover(5, 10, 0.25, 31);
    const auto opt = oracles::enumerate_optimum(inst);
    REQUIRE(opt.feasible);
    SplitMix64 rng(8);
    std::vector<double> probs(10);
    for (double& p : probs) p = rng.uniform01();
    const ModelOutput out2 = fake_output(probs);
    for (double rho : {0.2, 0.4, 0.7, 1.0}) {
      const PartialAssignment pa =
          realize_subset(out2, rho, SubsetStrategy::kConfidenceTopK);
      Assignment x{std::vector<double>(10, 0.0)};
      for (size_t i = 0; i < pa.indices.size(); ++i)
        x.values[pa.indices[i]] = static_cast<double>(pa.values[i]);
      const bool oracle = property_feasible_completion(inst, x, pa.indices);
      CHECK(indicator_feasible_fixing(inst, pa, 5.0) == (oracle ? 1 : 0));
    }
  }
}

TEST_CASE("lpsat indicator", "[tal]") {
  MipInstance inst = gen_set_cover(4, 8, 0.3, 17);
  const LpResult root = solve_lp(inst);
  REQUIRE(root.status == LpStatus::kOptimal);
  const ModelOutput out = fake_output(std::vector<double>(8, 0.9));

  SECTION("zero coverage passes exactly at the root objective") {
    CHECK(indicator_lpsat(inst, out, 0.0, root.objective,
                          SubsetStrategy::kConfidenceTopK, 0) == 1);
    CHECK(indicator_lpsat(inst, out, 0.0, root.objective + 1.0,
                          SubsetStrategy::kConfidenceTopK, 0) == 0);
  }
  SECTION("LP-infeasible fixing gives zero") {
    MipInstance tight = testutil::make_binary("t", {0.0}, {{1.0}}, {0.0});
    const ModelOutput one = fake_output({0.99});
    CHECK(indicator_lpsat(tight, one, 1.0, -100.0,
                          SubsetStrategy::kConfidenceTopK, 0) == 0);
  }
  SECTION("agreement with the subset LP oracle") {
    for (double rho : {0.25, 0.5, 0.75}) {
      const PartialAssignment pa =
          realize_subset(out, rho, SubsetStrategy::kConfidenceTopK);
      Assignment x{std::vector<double>(8, 0.0)};
      for (size_t i = 0; i < pa.indices.size(); ++i)
        x.values[pa.indices[i]] = static_cast<double>(pa.values[i]);
      const double kappa = root.objective + 2.0;
      CHECK(indicator_lpsat_fixing(inst, pa, kappa) ==
            (property_lpsat(inst, x, pa.indices, kappa) ? 1 : 0));
    }
  }
}

TEST_CASE("dfo_search", "[tal]") {
  SECTION("degenerate interval probes once") {
    const DfoResult r = dfo_search([](double) { return 0.7; }, 0.3, 0.3, 5);
    REQUIRE(r.rho_star.has_value());
    CHECK(*r.rho_star == 0.3);
    CHECK(r.probes.size() == 1);
  }
  SECTION("unimodal synthetic oracle returns the grid argmin exactly") {
    const auto f = [](double rho) -> std::optional<double> {
      return (rho - 0.4) * (rho - 0.4);
    };
    const DfoResult r = dfo_search(f, 0.0, 1.0, 6);
    REQUIRE(r.rho_star.has_value());
    CHECK(*r.rho_star == 0.4);  // grid point 0.4 is the true minimizer
    CHECK(r.probes.size() == 6 + 3);
  }
  SECTION("all-infeasible pattern yields no coverage") {
    const DfoResult r =
        dfo_search([](double) { return std::nullopt; }, 0.2, 0.8, 4);
    CHECK_FALSE(r.rho_star.has_value());
  }
  SECTION("bad arguments are rejected") {
    CHECK_THROWS_AS(dfo_search([](double) { return 0.0; }, 0.5, 0.4, 4),
                    std::invalid_argument);
    CHECK_THROWS_AS(dfo_search([](double) { return 0.0; }, 0.0, 1.0, 1),
                    std::invalid_argument);
  }
}

TEST_CASE("threshold_solve", "[tal]") {
  SECTION("zero heads on a feasible instance keep everything trivial") {
    MipInstance knap = unit_knapsack(8, 4);
    const ModelOutput out = fake_output(std::vector<double>(8, 0.95));
    const ThresholdSolveResult r =
        threshold_solve(knap, out, 0.0, 0.0, 0.0, 2.0, 4);
    CHECK(r.i_feas == 1);
    REQUIRE(r.rho_star.has_value());
    CHECK(*r.rho_star == 0.0);
  }
  SECTION("adversarial fixing pattern leaves rho_star absent") {
    // x1 <= 0 but the most confident prediction pushes x1 to one, so any
    // positive coverage is infeasible and the interval excludes zero.
    MipInstance inst = testutil::make_binary(
        "adv", {0.0, -1.0, -1.0},
        {{1.0, 0.0, 0.0}, {0.0, 1.0, 1.0}}, {0.0, 2.0});
    const ModelOutput out = fake_output({0.99, 0.6, 0.6});
    const ThresholdSolveResult r =
        threshold_solve(inst, out, 0.6, 0.3, 0.5, 2.0, 4);
    CHECK(r.i_feas == 0);
    CHECK(r.i_lpsat == 0);
    CHECK_FALSE(r.rho_star.has_value());
  }
  SECTION("kappa in the result replays the line formula") {
    MipInstance inst = gen_set_cover(5, 10, 0.3, 77);
    const ModelOutput out = fake_output(std::vector<double>(10, 0.85));
    const double lpsat_head = 0.45;
    const ThresholdSolveResult r =
        threshold_solve(inst, out, 0.65, lpsat_head, 0.5, 2.0, 4);
    REQUIRE(r.lpsat_probe_objective.has_value());
    const double expect = kappa_criterion(
        lpsat_head, std::max(*r.lpsat_probe_objective, r.root_lp_objective),
        r.root_lp_objective);
    CHECK_THAT(r.kappa, Catch::Matchers::WithinAbs(expect, 1e-12));
    CHECK(r.root_lp_objective <= r.kappa + 1e-12);
    CHECK(r.kappa <= std::max(*r.lpsat_probe_objective, r.root_lp_objective) + 1e-12);
  }
}

TEST_CASE("tal loss pieces", "[tal]") {
  SECTION("coverage loss") {
    CHECK_THAT(loss_coverage(0.3, 0.5), Catch::Matchers::WithinAbs(0.04, 1e-12));
    CHECK(loss_coverage(0.5, 0.5) == 0.0);
  }
  SECTION("threshold loss at one half is two log two") {
    CHECK_THAT(loss_threshold(0.5, 0.5, 0.5, 0.5),
               Catch::Matchers::WithinAbs(2.0 * std::log(2.0), 1e-12));
  }
  SECTION("matched clamp values sit at the floor") {
    const double hi = clamped_sigmoid(kSigmoidClamp);
    CHECK(loss_threshold(1.0, hi, 1.0, hi) <= 2e-13);
    CHECK(loss_prob(1, hi, 1, hi) <= 2e-13);
  }
  SECTION("prob loss at one half") {
    CHECK_THAT(loss_prob(1, 0.5, 1, 0.5),
               Catch::Matchers::WithinAbs(2.0 * std::log(2.0), 1e-12));
  }
  SECTION("total is the plain sum") {
    CHECK(total_loss(0.0, 0.0, 0.0) == 0.0);
    CHECK_THAT(total_loss(0.04, 2 * std::log(2.0), 2 * std::log(2.0)),
               Catch::Matchers::WithinAbs(0.04 + 4 * std::log(2.0), 1e-12));
  }
  SECTION("descent against a fixed prob target reaches the target") {
    // Stationary point of BCE(0.7, sigma(z)) is sigma(z) = 0.7.
    double z = 0.0;
    for (int i = 0; i < 4000; ++i) {
      const double p = 1.0 / (1.0 + std::exp(-z));
      z -= 0.1 * (p - 0.7);
    }
    CHECK_THAT(1.0 / (1.0 + std::exp(-z)),
               Catch::Matchers::WithinAbs(0.7, 1e-3));
  }
  SECTION("coverage loss gradient matches finite differences at the head level") {
    const double rho_star = 0.37;
    for (double head : {0.2, 0.5, 0.9}) {
      const double h = 1e-6;
      const double fd =
          (loss_coverage(head + h, rho_star) - loss_coverage(head - h, rho_star)) /
          (2 * h);
      CHECK_THAT(2.0 * (head - rho_star), Catch::Matchers::WithinAbs(fd, 1e-6));
    }
  }
}

TEST_CASE("train_tal on the unit knapsack family", "[tal][training]") {
  MipInstance knap = unit_knapsack(10, 5);
  const ModelParams pretrained = biased_value_model(3.0);

  SECTION("zero outer iterations leave the backbone and fresh heads untouched") {
    TalOptions opts;
    opts.seed = 5;
    const TalState state = train_tal(pretrained, {knap}, 0, 4, opts);
    CHECK(state.inner_steps == 0);
    ModelParams expect = pretrained;
    reinit_threshold_heads(expect, 5);
    CHECK(write_params_json(state.params) == write_params_json(expect));
  }

  SECTION("the feasibility-threshold head converges to k over r") {
    TalOptions opts;
    opts.seed = 12;
    opts.tau = 0.5;
    opts.probes = 5;
    opts.lr = 0.05;
    const TalState state = train_tal(pretrained, {knap}, 8, 8, opts);
    const BipartiteGraph g = encode_graph(knap, solve_lp(knap));
    const ModelOutput out = forward(state.params, g);
    INFO("feas threshold " << out.heads[kFeasThresholdHead]);
    CHECK(std::fabs(out.heads[kFeasThresholdHead] - 0.5) < 0.12);
  }

  SECTION("backbone and value head stay bit-identical") {
    TalOptions opts;
    opts.seed = 3;
    opts.tau = 0.3;
    const TalState state = train_tal(pretrained, {knap}, 3, 4, opts);
    ModelParams trained = state.params;
    ModelParams original = pretrained;
    // Compare every tensor outside the five scalar heads.
    std::vector<std::pair<std::string, const Matrix*>> a, b;
    trained.visit([&](const std::string& n, Matrix& m) {
      if (n.rfind("head_", 0) != 0) a.push_back({n, &m});
    });
    original.visit([&](const std::string& n, Matrix& m) {
      if (n.rfind("head_", 0) != 0) b.push_back({n, &m});
    });
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].first == b[i].first);
      CHECK(a[i].second->data == b[i].second->data);
    }
  }

  SECTION("an impossible interval reports null breaks") {
    // x1 <= 0 with a confident wrong prediction: every coverage probe fails.
    MipInstance adv = testutil::make_binary("adv", {0.0, -1.0},
                                            {{1.0, 0.0}, {0.0, 1.0}}, {0.0, 1.0});
    ModelParams model = biased_value_model(5.0);
    TalOptions opts;
    opts.seed = 9;
    opts.tau = 0.3;
    const TalState state = train_tal(model, {adv}, 3, 4, opts);
    CHECK(state.null_breaks == 3);  // one break per outer iteration
    CHECK(state.inner_steps == 3);
  }

  SECTION("run log lines carry the step fields") {
    TalOptions opts;
    opts.seed = 21;
    opts.tau = 0.3;
    const TalState state = train_tal(pretrained, {knap}, 1, 2, opts);
    REQUIRE(state.log.size() == 2);
    const std::string line = tal_log_line(state.log[0]);
    const auto j = nlohmann::json::parse(line);
    CHECK(j.contains("t"));
    CHECK(j.contains("rho_psi"));
    CHECK(j.contains("rho_star"));
    CHECK(j.contains("kappa"));
    CHECK(j["losses"].contains("coverage"));
  }
}
