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

#ifndef MIPDIVE_TAL_HPP_
#define MIPDIVE_TAL_HPP_

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mipdive/diving.hpp"

namespace mipdive {

// Interpolated LP-objective criterion between the root relaxation bound and
// an incumbent objective.
inline double kappa_criterion(double lpsat_head, double incumbent_obj,
                              double lp_obj) {
  if (incumbent_obj < lp_obj - 1e-9)
    throw std::invalid_argument("kappa_criterion: incumbent below the LP bound");
  return lpsat_head * (incumbent_obj - lp_obj) + lp_obj;
}

// Feasibility indicator of a realized fixing: 1 iff the sub-MIP produces an
// incumbent within the budget. Timeouts and LP iteration trouble count as 0.
inline int indicator_feasible_fixing(const MipInstance& inst,
                                     const PartialAssignment& pa, double budget,
                                     const MipSolveOptions& opts = {}) {
  const SolveTrace t =
      solve_mip(fix_variables(inst, pa), budget, SolveMode::kFirstFeasible, opts);
  return t.has_incumbent() ? 1 : 0;
}

inline int indicator_feasible(const MipInstance& inst, const ModelOutput& out,
                              double rho, SubsetStrategy strategy, uint64_t seed,
                              double budget, const MipSolveOptions& opts = {}) {
  return indicator_feasible_fixing(inst, realize_subset(out, rho, strategy, seed),
                                   budget, opts);
}

// LP-satisfiability indicator: 1 iff the sub-LP is optimal and its objective
// reaches the kappa criterion.
inline int indicator_lpsat_fixing(const MipInstance& inst,
                                  const PartialAssignment& pa, double kappa,
                                  const SimplexOptions& opts = {}) {
  const LpResult lp = solve_lp(fix_variables(inst, pa), opts);
  if (lp.status != LpStatus::kOptimal) return 0;
  return lp.objective >= kappa - 1e-9 ? 1 : 0;
}

inline int indicator_lpsat(const MipInstance& inst, const ModelOutput& out,
                           double rho, double kappa, SubsetStrategy strategy,
                           uint64_t seed, const SimplexOptions& opts = {}) {
  return indicator_lpsat_fixing(inst, realize_subset(out, rho, strategy, seed),
                                kappa, opts);
}

struct ProbeLogEntry {
  double rho = 0.0;
  std::optional<double> objective;  // absent when the probe was infeasible
  std::string kind;
};

struct DfoResult {
  std::optional<double> rho_star;
  double objective = 0.0;
  std::vector<ProbeLogEntry> probes;
};

// Grid search over [lo, hi] followed by one golden-section refinement around
// the best grid point (three extra probes). The evaluator returns the probe
// objective or nullopt for an infeasible coverage; the argmin over all
// feasible probes wins, ties to the lowest coverage. Returns no coverage at
// all when every probe is infeasible.
inline DfoResult dfo_search(
    const std::function<std::optional<double>(double)>& evaluate, double lo,
    double hi, int probes) {
  if (!(0.0 <= lo && lo <= hi && hi <= 1.0))
    throw std::invalid_argument("dfo_search: need 0 <= lo <= hi <= 1");
  if (probes < 2) throw std::invalid_argument("dfo_search: need probes >= 2");
  DfoResult out;
  const auto consider = [&](double rho) {
    const std::optional<double> obj = evaluate(rho);
    out.probes.push_back({rho, obj, "dfo"});
    if (obj && (!out.rho_star || *obj < out.objective))
      out.rho_star = rho, out.objective = *obj;
    return obj;
  };
  if (hi - lo < 1e-12) {
    consider(lo);
    return out;
  }
  std::vector<double> grid(probes);
  for (int i = 0; i < probes; ++i)
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / (probes - 1);
  std::vector<std::optional<double>> value(probes);
  int best = -1;
  for (int i = 0; i < probes; ++i) {
    value[i] = consider(grid[i]);
    if (value[i] && (best < 0 || *value[i] < *value[best])) best = i;
  }
  if (best < 0) return out;
  const double a = grid[std::max(0, best - 1)];
  const double b = grid[std::min(probes - 1, best + 1)];
  constexpr double invphi = 0.6180339887498949;
  const double x1 = b - invphi * (b - a);
  const double x2 = a + invphi * (b - a);
  const std::optional<double> f1 = consider(x1);
  const std::optional<double> f2 = consider(x2);
  const double v1 = f1 ? *f1 : kInf;
  const double v2 = f2 ? *f2 : kInf;
  if (v1 <= v2)
    consider(x2 - invphi * (x2 - a));
  else
    consider(x1 + invphi * (b - x1));
  return out;
}

struct ThresholdSolveResult {
  int i_feas = 0;
  int i_lpsat = 0;
  std::optional<double> rho_star;
  std::optional<double> rho_star_objective;
  double kappa = std::numeric_limits<double>::quiet_NaN();
  double root_lp_objective = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> coverage_lp_objective;  // sub-LP at the coverage head
  std::optional<double> lpsat_probe_objective;  // incumbent of the lpsat probe
  std::vector<ProbeLogEntry> probes;
};

// One threshold-probing pass around the model's three coverage heads:
//   - root LP and the sub-LP at the coverage head,
//   - budgeted sub-MIP solves at the coverage, feasibility-threshold and
//     lpsat-threshold coverages,
//   - feasibility / lpsat indicators and the kappa criterion,
//   - DFO for the best coverage inside [min, max] of the two threshold
//     heads (the heads may arrive in either order while untrained).
// Every failure path degrades to indicator 0 or an absent best coverage.
inline ThresholdSolveResult threshold_solve(
    const MipInstance& inst, const ModelOutput& out, double feas_threshold,
    double lpsat_threshold, double coverage, double tau, int probes,
    SubsetStrategy strategy = SubsetStrategy::kConfidenceTopK, uint64_t seed = 0,
    const MipSolveOptions& opts = {}) {
  ThresholdSolveResult res;
  const LpResult root = solve_lp(inst, opts.lp);
  if (root.status != LpStatus::kOptimal) return res;
  res.root_lp_objective = root.objective;

  uint64_t stream = 0;
  const auto probe_seed = [&] { return mix_seed(seed, stream++); };

  // Sub-LP and budgeted sub-MIP at the coverage head.
  const PartialAssignment pa_cov =
      realize_subset(out, coverage, strategy, probe_seed());
  const LpResult cov_lp = solve_lp(fix_variables(inst, pa_cov), opts.lp);
  if (cov_lp.status == LpStatus::kOptimal)
    res.coverage_lp_objective = cov_lp.objective;
  {
    const SolveTrace t =
        solve_mip(fix_variables(inst, pa_cov), tau, SolveMode::kOptimize, opts);
    res.probes.push_back({coverage,
                          t.has_incumbent()
                              ? std::optional<double>(t.best_objective())
                              : std::nullopt,
                          "coverage"});
  }

  // Feasibility indicator at the feasibility-threshold coverage.
  {
    const PartialAssignment pa =
        realize_subset(out, feas_threshold, strategy, probe_seed());
    const SolveTrace t =
        solve_mip(fix_variables(inst, pa), tau, SolveMode::kOptimize, opts);
    res.i_feas = t.has_incumbent() ? 1 : 0;
    res.probes.push_back({feas_threshold,
                          t.has_incumbent()
                              ? std::optional<double>(t.best_objective())
                              : std::nullopt,
                          "feas_threshold"});
  }

  // Incumbent at the lpsat-threshold coverage feeds the kappa criterion.
  {
    const PartialAssignment pa =
        realize_subset(out, lpsat_threshold, strategy, probe_seed());
    const SolveTrace t =
        solve_mip(fix_variables(inst, pa), tau, SolveMode::kOptimize, opts);
    if (t.has_incumbent()) res.lpsat_probe_objective = t.best_objective();
    res.probes.push_back({lpsat_threshold, res.lpsat_probe_objective,
                          "lpsat_threshold"});
  }
  if (res.lpsat_probe_objective) {
    res.kappa = kappa_criterion(lpsat_threshold,
                                std::max(*res.lpsat_probe_objective,
                                         res.root_lp_objective),
                                res.root_lp_objective);
    if (res.coverage_lp_objective)
      res.i_lpsat = *res.coverage_lp_objective >= res.kappa - 1e-9 ? 1 : 0;
  }

  // Best coverage inside the threshold interval.
  const double lo = std::min(feas_threshold, lpsat_threshold);
  const double hi = std::max(feas_threshold, lpsat_threshold);
  DfoResult dfo = dfo_search(
      [&](double rho) -> std::optional<double> {
        const PartialAssignment pa =
            realize_subset(out, rho, strategy, probe_seed());
        const SolveTrace t =
            solve_mip(fix_variables(inst, pa), tau, SolveMode::kOptimize, opts);
        if (!t.has_incumbent()) return std::nullopt;
        return t.best_objective();
      },
      lo, hi, probes);
  res.rho_star = dfo.rho_star;
  if (dfo.rho_star) res.rho_star_objective = dfo.objective;
  for (auto& e : dfo.probes) res.probes.push_back(std::move(e));
  return res;
}

// Loss pieces. The probability-head inputs of the threshold loss are the
// previous iteration's values and enter as constants.
inline double loss_coverage(double coverage_head, double rho_star) {
  const double d = coverage_head - rho_star;
  return d * d;
}

inline double loss_threshold(double feas_prob_prev, double feas_threshold,
                             double lpsat_prob_prev, double lpsat_threshold) {
  return bce(feas_prob_prev, feas_threshold) +
         bce(lpsat_prob_prev, lpsat_threshold);
}

inline double loss_prob(int i_feas, double feas_prob, int i_lpsat,
                        double lpsat_prob) {
  return bce(static_cast<double>(i_feas), feas_prob) +
         bce(static_cast<double>(i_lpsat), lpsat_prob);
}

inline double total_loss(double coverage, double threshold, double prob) {
  return coverage + threshold + prob;
}

inline OutputGrad loss_coverage_grad(const ModelOutput& out, double rho_star) {
  OutputGrad og;
  og.dheads[kCoverageHead] = 2.0 * (out.heads[kCoverageHead] - rho_star);
  return og;
}

inline OutputGrad loss_threshold_grad(const ModelOutput& out,
                                      double feas_prob_prev,
                                      double lpsat_prob_prev) {
  OutputGrad og;
  og.dheads[kFeasThresholdHead] =
      bce_grad(feas_prob_prev, out.heads[kFeasThresholdHead]);
  og.dheads[kLpsatThresholdHead] =
      bce_grad(lpsat_prob_prev, out.heads[kLpsatThresholdHead]);
  return og;
}

inline OutputGrad loss_prob_grad(const ModelOutput& out, int i_feas,
                                 int i_lpsat) {
  OutputGrad og;
  og.dheads[kFeasProbHead] =
      bce_grad(static_cast<double>(i_feas), out.heads[kFeasProbHead]);
  og.dheads[kLpsatProbHead] =
      bce_grad(static_cast<double>(i_lpsat), out.heads[kLpsatProbHead]);
  return og;
}

// Fresh head parameters on top of a trained backbone. The two threshold
// heads start spread and ordered (feasibility high, lpsat low) so the DFO
// interval is informative from the first step.
inline void reinit_threshold_heads(ModelParams& params, uint64_t seed) {
  SplitMix64 rng(seed);
  const auto fill = [&](ModelParams::Head& h, double bias_lo, double bias_hi) {
    for (double& v : h.h1_w.data) v = rng.uniform(-0.05, 0.05);
    for (double& v : h.h1_b.data) v = 0.0;
    for (double& v : h.h2_w.data) v = rng.uniform(-0.05, 0.05);
    h.h2_b.data[0] = rng.uniform(bias_lo, bias_hi);
  };
  fill(params.head[kFeasThresholdHead], 0.2, 1.7);    // outputs ~(0.55, 0.85)
  fill(params.head[kLpsatThresholdHead], -2.2, -0.2); // outputs ~(0.10, 0.45)
  fill(params.head[kCoverageHead], -1.0, 1.0);
  fill(params.head[kFeasProbHead], -1.0, 1.0);
  fill(params.head[kLpsatProbHead], -1.0, 1.0);
}

struct TalStepLog {
  int outer = 0;
  int inner = 0;
  std::string instance;
  double feas_threshold = 0.0;
  double lpsat_threshold = 0.0;
  double coverage = 0.0;
  int i_feas = 0;
  int i_lpsat = 0;
  std::optional<double> rho_star;
  double kappa = std::numeric_limits<double>::quiet_NaN();
  std::optional<double> l_coverage, l_threshold, l_prob;
  bool null_break = false;
};

// One line per inner step, JSON.
inline std::string tal_log_line(const TalStepLog& s) {
  nlohmann::ordered_json j;
  j["t"] = s.outer;
  j["j"] = s.inner;
  j["instance"] = s.instance;
  j["rho_psi"] = s.feas_threshold;
  j["rho_phi"] = s.lpsat_threshold;
  j["rho_pi"] = s.coverage;
  j["i_feas"] = s.i_feas;
  j["i_lpsat"] = s.i_lpsat;
  if (s.rho_star)
    j["rho_star"] = *s.rho_star;
  else
    j["rho_star"] = nullptr;
  if (std::isnan(s.kappa))
    j["kappa"] = nullptr;
  else
    j["kappa"] = s.kappa;
  auto& losses = j["losses"] = nlohmann::ordered_json::object();
  losses["coverage"] = s.l_coverage ? nlohmann::ordered_json(*s.l_coverage)
                                    : nlohmann::ordered_json(nullptr);
  losses["threshold"] = s.l_threshold ? nlohmann::ordered_json(*s.l_threshold)
                                      : nlohmann::ordered_json(nullptr);
  losses["prob"] = s.l_prob ? nlohmann::ordered_json(*s.l_prob)
                            : nlohmann::ordered_json(nullptr);
  return j.dump();
}

struct TalOptions {
  double tau = 1.0;
  int probes = 5;
  double lr = 0.05;
  double momentum = 0.9;
  SubsetStrategy strategy = SubsetStrategy::kConfidenceTopK;
  uint64_t seed = 0;
  MipSolveOptions solve;
};

struct TalState {
  ModelParams params;
  int outer_done = 0;
  int inner_steps = 0;
  int null_breaks = 0;
  std::vector<TalStepLog> log;
};

namespace detail {

inline void update_heads(ModelParams& params, const ModelParams& grads,
                         ModelParams& velocity, std::initializer_list<int> heads,
                         double lr, double momentum) {
  for (int h : heads) {
    auto& pg = const_cast<ModelParams&>(grads);
    sgd_step_span(params.head[h].h1_w.data, pg.head[h].h1_w.data,
                  velocity.head[h].h1_w.data, lr, momentum);
    sgd_step_span(params.head[h].h1_b.data, pg.head[h].h1_b.data,
                  velocity.head[h].h1_b.data, lr, momentum);
    sgd_step_span(params.head[h].h2_w.data, pg.head[h].h2_w.data,
                  velocity.head[h].h2_w.data, lr, momentum);
    sgd_step_span(params.head[h].h2_b.data, pg.head[h].h2_b.data,
                  velocity.head[h].h2_b.data, lr, momentum);
  }
}

}  // namespace detail

// Threshold-aware training loop on top of a frozen value model: per inner
// step, probe with threshold_solve, break the batch when no coverage in the
// interval is feasible, otherwise descend the three loss groups on their own
// head parameters. The backbone and the per-variable head are never touched.
inline TalState train_tal(const ModelParams& pretrained,
                          const std::vector<MipInstance>& instances, int outer_T,
                          int inner_H, const TalOptions& opts = {}) {
  if (instances.empty())
    throw std::invalid_argument("train_tal: no instances");
  TalState state;
  state.params = pretrained;
  reinit_threshold_heads(state.params, opts.seed);
  ModelParams velocity =
      zeros_like_params(pretrained.hidden, pretrained.rounds);

  std::vector<BipartiteGraph> graphs;
  graphs.reserve(instances.size());
  for (const MipInstance& inst : instances)
    graphs.push_back(encode_graph(inst, solve_lp(inst, opts.solve.lp)));

  double prev_feas_prob = -1.0;  // negative means "use the current value"
  double prev_lpsat_prob = -1.0;
  uint64_t step_salt = 0;
  for (int t = 0; t < outer_T; ++t) {
    for (int j = 0; j < inner_H; ++j) {
      const size_t idx =
          (static_cast<size_t>(t) * inner_H + j) % instances.size();
      ForwardCache cache;
      const ModelOutput out = forward(state.params, graphs[idx], &cache);
      const ThresholdSolveResult probe = threshold_solve(
          instances[idx], out, out.heads[kFeasThresholdHead],
          out.heads[kLpsatThresholdHead], out.heads[kCoverageHead], opts.tau,
          opts.probes, opts.strategy, mix_seed(opts.seed, ++step_salt),
          opts.solve);

      TalStepLog log;
      log.outer = t;
      log.inner = j;
      log.instance = instances[idx].name;
      log.feas_threshold = out.heads[kFeasThresholdHead];
      log.lpsat_threshold = out.heads[kLpsatThresholdHead];
      log.coverage = out.heads[kCoverageHead];
      log.i_feas = probe.i_feas;
      log.i_lpsat = probe.i_lpsat;
      log.rho_star = probe.rho_star;
      log.kappa = probe.kappa;
      ++state.inner_steps;

      if (!probe.rho_star) {
        log.null_break = true;
        state.log.push_back(std::move(log));
        ++state.null_breaks;
        break;
      }

      const double feas_prob_target =
          prev_feas_prob < 0.0 ? out.heads[kFeasProbHead] : prev_feas_prob;
      const double lpsat_prob_target =
          prev_lpsat_prob < 0.0 ? out.heads[kLpsatProbHead] : prev_lpsat_prob;

      log.l_coverage = loss_coverage(out.heads[kCoverageHead], *probe.rho_star);
      log.l_threshold =
          loss_threshold(feas_prob_target, out.heads[kFeasThresholdHead],
                         lpsat_prob_target, out.heads[kLpsatThresholdHead]);
      log.l_prob = loss_prob(probe.i_feas, out.heads[kFeasProbHead],
                             probe.i_lpsat, out.heads[kLpsatProbHead]);

      const ModelParams g_cov =
          backward(state.params, graphs[idx], cache, out,
                   loss_coverage_grad(out, *probe.rho_star));
      const ModelParams g_thr = backward(
          state.params, graphs[idx], cache, out,
          loss_threshold_grad(out, feas_prob_target, lpsat_prob_target));
      const ModelParams g_prob =
          backward(state.params, graphs[idx], cache, out,
                   loss_prob_grad(out, probe.i_feas, probe.i_lpsat));
      detail::update_heads(state.params, g_cov, velocity, {kCoverageHead},
                           opts.lr, opts.momentum);
      detail::update_heads(state.params, g_thr, velocity,
                           {kFeasThresholdHead, kLpsatThresholdHead}, opts.lr,
                           opts.momentum);
      detail::update_heads(state.params, g_prob, velocity,
                           {kFeasProbHead, kLpsatProbHead}, opts.lr,
                           opts.momentum);

      prev_feas_prob = out.heads[kFeasProbHead];
      prev_lpsat_prob = out.heads[kLpsatProbHead];
      state.log.push_back(std::move(log));
    }
    ++state.outer_done;
  }
  return state;
}

}  // namespace mipdive

#endif  // MIPDIVE_TAL_HPP_
