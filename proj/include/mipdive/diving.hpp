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

#ifndef MIPDIVE_DIVING_HPP_
#define MIPDIVE_DIVING_HPP_

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mipdive/branch_bound.hpp"
#include "mipdive/model.hpp"

namespace mipdive {

// score_d = max(p_d, 1 - p_d), in [0.5, 1).
inline std::vector<double> confidence(const std::vector<double>& probs) {
  std::vector<double> out(probs.size());
  for (size_t d = 0; d < probs.size(); ++d)
    out[d] = std::max(probs[d], 1.0 - probs[d]);
  return out;
}

// Most-probable value; ties at one half round up.
inline std::vector<long long> round_values(const std::vector<double>& probs) {
  std::vector<long long> out(probs.size());
  for (size_t d = 0; d < probs.size(); ++d) out[d] = probs[d] >= 0.5 ? 1 : 0;
  return out;
}

// Selection mask: variable d is picked iff its confidence reaches the
// cutoff. The cutoff saturates at the sigmoid ceiling so that a cutoff of
// exactly 1.0 still selects fully clamped outputs (no representable score
// can reach 1.0 itself).
inline std::vector<bool> cf_select(const std::vector<double>& probs,
                                   double cutoff) {
  if (cutoff < 0.5 || cutoff > 1.0)
    throw std::invalid_argument("cf_select: cutoff must be in [0.5, 1]");
  const double effective = std::min(cutoff, clamped_sigmoid(kSigmoidClamp));
  std::vector<bool> mask(probs.size(), false);
  const std::vector<double> score = confidence(probs);
  for (size_t d = 0; d < probs.size(); ++d) mask[d] = score[d] >= effective;
  return mask;
}

enum class SubsetStrategy { kConfidenceTopK, kBernoulliRandom };

// Realizes a coverage-rho subset of the discrete variables with values from
// the rounded model output. ConfidenceTopK deterministically takes the
// ceil(rho * r) most confident variables (ties to the lowest index);
// BernoulliRandom includes each variable independently with probability rho.
inline PartialAssignment realize_subset(const ModelOutput& out, double rho,
                                        SubsetStrategy strategy,
                                        uint64_t seed = 0) {
  if (rho < 0.0 || rho > 1.0)
    throw std::invalid_argument("realize_subset: coverage must be in [0, 1]");
  const int r = static_cast<int>(out.discrete.size());
  const std::vector<long long> values = round_values(out.probs);
  std::vector<int> chosen;
  if (strategy == SubsetStrategy::kConfidenceTopK) {
    const int k = static_cast<int>(std::ceil(rho * r - 1e-12));
    std::vector<int> order(r);
    std::iota(order.begin(), order.end(), 0);
    const std::vector<double> score = confidence(out.probs);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return score[a] != score[b] ? score[a] > score[b] : a < b;
    });
    order.resize(std::min(k, r));
    chosen = std::move(order);
  } else {
    SplitMix64 rng(seed);
    for (int d = 0; d < r; ++d)
      if (rng.uniform01() < rho) chosen.push_back(d);
  }
  PartialAssignment pa;
  std::sort(chosen.begin(), chosen.end());
  for (int d : chosen) {
    pa.indices.push_back(out.discrete[d]);
    pa.values.push_back(values[d]);
  }
  pa.coverage = r == 0 ? 0.0 : static_cast<double>(chosen.size()) / r;
  return pa;
}

// Applies the confidence filter at `cutoff` and returns the realized partial
// assignment (selection mask + rounded values).
inline PartialAssignment cf_assignment(const ModelOutput& out, double cutoff) {
  const std::vector<bool> mask = cf_select(out.probs, cutoff);
  const std::vector<long long> values = round_values(out.probs);
  PartialAssignment pa;
  for (size_t d = 0; d < mask.size(); ++d)
    if (mask[d]) {
      pa.indices.push_back(out.discrete[d]);
      pa.values.push_back(values[d]);
    }
  const size_t r = out.discrete.size();
  pa.coverage = r == 0 ? 0.0 : static_cast<double>(pa.indices.size()) / r;
  return pa;
}

struct CfSweepPoint {
  bool feasible = false;
  SolveTrace trace;
  double coverage = 0.0;
};

// One confidence-filter probe: select, fix, solve the sub-MIP.
inline CfSweepPoint cf_sweep_point(const ModelOutput& out, const MipInstance& inst,
                                   double cutoff, double budget,
                                   const MipSolveOptions& opts = {}) {
  const PartialAssignment pa = cf_assignment(out, cutoff);
  CfSweepPoint point;
  point.coverage = pa.coverage;
  point.trace = solve_mip(fix_variables(inst, pa), budget, SolveMode::kOptimize, opts);
  point.feasible = point.trace.has_incumbent();
  return point;
}

// One solved training example.
struct TrainingExample {
  MipInstance instance;
  Assignment target;
  MipStatus status = MipStatus::kFeasible;  // kOptimal or kFeasible
};

struct CollectStats {
  int kept = 0;
  int dropped = 0;
};

// Solves every instance for up to `budget_per_instance` and keeps the best
// assignment found; instances yielding no incumbent are dropped and counted.
inline std::vector<TrainingExample> collect_targets(
    const std::vector<MipInstance>& instances, double budget_per_instance,
    CollectStats* stats = nullptr, const MipSolveOptions& opts = {}) {
  if (!(budget_per_instance > 0.0))
    throw std::invalid_argument("collect_targets: budget must be positive");
  std::vector<TrainingExample> out;
  CollectStats local;
  for (const MipInstance& inst : instances) {
    const SolveTrace t =
        solve_mip(inst, budget_per_instance, SolveMode::kOptimize, opts);
    if (!t.has_incumbent()) {
      ++local.dropped;
      continue;
    }
    ++local.kept;
    out.push_back({inst, *t.best,
                   t.status == MipStatus::kOptimal ? MipStatus::kOptimal
                                                   : MipStatus::kFeasible});
  }
  if (stats) *stats = local;
  return out;
}

struct NdTrainResult {
  ModelParams params;
  std::vector<double> loss_curve;  // mean loss per epoch
};

// Supervised training of the per-variable head: one momentum-SGD step per
// example, examples visited in order, graphs encoded once up front.
// Deterministic in the seed.
inline NdTrainResult train_nd(const std::vector<TrainingExample>& examples,
                              int epochs, double lr, uint64_t seed,
                              int hidden = 32, int rounds = 2) {
  if (examples.empty())
    throw std::invalid_argument("train_nd: no training examples");
  NdTrainResult result;
  result.params = init_params(seed, hidden, rounds);
  ModelParams velocity = zeros_like_params(hidden, rounds);

  std::vector<BipartiteGraph> graphs;
  graphs.reserve(examples.size());
  for (const TrainingExample& ex : examples)
    graphs.push_back(encode_graph(ex.instance, solve_lp(ex.instance)));

  for (int epoch = 0; epoch < epochs; ++epoch) {
    double total = 0.0;
    for (size_t i = 0; i < examples.size(); ++i) {
      ForwardCache cache;
      const ModelOutput out = forward(result.params, graphs[i], &cache);
      const std::vector<int>& mask = graphs[i].discrete;
      total += loss_nd(out, examples[i].target, mask);
      const ModelParams grads =
          backward(result.params, graphs[i], cache, out,
                   loss_nd_grad(out, examples[i].target, mask));
      sgd_step(result.params, grads, velocity, lr, 0.9);
    }
    result.loss_curve.push_back(total / static_cast<double>(examples.size()));
  }
  return result;
}

// Training-set manifest: instance paths plus their target assignments.
inline std::string write_manifest_json(
    const std::vector<std::pair<std::string, TrainingExample>>& entries) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& [path, ex] : entries) {
    nlohmann::ordered_json e;
    e["instance"] = path;
    e["target"] = ex.target.values;
    e["status"] = ex.status == MipStatus::kOptimal ? "Optimal" : "Feasible";
    j.push_back(std::move(e));
  }
  return j.dump() + "\n";
}

}  // namespace mipdive

#endif  // MIPDIVE_DIVING_HPP_
