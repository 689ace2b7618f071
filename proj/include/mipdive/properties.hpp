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

#ifndef MIPDIVE_PROPERTIES_HPP_
#define MIPDIVE_PROPERTIES_HPP_

#include <cmath>
#include <optional>
#include <vector>

#include "mipdive/rng.hpp"
#include "mipdive/simplex.hpp"

namespace mipdive {

namespace detail {

// Bound-tightens `subset` to the values of x (any variable kind) without the
// discreteness checks of fix_variables; the property definitions fix
// whatever coordinates the subset names.
inline MipInstance pin_subset(const MipInstance& inst,
                              const std::vector<int>& subset,
                              const Assignment& x) {
  MipInstance sub = inst;
  for (int j : subset) {
    const double v =
        inst.integrality[j] ? std::round(x.values[j]) : x.values[j];
    sub.lower[j] = v;
    sub.upper[j] = v;
  }
  return sub;
}

}  // namespace detail

// Completability: there is an assignment of the unfixed variables (integers
// enumerated over their bounds, continuous via LP) that satisfies every
// constraint together with the pinned subset values. Exact for instances
// with a small discrete part.
inline bool property_feasible_completion(const MipInstance& inst,
                                         const Assignment& x,
                                         const std::vector<int>& subset,
                                         const SimplexOptions& lp_opts = {}) {
  MipInstance sub = detail::pin_subset(inst, subset, x);
  std::vector<int> free_discrete;
  for (int j = 0; j < sub.num_vars; ++j)
    if (sub.integrality[j] && sub.lower[j] < sub.upper[j])
      free_discrete.push_back(j);
  if (static_cast<int>(free_discrete.size()) > 24)
    throw std::invalid_argument(
        "property_feasible_completion: too many free discrete variables for "
        "exact enumeration");

  bool any_continuous = false;
  for (int j = 0; j < sub.num_vars; ++j)
    if (!sub.integrality[j]) any_continuous = true;

  std::vector<long long> lo(free_discrete.size()), hi(free_discrete.size()),
      cur(free_discrete.size());
  for (size_t k = 0; k < free_discrete.size(); ++k) {
    lo[k] = static_cast<long long>(std::ceil(sub.lower[free_discrete[k]] - 1e-9));
    hi[k] = static_cast<long long>(std::floor(sub.upper[free_discrete[k]] + 1e-9));
    cur[k] = lo[k];
  }

  MipInstance leaf = sub;
  while (true) {
    for (size_t k = 0; k < free_discrete.size(); ++k) {
      leaf.lower[free_discrete[k]] = static_cast<double>(cur[k]);
      leaf.upper[free_discrete[k]] = static_cast<double>(cur[k]);
    }
    bool ok;
    if (any_continuous) {
      ok = solve_lp(leaf, lp_opts).status == LpStatus::kOptimal;
    } else {
      std::vector<double> act(leaf.num_cons, 0.0);
      for (const Triplet& t : leaf.matrix)
        act[t.row] += t.value * leaf.lower[t.col];
      ok = true;
      for (int i = 0; i < leaf.num_cons && ok; ++i)
        ok = act[i] <= leaf.rhs[i] + 1e-9;
    }
    if (ok) return true;
    size_t k = 0;
    while (k < free_discrete.size() && cur[k] == hi[k]) {
      cur[k] = lo[k];
      ++k;
    }
    if (k == free_discrete.size()) return false;
    ++cur[k];
  }
}

// LP-relaxation criterion: the sub-LP after pinning the subset is feasible
// and its optimum reaches kappa. This is the operational reading used by the
// solver loop; together with monotone fixing it makes the property grow
// along chains inside the completable region.
inline bool property_lpsat(const MipInstance& inst, const Assignment& x,
                           const std::vector<int>& subset, double kappa,
                           const SimplexOptions& lp_opts = {}) {
  const LpResult lp = solve_lp(detail::pin_subset(inst, subset, x), lp_opts);
  return lp.status == LpStatus::kOptimal && lp.objective >= kappa - 1e-9;
}

struct ChainCheckResult {
  long pairs_checked = 0;
  long violations = 0;
};

namespace detail {

inline std::vector<int> bits_to_subset(const std::vector<int>& universe,
                                       uint32_t bits) {
  std::vector<int> out;
  for (size_t k = 0; k < universe.size(); ++k)
    if (bits & (1u << k)) out.push_back(universe[k]);
  return out;
}

}  // namespace detail

// Exhaustively verifies that completability only shrinks when a fixing
// grows: for every subset B and extension B + {i}, completable(B + {i})
// implies completable(B). Single-element steps cover every chain.
inline ChainCheckResult check_feasible_completion_monotone(
    const MipInstance& inst, const Assignment& x) {
  const std::vector<int> universe = inst.discrete_indices();
  if (universe.size() > 12)
    throw std::invalid_argument("chain check: r must be at most 12");
  const uint32_t full = 1u << universe.size();
  std::vector<char> holds(full);
  for (uint32_t bits = 0; bits < full; ++bits)
    holds[bits] = property_feasible_completion(
        inst, x, detail::bits_to_subset(universe, bits));
  ChainCheckResult res;
  for (uint32_t bits = 0; bits < full; ++bits)
    for (size_t k = 0; k < universe.size(); ++k) {
      if (bits & (1u << k)) continue;
      const uint32_t bigger = bits | (1u << k);
      ++res.pairs_checked;
      if (holds[bigger] && !holds[bits]) ++res.violations;
    }
  return res;
}

// Exhaustively verifies bounded monotone growth of the LP criterion: inside
// the completable region, lpsat(B) implies lpsat(B + {i}).
inline ChainCheckResult check_lpsat_monotone(const MipInstance& inst,
                                             const Assignment& x,
                                             double kappa) {
  const std::vector<int> universe = inst.discrete_indices();
  if (universe.size() > 12)
    throw std::invalid_argument("chain check: r must be at most 12");
  const uint32_t full = 1u << universe.size();
  std::vector<char> completable(full), lpsat(full);
  for (uint32_t bits = 0; bits < full; ++bits) {
    const std::vector<int> subset = detail::bits_to_subset(universe, bits);
    completable[bits] = property_feasible_completion(inst, x, subset);
    lpsat[bits] = property_lpsat(inst, x, subset, kappa);
  }
  ChainCheckResult res;
  for (uint32_t bits = 0; bits < full; ++bits)
    for (size_t k = 0; k < universe.size(); ++k) {
      if (bits & (1u << k)) continue;
      const uint32_t bigger = bits | (1u << k);
      if (!completable[bigger]) continue;  // outside the bounded region
      ++res.pairs_checked;
      if (lpsat[bits] && !lpsat[bigger]) ++res.violations;
    }
  return res;
}

// Monte-Carlo frequency of a subset property over Bernoulli-random subsets
// of the discrete variables at a coverage grid.
struct FrequencyCurve {
  std::vector<double> rho;
  std::vector<double> frequency;
};

template <typename PropertyFn>
inline FrequencyCurve property_frequency_curve(
    const MipInstance& inst, const Assignment& x,
    const std::vector<double>& rho_grid, int samples, uint64_t seed,
    PropertyFn&& property_of_subset) {
  const std::vector<int> universe = inst.discrete_indices();
  FrequencyCurve curve;
  for (size_t gi = 0; gi < rho_grid.size(); ++gi) {
    const double rho = rho_grid[gi];
    int hits = 0;
    for (int s = 0; s < samples; ++s) {
      SplitMix64 rng(mix_seed(seed, gi * 1000003 + s));
      std::vector<int> subset;
      for (int j : universe)
        if (rng.uniform01() < rho) subset.push_back(j);
      if (property_of_subset(subset)) ++hits;
    }
    curve.rho.push_back(rho);
    curve.frequency.push_back(static_cast<double>(hits) / samples);
  }
  return curve;
}

// First 50%-crossing of a frequency curve, linearly interpolated; direction
// 'falling' finds where the curve drops through one half, 'rising' where it
// climbs through it.
inline std::optional<double> crossing_point(const FrequencyCurve& curve,
                                            bool falling) {
  for (size_t i = 1; i < curve.rho.size(); ++i) {
    const double a = curve.frequency[i - 1];
    const double b = curve.frequency[i];
    const bool crosses = falling ? (a >= 0.5 && b < 0.5) : (a < 0.5 && b >= 0.5);
    if (!crosses) continue;
    const double t = (0.5 - a) / (b - a);
    return curve.rho[i - 1] + t * (curve.rho[i] - curve.rho[i - 1]);
  }
  return std::nullopt;
}

// Plain gradient descent of the summed BCE of one probability (through a
// logit) against a batch of binary targets. The minimizer is the target
// mean; used as the executable form of the BCE-minimizer identity.
inline double bce_minimizer_descent(const std::vector<double>& targets,
                                    int steps, double lr) {
  double z = 0.0;
  for (int s = 0; s < steps; ++s) {
    const double p = 1.0 / (1.0 + std::exp(-z));
    double grad = 0.0;
    for (double a : targets) grad += p - a;
    z -= lr * grad;
  }
  return 1.0 / (1.0 + std::exp(-z));
}

}  // namespace mipdive

#endif  // MIPDIVE_PROPERTIES_HPP_
