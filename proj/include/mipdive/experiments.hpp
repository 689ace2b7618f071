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

#ifndef MIPDIVE_EXPERIMENTS_HPP_
#define MIPDIVE_EXPERIMENTS_HPP_

#include <atomic>
#include <cstdio>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mipdive/metrics.hpp"
#include "mipdive/tal.hpp"

namespace mipdive {

namespace detail {

// Index-stable parallel map; results land in input order regardless of the
// worker count, so every downstream artifact is scheduling-independent.
template <typename Out, typename Fn>
std::vector<Out> parallel_map(size_t count, int workers, Fn&& fn) {
  std::vector<Out> results(count);
  if (workers <= 1) {
    for (size_t i = 0; i < count; ++i) results[i] = fn(i);
    return results;
  }
  std::atomic<size_t> next{0};
  const auto worker = [&] {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= count) return;
      results[i] = fn(i);
    }
  };
  std::vector<std::future<void>> futs;
  for (int w = 0; w < workers; ++w)
    futs.push_back(std::async(std::launch::async, worker));
  for (auto& f : futs) f.get();
  return results;
}

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

inline std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt_double(*v) : std::string();
}

}  // namespace detail

// Per-instance model evaluation shared by the experiment drivers.
struct ScoredInstance {
  const MipInstance* instance = nullptr;
  ModelOutput output;
};

inline ScoredInstance score_instance(const ModelParams& params,
                                     const MipInstance& inst,
                                     const SimplexOptions& lp_opts = {}) {
  ScoredInstance s;
  s.instance = &inst;
  s.output = forward(params, encode_graph(inst, solve_lp(inst, lp_opts)));
  return s;
}

struct ExperimentOptions {
  double budget = 1.0;
  SolveMode mode = SolveMode::kOptimize;
  int workers = 1;
  uint64_t seed = 0;
  std::optional<double> fixed_clock_tick;
  MipSolveOptions solve;
};

namespace detail {

inline SolveTrace run_with_clock(const MipInstance& inst, double budget,
                                 SolveMode mode, const ExperimentOptions& opts) {
  MipSolveOptions solve = opts.solve;
  DeterministicClock fake(opts.fixed_clock_tick.value_or(1e-4));
  if (opts.fixed_clock_tick) solve.clock = &fake;
  return solve_mip(inst, budget, mode, solve);
}

}  // namespace detail

struct CutoffRow {
  double gamma = 0.0;
  double feasible_ratio = 0.0;
  std::optional<double> mean_pb;
};

// Feasible-instance ratio and mean final primal bound per confidence cutoff.
inline std::vector<CutoffRow> sweep_cutoff(
    const std::vector<ScoredInstance>& scored, const std::vector<double>& gammas,
    const ExperimentOptions& opts) {
  std::vector<CutoffRow> rows;
  for (double gamma : gammas) {
    const auto results = detail::parallel_map<std::pair<bool, double>>(
        scored.size(), opts.workers, [&](size_t i) -> std::pair<bool, double> {
          const PartialAssignment pa = cf_assignment(scored[i].output, gamma);
          const SolveTrace t =
              detail::run_with_clock(fix_variables(*scored[i].instance, pa),
                                     opts.budget, opts.mode, opts);
          const auto pb = primal_bound_at(t, opts.budget, std::nullopt);
          return {pb.has_value(), pb.value_or(0.0)};
        });
    CutoffRow row;
    row.gamma = gamma;
    int feasible = 0;
    double sum = 0.0;
    for (const auto& [ok, pb] : results) {
      if (!ok) continue;
      ++feasible;
      sum += pb;
    }
    row.feasible_ratio =
        scored.empty() ? 0.0 : static_cast<double>(feasible) / scored.size();
    if (feasible > 0) row.mean_pb = sum / feasible;
    rows.push_back(row);
  }
  return rows;
}

inline std::string cutoff_csv(const std::vector<CutoffRow>& rows) {
  std::string out = "gamma,feasible_ratio,mean_pb\n";
  for (const CutoffRow& r : rows)
    out += detail::fmt_double(r.gamma) + "," + detail::fmt_double(r.feasible_ratio) +
           "," + detail::fmt_opt(r.mean_pb) + "\n";
  return out;
}

struct CoverageRow {
  int scale = 0;
  double rho = 0.0;
  double feasible_ratio = 0.0;
  std::optional<double> mean_pb;
};

// Feasibility ratio and mean primal bound per (scale, coverage), using one
// model for every scale. With the Bernoulli strategy each instance is
// realized `samples` times per grid point under decorrelated seeds.
inline std::vector<CoverageRow> sweep_coverage(
    const ModelParams& params,
    const std::vector<std::pair<int, std::vector<MipInstance>>>& scales,
    const std::vector<double>& rho_grid, SubsetStrategy strategy, int samples,
    const ExperimentOptions& opts) {
  std::vector<CoverageRow> rows;
  for (const auto& [scale, instances] : scales) {
    std::vector<ScoredInstance> scored;
    scored.reserve(instances.size());
    for (const MipInstance& inst : instances)
      scored.push_back(score_instance(params, inst, opts.solve.lp));
    for (size_t gi = 0; gi < rho_grid.size(); ++gi) {
      const double rho = rho_grid[gi];
      const size_t total = scored.size() * static_cast<size_t>(samples);
      const auto results = detail::parallel_map<std::pair<bool, double>>(
          total, opts.workers, [&](size_t k) -> std::pair<bool, double> {
            const size_t i = k / samples;
            const size_t s = k % samples;
            const uint64_t seed =
                mix_seed(opts.seed, (gi * 797 + i) * 10007 + s);
            const PartialAssignment pa =
                realize_subset(scored[i].output, rho, strategy, seed);
            const SolveTrace t =
                detail::run_with_clock(fix_variables(*scored[i].instance, pa),
                                       opts.budget, opts.mode, opts);
            if (!t.has_incumbent()) return {false, 0.0};
            return {true, t.best_objective()};
          });
      CoverageRow row;
      row.scale = scale;
      row.rho = rho;
      int feasible = 0;
      double sum = 0.0;
      for (const auto& [ok, pb] : results) {
        if (!ok) continue;
        ++feasible;
        sum += pb;
      }
      row.feasible_ratio =
          total == 0 ? 0.0 : static_cast<double>(feasible) / total;
      if (feasible > 0) row.mean_pb = sum / feasible;
      rows.push_back(row);
    }
  }
  return rows;
}

inline std::string coverage_csv(const std::vector<CoverageRow>& rows) {
  std::string out = "scale,rho,feasible_ratio,mean_pb\n";
  for (const CoverageRow& r : rows)
    out += std::to_string(r.scale) + "," + detail::fmt_double(r.rho) + "," +
           detail::fmt_double(r.feasible_ratio) + "," +
           detail::fmt_opt(r.mean_pb) + "\n";
  return out;
}

struct MetricsRow {
  std::string instance;
  std::string method;
  std::optional<double> pi;
  std::optional<double> pb;
  std::optional<double> og_pct;
  bool optimal = false;
  double seconds = 0.0;
};

struct BenchConfig {
  std::vector<MipInstance> validation;
  std::vector<MipInstance> test;
  ModelParams nd_model;
  std::optional<ModelParams> tal_model;
  double budget = 2.0;
  double gamma = 0.9;
  std::vector<double> gamma_grid = {0.55, 0.65, 0.75, 0.85, 0.9,
                                    0.95, 0.98, 0.995};
  double reference_budget = 20.0;
  std::optional<double> pi_cap;  // default: all-upper-bound objective when feasible
  uint64_t seed = 0;
  int workers = 1;
  std::optional<double> fixed_clock_tick;
  MipSolveOptions solve;
};

struct BenchResult {
  std::vector<MetricsRow> rows;
  double tuned_gamma = 0.0;
  std::vector<long> tune_probe_counts;  // sub-MIP solves per validation instance
  std::vector<long> tal_probe_counts;   // sub-MIP solves per test instance
  std::string csv;
  nlohmann::ordered_json summary;
};

namespace detail {

// Primal bound with the cap fallback, so infeasible or incumbent-free runs
// still produce a comparable (pessimistic) value.
inline std::optional<double> pb_or_cap(const SolveTrace& t, double budget,
                                       std::optional<double> cap) {
  return primal_bound_at(t, budget, cap);
}

inline std::optional<double> instance_cap(const MipInstance& inst,
                                          std::optional<double> override_cap) {
  if (override_cap) return override_cap;
  Assignment all_upper{inst.upper};
  if (check_feasible(inst, all_upper, 1e-9))
    return objective_value(inst, all_upper);
  return std::nullopt;
}

}  // namespace detail

// Validation-set line search for the confidence cutoff: one probe per grid
// point plus ceil(log2(grid)) bisection refinements, scored by mean final
// primal bound with the cap fallback. Returns the cutoff and the number of
// sub-MIP solves spent per validation instance.
inline std::pair<double, std::vector<long>> tune_cutoff(
    const std::vector<ScoredInstance>& validation,
    const std::vector<double>& grid, std::optional<double> global_cap,
    const BenchConfig& cfg) {
  ExperimentOptions opts;
  opts.budget = cfg.budget;
  opts.workers = cfg.workers;
  opts.fixed_clock_tick = cfg.fixed_clock_tick;
  opts.solve = cfg.solve;
  std::vector<long> probes(validation.size(), 0);
  const auto score = [&](double gamma) {
    double sum = 0.0;
    const auto vals = detail::parallel_map<double>(
        validation.size(), cfg.workers, [&](size_t i) {
          const PartialAssignment pa = cf_assignment(validation[i].output, gamma);
          const SolveTrace t =
              detail::run_with_clock(fix_variables(*validation[i].instance, pa),
                                     cfg.budget, SolveMode::kOptimize, opts);
          const auto cap =
              detail::instance_cap(*validation[i].instance, global_cap);
          const auto pb = detail::pb_or_cap(t, cfg.budget, cap);
          return pb ? *pb : 1e30;  // no incumbent and no cap: worst score
        });
    for (size_t i = 0; i < validation.size(); ++i) {
      ++probes[i];
      sum += vals[i];
    }
    return validation.empty() ? 0.0 : sum / validation.size();
  };

  double best_gamma = grid.front();
  double best_score = kInf;
  for (double gamma : grid) {
    const double s = score(gamma);
    if (s < best_score) {
      best_score = s;
      best_gamma = gamma;
    }
  }
  // Bisection refinement between the neighbours of the best grid point.
  size_t bi = 0;
  for (size_t i = 0; i < grid.size(); ++i)
    if (grid[i] == best_gamma) bi = i;
  double lo = grid[bi == 0 ? 0 : bi - 1];
  double hi = grid[std::min(grid.size() - 1, bi + 1)];
  const int refinements =
      static_cast<int>(std::ceil(std::log2(static_cast<double>(grid.size()))));
  for (int step = 0; step < refinements; ++step) {
    const double mid = best_gamma < 0.5 * (lo + hi)
                           ? 0.5 * (lo + best_gamma)
                           : 0.5 * (best_gamma + hi);
    const double s = score(mid);
    if (s < best_score) {
      best_score = s;
      if (mid < best_gamma)
        hi = best_gamma;
      else
        lo = best_gamma;
      best_gamma = mid;
    } else {
      if (mid < best_gamma)
        lo = mid;
      else
        hi = mid;
    }
  }
  return {best_gamma, probes};
}

// Head-to-head run of {baseline, CF(gamma), CF(auto), TaL} under one budget.
// The per-instance reference is the long reference solve merged with the
// best bound any method produced, which keeps the reference defined even
// when the plain solver finds nothing within its budget.
inline BenchResult run_benchmark(const BenchConfig& cfg) {
  BenchResult result;
  ExperimentOptions opts;
  opts.budget = cfg.budget;
  opts.workers = cfg.workers;
  opts.fixed_clock_tick = cfg.fixed_clock_tick;
  opts.solve = cfg.solve;

  std::vector<ScoredInstance> validation_scored;
  for (const MipInstance& inst : cfg.validation)
    validation_scored.push_back(score_instance(cfg.nd_model, inst, cfg.solve.lp));
  auto [tuned_gamma, tune_probes] =
      tune_cutoff(validation_scored, cfg.gamma_grid, cfg.pi_cap, cfg);
  result.tuned_gamma = tuned_gamma;
  result.tune_probe_counts = std::move(tune_probes);

  struct PerInstance {
    std::vector<MetricsRow> rows;
    std::vector<SolveTrace> traces;
    std::optional<double> reference;
    bool reference_proven = false;
    long tal_probes = 0;
  };

  result.tal_probe_counts.assign(cfg.test.size(), 0);
  const auto per_instance = detail::parallel_map<PerInstance>(
      cfg.test.size(), cfg.workers, [&](size_t i) {
        const MipInstance& inst = cfg.test[i];
        PerInstance out;
        const auto cap = detail::instance_cap(inst, cfg.pi_cap);
        const ScoredInstance nd = score_instance(cfg.nd_model, inst, cfg.solve.lp);

        const auto push = [&](const std::string& method, SolveTrace trace) {
          MetricsRow row;
          row.instance = inst.name;
          row.method = method;
          row.seconds = trace.elapsed;
          row.pb = detail::pb_or_cap(trace, cfg.budget, cap);
          out.rows.push_back(row);
          out.traces.push_back(std::move(trace));
        };

        push("baseline",
             detail::run_with_clock(inst, cfg.budget, SolveMode::kOptimize, opts));
        push("cf", detail::run_with_clock(
                       fix_variables(inst, cf_assignment(nd.output, cfg.gamma)),
                       cfg.budget, SolveMode::kOptimize, opts));
        push("cf_auto",
             detail::run_with_clock(
                 fix_variables(inst, cf_assignment(nd.output, tuned_gamma)),
                 cfg.budget, SolveMode::kOptimize, opts));
        if (cfg.tal_model) {
          const ScoredInstance tal =
              score_instance(*cfg.tal_model, inst, cfg.solve.lp);
          const double coverage = tal.output.heads[kCoverageHead];
          const PartialAssignment pa = realize_subset(
              tal.output, coverage, SubsetStrategy::kConfidenceTopK);
          out.tal_probes = 1;  // exactly one sub-MIP per test instance
          push("tal", detail::run_with_clock(fix_variables(inst, pa), cfg.budget,
                                             SolveMode::kOptimize, opts));
        }

        const auto ref = reference_optimum(inst, cfg.reference_budget, cfg.solve);
        if (ref) {
          out.reference = ref->objective;
          out.reference_proven = ref->kind == ReferenceKind::kProven;
        }
        for (const MetricsRow& row : out.rows)
          if (row.pb && (!out.reference || *row.pb < *out.reference)) {
            out.reference = *row.pb;
            out.reference_proven = false;
          }
        for (size_t k = 0; k < out.rows.size(); ++k) {
          MetricsRow& row = out.rows[k];
          if (!out.reference) continue;
          row.pi = primal_integral(out.traces[k], cfg.budget, *out.reference, cap);
          if (row.pb) {
            row.og_pct = optimality_gap(*row.pb, *out.reference);
            row.optimal = out.reference_proven &&
                          std::fabs(*row.pb - *out.reference) <=
                              1e-6 * std::max(1.0, std::fabs(*out.reference));
          }
        }
        return out;
      });

  nlohmann::ordered_json references = nlohmann::ordered_json::array();
  for (size_t i = 0; i < per_instance.size(); ++i) {
    result.tal_probe_counts[i] = per_instance[i].tal_probes;
    for (const MetricsRow& row : per_instance[i].rows) result.rows.push_back(row);
    nlohmann::ordered_json r;
    r["instance"] = cfg.test[i].name;
    r["reference"] = per_instance[i].reference
                         ? nlohmann::ordered_json(*per_instance[i].reference)
                         : nlohmann::ordered_json(nullptr);
    r["proven"] = per_instance[i].reference_proven;
    references.push_back(std::move(r));
  }

  std::string csv = "instance,method,pi,pb,og_pct,optimal,seconds\n";
  for (const MetricsRow& r : result.rows)
    csv += r.instance + "," + r.method + "," + detail::fmt_opt(r.pi) + "," +
           detail::fmt_opt(r.pb) + "," + detail::fmt_opt(r.og_pct) + "," +
           (r.optimal ? "1" : "0") + "," + detail::fmt_double(r.seconds) + "\n";
  result.csv = std::move(csv);

  nlohmann::ordered_json summary;
  summary["budget"] = cfg.budget;
  summary["gamma"] = cfg.gamma;
  summary["tuned_gamma"] = result.tuned_gamma;
  summary["seed"] = cfg.seed;
  summary["fixed_clock_tick"] = cfg.fixed_clock_tick
                                    ? nlohmann::ordered_json(*cfg.fixed_clock_tick)
                                    : nlohmann::ordered_json(nullptr);
  summary["references"] = std::move(references);
  auto& methods = summary["methods"] = nlohmann::ordered_json::object();
  for (const std::string method : {"baseline", "cf", "cf_auto", "tal"}) {
    int count = 0, optimal = 0, with_pi = 0, with_og = 0;
    double pi = 0.0, pb = 0.0, og = 0.0;
    int with_pb = 0;
    for (const MetricsRow& r : result.rows) {
      if (r.method != method) continue;
      ++count;
      if (r.pi) {
        ++with_pi;
        pi += *r.pi;
      }
      if (r.pb) {
        ++with_pb;
        pb += *r.pb;
      }
      if (r.og_pct) {
        ++with_og;
        og += *r.og_pct;
      }
      if (r.optimal) ++optimal;
    }
    if (count == 0) continue;
    nlohmann::ordered_json m;
    m["instances"] = count;
    m["mean_pi"] = with_pi ? nlohmann::ordered_json(pi / with_pi)
                           : nlohmann::ordered_json(nullptr);
    m["mean_pb"] = with_pb ? nlohmann::ordered_json(pb / with_pb)
                           : nlohmann::ordered_json(nullptr);
    m["mean_og_pct"] = with_og ? nlohmann::ordered_json(og / with_og)
                               : nlohmann::ordered_json(nullptr);
    m["optimal_rate"] = static_cast<double>(optimal) / count;
    methods[method] = std::move(m);
  }
  result.summary = std::move(summary);
  return result;
}

}  // namespace mipdive

#endif  // MIPDIVE_EXPERIMENTS_HPP_
