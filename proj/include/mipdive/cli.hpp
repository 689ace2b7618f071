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

#ifndef MIPDIVE_CLI_HPP_
#define MIPDIVE_CLI_HPP_

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mipdive/experiments.hpp"
#include "mipdive/generators.hpp"
#include "mipdive/json_io.hpp"
#include "mipdive/mps.hpp"
#include "mipdive/properties.hpp"

namespace mipdive::cli {

namespace fs = std::filesystem;

inline constexpr const char* kVersion = "0.1.0";

namespace detail {

inline fs::path run_dir(const std::string& out_flag, const std::string& sub) {
  if (!out_flag.empty()) return fs::path(out_flag);
  const char* root = std::getenv("MIPDIVE_RUN_ROOT");
  return fs::path(root ? root : "runs") / sub;
}

inline void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

inline void write_run_manifest(const fs::path& dir, const std::string& command,
                               const nlohmann::ordered_json& args) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["version"] = kVersion;
  j["args"] = args;
  write_file(dir / "manifest.json", j.dump(2) + "\n");
}

inline std::vector<fs::path> instance_files(const std::string& dir) {
  if (!fs::is_directory(dir))
    throw std::runtime_error("not an instance directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json" &&
        e.path().filename() != "manifest.json")
      files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty())
    throw std::runtime_error("no instance JSON files in " + dir);
  return files;
}

inline std::vector<MipInstance> load_instances(const std::string& dir) {
  std::vector<MipInstance> out;
  for (const fs::path& p : instance_files(dir))
    out.push_back(read_instance_file(p.string()));
  return out;
}

inline ModelParams load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read model checkpoint: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return read_params_json(ss.str());
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

// Orchestrates the pipeline: generate, collect, train-nd, train-tal, solve,
// sweep, bench, verify-theory. Every run writes its artifacts plus a
// manifest echoing the configuration into one run directory.
inline int dispatch(int argc, char** argv) {
  CLI::App app{"learning-guided partial variable assignment for MIPs"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  int workers = 1;
  double fixed_clock = 0.0;  // 0 disables the deterministic clock
  app.add_option("--workers", workers, "worker threads for batch runs");
  app.add_option("--fixed-clock", fixed_clock,
                 "tick of the deterministic clock (0 = wall clock)");

  std::string out_dir;

  // ---- generate ----
  auto* generate = app.add_subcommand("generate", "write instance files");
  int g_rows = 50, g_cols = 100, g_nodes = 50, g_affinity = 4, g_count = 1;
  double g_density = 0.05;
  uint64_t g_seed = 1;
  std::string g_family;
  generate->add_option("family", g_family, "set-cover or indep-set")
      ->required()
      ->check(CLI::IsMember({"set-cover", "indep-set"}));
  generate->add_option("--rows", g_rows);
  generate->add_option("--cols", g_cols);
  generate->add_option("--density", g_density);
  generate->add_option("--nodes", g_nodes);
  generate->add_option("--affinity", g_affinity);
  generate->add_option("--seed", g_seed);
  generate->add_option("--count", g_count, "number of instances (seed,+1,...)");
  generate->add_option("--out", out_dir);

  // ---- collect ----
  auto* collect = app.add_subcommand("collect", "solve for training targets");
  std::string c_instances;
  double c_budget = 2.0;
  collect->add_option("--instances", c_instances)->required();
  collect->add_option("--budget", c_budget, "seconds per instance");
  collect->add_option("--out", out_dir);

  // ---- train-nd ----
  auto* train_nd_cmd = app.add_subcommand("train-nd", "train the value model");
  std::string t_manifest;
  int t_epochs = 60;
  double t_lr = 1e-3;
  uint64_t t_seed = 1;
  train_nd_cmd->add_option("--manifest", t_manifest)->required();
  train_nd_cmd->add_option("--epochs", t_epochs);
  train_nd_cmd->add_option("--lr", t_lr);
  train_nd_cmd->add_option("--seed", t_seed);
  train_nd_cmd->add_option("--out", out_dir);

  // ---- train-tal ----
  auto* train_tal_cmd =
      app.add_subcommand("train-tal", "threshold-aware training");
  std::string a_model, a_instances;
  int a_outer = 5, a_inner = 8, a_probes = 5;
  double a_tau = 1.0, a_lr = 0.05;
  uint64_t a_seed = 1;
  train_tal_cmd->add_option("--model", a_model)->required();
  train_tal_cmd->add_option("--instances", a_instances)->required();
  train_tal_cmd->add_option("--outer", a_outer);
  train_tal_cmd->add_option("--inner", a_inner);
  train_tal_cmd->add_option("--tau", a_tau, "seconds per probe");
  train_tal_cmd->add_option("--probes", a_probes);
  train_tal_cmd->add_option("--lr", a_lr);
  train_tal_cmd->add_option("--seed", a_seed);
  train_tal_cmd->add_option("--out", out_dir);

  // ---- solve ----
  auto* solve = app.add_subcommand("solve", "solve one instance");
  std::string s_mode = "baseline", s_instance, s_model;
  double s_budget = 2.0, s_gamma = 0.9;
  solve->add_option("--mode", s_mode)
      ->check(CLI::IsMember({"baseline", "cf", "tal"}));
  solve->add_option("--instance", s_instance)->required();
  solve->add_option("--model", s_model);
  solve->add_option("--budget", s_budget);
  solve->add_option("--gamma", s_gamma);
  solve->add_option("--out", out_dir);

  // ---- sweep ----
  auto* sweep = app.add_subcommand("sweep", "cutoff or coverage curves");
  std::string w_kind, w_model, w_instances, w_scales, w_strategy = "topk";
  std::vector<double> w_gammas{0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99, 1.0};
  std::vector<double> w_rhos;
  int w_samples = 1;
  double w_budget = 1.0;
  uint64_t w_seed = 1;
  bool w_first_feasible = false;
  sweep->add_option("kind", w_kind, "cutoff or coverage")
      ->required()
      ->check(CLI::IsMember({"cutoff", "coverage"}));
  sweep->add_option("--model", w_model)->required();
  sweep->add_option("--instances", w_instances, "instance dir (cutoff)");
  sweep->add_option("--scales", w_scales,
                    "comma-separated instance dirs, one per scale (coverage)");
  sweep->add_option("--gammas", w_gammas)->delimiter(',');
  sweep->add_option("--rhos", w_rhos)->delimiter(',');
  sweep->add_option("--samples", w_samples);
  sweep->add_option("--strategy", w_strategy)
      ->check(CLI::IsMember({"topk", "bernoulli"}));
  sweep->add_option("--budget", w_budget);
  sweep->add_option("--seed", w_seed);
  sweep->add_flag("--first-feasible", w_first_feasible,
                  "stop sub-MIP solves at the first incumbent");
  sweep->add_option("--out", out_dir);

  // ---- bench ----
  auto* bench = app.add_subcommand("bench", "head-to-head benchmark");
  std::string b_config;
  bench->add_option("--config", b_config)->required();
  bench->add_option("--out", out_dir);

  // ---- verify-theory ----
  auto* verify = app.add_subcommand("verify-theory",
                                    "run the brute-force theory checks");
  int v_max_vars = 10, v_instances = 6;
  uint64_t v_seed = 1;
  verify->add_option("--max-vars", v_max_vars);
  verify->add_option("--instances", v_instances);
  verify->add_option("--seed", v_seed);
  verify->add_option("--out", out_dir);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the usage error
    return code == 0 ? 0 : 2;
  }

  const auto fixed_tick = fixed_clock > 0.0
                              ? std::optional<double>(fixed_clock)
                              : std::nullopt;
  try {
    if (*generate) {
      const fs::path dir = detail::run_dir(out_dir, "generate");
      nlohmann::ordered_json args{{"family", g_family}, {"seed", g_seed},
                                  {"count", g_count}};
      for (int i = 0; i < g_count; ++i) {
        const uint64_t seed = g_seed + static_cast<uint64_t>(i);
        const MipInstance inst =
            g_family == "set-cover"
                ? gen_set_cover(g_rows, g_cols, g_density, seed)
                : gen_indep_set(g_nodes, g_affinity, seed);
        detail::write_file(dir / (inst.name + ".json"), write_instance_json(inst));
      }
      if (g_family == "set-cover") {
        args["rows"] = g_rows;
        args["cols"] = g_cols;
        args["density"] = g_density;
      } else {
        args["nodes"] = g_nodes;
        args["affinity"] = g_affinity;
      }
      detail::write_run_manifest(dir, "generate", args);
      std::cout << "wrote " << g_count << " instance(s) to " << dir << "\n";
      return 0;
    }

    if (*collect) {
      const fs::path dir = detail::run_dir(out_dir, "collect");
      const auto files = detail::instance_files(c_instances);
      std::vector<MipInstance> instances;
      for (const auto& f : files) instances.push_back(read_instance_file(f.string()));
      CollectStats stats;
      const auto examples = collect_targets(instances, c_budget, &stats);
      std::vector<std::pair<std::string, TrainingExample>> entries;
      size_t fi = 0;
      for (size_t i = 0; i < instances.size(); ++i) {
        if (fi < examples.size() && examples[fi].instance == instances[i])
          entries.push_back({files[i].string(), examples[fi++]});
      }
      detail::write_file(dir / "targets.json", write_manifest_json(entries));
      detail::write_run_manifest(
          dir, "collect",
          {{"instances", c_instances}, {"budget", c_budget},
           {"kept", stats.kept}, {"dropped", stats.dropped}});
      std::cout << "kept " << stats.kept << ", dropped " << stats.dropped << "\n";
      return 0;
    }

    if (*train_nd_cmd) {
      const fs::path dir = detail::run_dir(out_dir, "train-nd");
      const auto manifest = nlohmann::json::parse(detail::slurp(t_manifest));
      std::vector<TrainingExample> examples;
      for (const auto& e : manifest) {
        TrainingExample ex;
        ex.instance = read_instance_file(e.at("instance").get<std::string>());
        ex.target.values = e.at("target").get<std::vector<double>>();
        ex.status = e.at("status").get<std::string>() == "Optimal"
                        ? MipStatus::kOptimal
                        : MipStatus::kFeasible;
        examples.push_back(std::move(ex));
      }
      const NdTrainResult r = train_nd(examples, t_epochs, t_lr, t_seed);
      detail::write_file(dir / "model.json", write_params_json(r.params));
      nlohmann::ordered_json curve = r.loss_curve;
      detail::write_file(dir / "loss_curve.json", curve.dump() + "\n");
      detail::write_run_manifest(dir, "train-nd",
                                 {{"manifest", t_manifest}, {"epochs", t_epochs},
                                  {"lr", t_lr}, {"seed", t_seed}});
      std::cout << "final loss " << r.loss_curve.back() << ", model in " << dir
                << "\n";
      return 0;
    }

    if (*train_tal_cmd) {
      const fs::path dir = detail::run_dir(out_dir, "train-tal");
      const ModelParams pretrained = detail::load_model(a_model);
      const auto instances = detail::load_instances(a_instances);
      TalOptions opts;
      opts.tau = a_tau;
      opts.probes = a_probes;
      opts.lr = a_lr;
      opts.seed = a_seed;
      const TalState state = train_tal(pretrained, instances, a_outer, a_inner, opts);
      detail::write_file(dir / "model_tal.json", write_params_json(state.params));
      std::string log;
      for (const TalStepLog& s : state.log) log += tal_log_line(s) + "\n";
      detail::write_file(dir / "runlog.jsonl", log);
      detail::write_run_manifest(
          dir, "train-tal",
          {{"model", a_model}, {"instances", a_instances}, {"outer", a_outer},
           {"inner", a_inner}, {"tau", a_tau}, {"probes", a_probes},
           {"lr", a_lr}, {"seed", a_seed},
           {"null_break_fraction",
            state.inner_steps == 0
                ? 0.0
                : static_cast<double>(state.null_breaks) / state.inner_steps}});
      std::cout << "tal heads trained over " << state.inner_steps
                << " inner steps (" << state.null_breaks << " null breaks)\n";
      return 0;
    }

    if (*solve) {
      const fs::path dir = detail::run_dir(out_dir, "solve");
      const MipInstance inst = read_instance_file(s_instance);
      MipSolveOptions sopts;
      DeterministicClock fake(fixed_tick.value_or(1e-4));
      if (fixed_tick) sopts.clock = &fake;
      SolveTrace trace;
      double coverage = 0.0;
      if (s_mode == "baseline") {
        trace = solve_mip(inst, s_budget, SolveMode::kOptimize, sopts);
      } else {
        if (s_model.empty())
          throw std::runtime_error("--model is required for cf/tal modes");
        const ModelParams model = detail::load_model(s_model);
        const ScoredInstance scored = score_instance(model, inst);
        PartialAssignment pa;
        if (s_mode == "cf") {
          pa = cf_assignment(scored.output, s_gamma);
        } else {
          pa = realize_subset(scored.output,
                              scored.output.heads[kCoverageHead],
                              SubsetStrategy::kConfidenceTopK);
        }
        coverage = pa.coverage;
        trace = solve_mip(fix_variables(inst, pa), s_budget,
                          SolveMode::kOptimize, sopts);
      }
      nlohmann::ordered_json j;
      j["instance"] = inst.name;
      j["mode"] = s_mode;
      j["coverage"] = coverage;
      j["status"] = static_cast<int>(trace.status);
      j["dual_bound"] = trace.dual_bound;
      auto& events = j["events"] = nlohmann::ordered_json::array();
      for (const auto& e : trace.events)
        events.push_back({{"time", e.time}, {"objective", e.objective}});
      if (trace.best) j["best"] = trace.best->values;
      detail::write_file(dir / "result.json", j.dump(2) + "\n");
      detail::write_run_manifest(dir, "solve",
                                 {{"instance", s_instance}, {"mode", s_mode},
                                  {"budget", s_budget}, {"gamma", s_gamma}});
      if (trace.has_incumbent())
        std::cout << "primal bound " << trace.best_objective() << "\n";
      else
        std::cout << "no incumbent\n";
      return 0;
    }

    if (*sweep) {
      const fs::path dir = detail::run_dir(out_dir, "sweep-" + w_kind);
      const ModelParams model = detail::load_model(w_model);
      ExperimentOptions opts;
      opts.budget = w_budget;
      opts.workers = workers;
      opts.seed = w_seed;
      opts.fixed_clock_tick = fixed_tick;
      opts.mode = w_first_feasible ? SolveMode::kFirstFeasible
                                   : SolveMode::kOptimize;
      if (w_kind == "cutoff") {
        if (w_instances.empty())
          throw std::runtime_error("sweep cutoff needs --instances");
        std::vector<MipInstance> instances = detail::load_instances(w_instances);
        std::vector<ScoredInstance> scored;
        for (const MipInstance& inst : instances)
          scored.push_back(score_instance(model, inst));
        const auto rows = sweep_cutoff(scored, w_gammas, opts);
        detail::write_file(dir / "cutoff.csv", cutoff_csv(rows));
      } else {
        if (w_scales.empty())
          throw std::runtime_error("sweep coverage needs --scales");
        if (w_rhos.empty())
          for (int i = 0; i <= 20; ++i) w_rhos.push_back(i / 20.0);
        std::vector<std::pair<int, std::vector<MipInstance>>> scales;
        std::stringstream ss(w_scales);
        std::string part;
        int label = 1;
        while (std::getline(ss, part, ','))
          scales.push_back({label++, detail::load_instances(part)});
        const auto rows = sweep_coverage(
            model, scales, w_rhos,
            w_strategy == "topk" ? SubsetStrategy::kConfidenceTopK
                                 : SubsetStrategy::kBernoulliRandom,
            w_samples, opts);
        detail::write_file(dir / "coverage.csv", coverage_csv(rows));
      }
      detail::write_run_manifest(
          dir, "sweep",
          {{"kind", w_kind}, {"model", w_model}, {"budget", w_budget},
           {"samples", w_samples}, {"strategy", w_strategy}, {"seed", w_seed},
           {"workers", workers},
           {"fixed_clock", fixed_tick ? nlohmann::ordered_json(*fixed_tick)
                                       : nlohmann::ordered_json(nullptr)}});
      std::cout << "sweep written to " << dir << "\n";
      return 0;
    }

    if (*bench) {
      const fs::path dir = detail::run_dir(out_dir, "bench");
      const auto cj = nlohmann::json::parse(detail::slurp(b_config));
      BenchConfig cfg;
      cfg.validation = detail::load_instances(cj.at("validation").get<std::string>());
      cfg.test = detail::load_instances(cj.at("test").get<std::string>());
      cfg.nd_model = detail::load_model(cj.at("model").get<std::string>());
      if (cj.contains("tal_model"))
        cfg.tal_model = detail::load_model(cj.at("tal_model").get<std::string>());
      cfg.budget = cj.value("budget", 2.0);
      cfg.gamma = cj.value("gamma", 0.9);
      if (cj.contains("gamma_grid"))
        cfg.gamma_grid = cj.at("gamma_grid").get<std::vector<double>>();
      cfg.reference_budget = cj.value("reference_budget", 20.0);
      if (cj.contains("pi_cap")) cfg.pi_cap = cj.at("pi_cap").get<double>();
      cfg.seed = cj.value("seed", 0);
      cfg.workers = workers;
      cfg.fixed_clock_tick = fixed_tick;
      if (cj.contains("fixed_clock_tick") && !cj.at("fixed_clock_tick").is_null())
        cfg.fixed_clock_tick = cj.at("fixed_clock_tick").get<double>();
      const BenchResult result = run_benchmark(cfg);
      detail::write_file(dir / "bench.csv", result.csv);
      nlohmann::ordered_json summary = result.summary;
      summary["config_file"] = b_config;
      summary["config"] = cj;
      detail::write_file(dir / "summary.json", summary.dump(2) + "\n");
      detail::write_run_manifest(dir, "bench",
                                 {{"config", b_config}, {"workers", workers}});
      std::cout << "benchmark written to " << dir << " (tuned gamma "
                << result.tuned_gamma << ")\n";
      return 0;
    }

    if (*verify) {
      const fs::path dir = detail::run_dir(out_dir, "verify-theory");
      std::string report;
      bool all_ok = true;
      const auto line = [&](const std::string& name, bool ok,
                            const std::string& detail_msg) {
        report += std::string(ok ? "PASS" : "FAIL") + " " + name +
                  (detail_msg.empty() ? "" : " (" + detail_msg + ")") + "\n";
        all_ok = all_ok && ok;
      };

      long p_pairs = 0, p_viol = 0, q_pairs = 0, q_viol = 0;
      for (int i = 0; i < v_instances; ++i) {
        const uint64_t seed = v_seed + static_cast<uint64_t>(i);
        const int cols = std::min(v_max_vars, 10);
        MipInstance inst = gen_set_cover(std::max(2, cols / 2), cols, 0.3, seed);
        const SolveTrace t = solve_mip(inst, 10.0, SolveMode::kOptimize);
        if (!t.has_incumbent()) continue;
        const auto pres = check_feasible_completion_monotone(inst, *t.best);
        p_pairs += pres.pairs_checked;
        p_viol += pres.violations;
        const LpResult root = solve_lp(inst);
        const double kappa =
            root.objective + 0.3 * (t.best_objective() - root.objective);
        const auto qres = check_lpsat_monotone(inst, *t.best, kappa);
        q_pairs += qres.pairs_checked;
        q_viol += qres.violations;
      }
      line("completability-monotone-decreasing", p_viol == 0,
           std::to_string(p_pairs) + " chain pairs");
      line("lp-criterion-monotone-increasing", q_viol == 0,
           std::to_string(q_pairs) + " chain pairs");

      bool bce_ok = true;
      for (double mu : {0.1, 0.5, 0.9}) {
        std::vector<double> targets;
        for (int i = 0; i < 10; ++i) targets.push_back(i < mu * 10 ? 1.0 : 0.0);
        const double w = bce_minimizer_descent(targets, 10000, 0.05);
        bce_ok = bce_ok && std::fabs(w - mu) <= 1e-4;
      }
      line("bce-minimizer-identity", bce_ok, "targets 0.1/0.5/0.9");

      detail::write_file(dir / "report.txt", report);
      detail::write_run_manifest(dir, "verify-theory",
                                 {{"max_vars", v_max_vars},
                                  {"instances", v_instances}, {"seed", v_seed}});
      std::cout << report;
      return all_ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace mipdive::cli

#endif  // MIPDIVE_CLI_HPP_
