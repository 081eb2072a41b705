// Command-line harness: instance generation from experiment configs, single
// solver runs, the full benchmark protocol and certificate verification.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "l1bench/bench.hpp"
#include "l1bench/serialize.hpp"

namespace fs = std::filesystem;
using namespace l1bench;

namespace {

int cmd_generate(const std::string& config_path, const std::string& out_dir) {
  const ExperimentConfig cfg = load_config(config_path);
  fs::create_directories(fs::path(out_dir));
  for (const auto& job : enumerate_jobs(cfg)) {
    const fs::path path = fs::path(out_dir) / (job.name + ".l1i");
    ProblemInstance inst;
    if (fs::exists(path)) {
      inst = load_instance(path.string());
      std::printf("%s: exists, kept\n", path.c_str());
    } else {
      inst = build_instance(cfg, job);
      save_instance(inst, path.string());
      std::printf("%s: written\n", path.c_str());
    }
    if (inst.conditioning) {
      std::printf("  m=%zu n=%zu s=%zu kappa_gram=%.4g kappa_solution(rho=%.2g)=%.4g\n",
                  inst.rows(), inst.cols(), inst.x_star.nnz(), inst.conditioning->kappa_gram,
                  inst.conditioning->rho, inst.conditioning->kappa_solution);
    }
  }
  return 0;
}

int cmd_solve(const std::string& instance_path, SolverConfig cfg,
              const std::optional<std::string>& trace_path) {
  const ProblemInstance inst = load_instance(instance_path);
  const SolverTrace trace = run_solver(inst, cfg);
  std::printf("solver=%s status=%s iters=%zu objective=%.10g matvecs=%.1f elapsed=%.3fs\n",
              trace.solver.c_str(), to_string(trace.status),
              trace.samples.empty() ? 0 : trace.samples.back().iter, trace.final_objective,
              trace.total_matvecs, trace.elapsed_s);
  if (trace.solver == "newton_cg") {
    std::printf("newton_steps=%zu pcg_iterations=%zu\n", trace.newton_steps,
                trace.total_pcg_iterations);
  }
  if (trace_path) {
    write_trace_csv(trace, *trace_path);
    std::printf("trace written to %s\n", trace_path->c_str());
  }
  return 0;
}

int cmd_bench(const std::optional<std::string>& preset, const std::optional<std::string>& config,
              const std::string& out_dir, bool list) {
  if (list) {
    for (const auto& [name, cfg] : presets()) {
      std::printf("%-22s %zu instance(s), %zu solver(s)\n", name.c_str(),
                  enumerate_jobs(cfg).size(), cfg.solvers.size());
    }
    return 0;
  }
  ExperimentConfig cfg;
  if (preset) {
    const auto& cat = presets();
    auto it = cat.find(*preset);
    if (it == cat.end()) {
      std::fprintf(stderr, "unknown preset '%s'; use --list to see the catalog\n", preset->c_str());
      return 2;
    }
    cfg = it->second;
  } else if (config) {
    cfg = load_config(*config);
  } else {
    std::fprintf(stderr, "bench: provide --preset NAME or --config FILE\n");
    return 2;
  }
  run_experiment(cfg, out_dir);
  std::printf("summary written to %s/summary.csv\n", out_dir.c_str());
  return 0;
}

int cmd_verify(const std::string& instance_path, double tol) {
  const ProblemInstance inst = load_instance(instance_path);
  const CertificateReport report = verify_optimality(inst, tol);
  std::printf("m=%zu n=%zu tau=%g nnz(x*)=%zu noise_norm=%.6g\n", inst.rows(), inst.cols(),
              inst.tau, inst.x_star.nnz(), inst.noise_norm);
  if (inst.conditioning) {
    std::printf("kappa_gram=%.6g kappa_solution(rho=%.2g)=%.6g\n", inst.conditioning->kappa_gram,
                inst.conditioning->rho, inst.conditioning->kappa_solution);
  }
  std::printf("support violation:     %.3e\n", report.max_support_violation);
  std::printf("off-support violation: %.3e\n", report.max_offsupport_violation);
  std::printf("threshold (tol*tau):   %.3e\n", report.threshold);
  std::printf("certificate: %s\n", report.pass ? "PASS" : "FAIL");
  return report.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"l1bench: l1-regularized least-squares instance generator and solver benchmark"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "bench_out", instance_path;
  std::optional<std::string> preset, config_opt, trace_path;
  bool list_presets = false;
  double tol = 1e-8;
  SolverConfig scfg;
  std::string l_policy = "spectrum";
  double max_seconds = 600.0;

  auto* gen = app.add_subcommand("generate", "write instance files from an experiment config");
  gen->add_option("--config", config_path, "experiment config (JSON)")->required();
  gen->add_option("--out", out_dir, "output directory");

  auto* solve = app.add_subcommand("solve", "run one solver on an instance file");
  solve->add_option("--instance", instance_path, "instance file")->required();
  solve->add_option("--solver", scfg.id, "ista | fista | cd | newton_cg")->required();
  solve->add_option("--target", [&scfg](const std::vector<std::string>& v) {
    scfg.target_objective = std::stod(v.at(0));
    return true;
  }, "stop once the objective falls below this value");
  solve->add_option("--max-iters", scfg.max_iters, "iteration budget");
  solve->add_option("--max-seconds", max_seconds, "wall-clock budget");
  solve->add_option("--seed", scfg.seed, "seed for randomized solvers");
  solve->add_option("--mu", scfg.mu, "smoothing parameter (newton_cg)");
  solve->add_option("--eta", scfg.eta, "PCG relative-residual tolerance");
  solve->add_option("--l-policy", l_policy, "spectrum | backtracking");
  solve->add_option("--varpi", scfg.varpi, "modeled processor count (cd)");
  solve->add_option("--trace", [&trace_path](const std::vector<std::string>& v) {
    trace_path = v.at(0);
    return true;
  }, "write the trace CSV here");

  auto* bench = app.add_subcommand("bench", "run an experiment and collect traces");
  bench->add_option("--preset", [&preset](const std::vector<std::string>& v) {
    preset = v.at(0);
    return true;
  }, "preset name");
  bench->add_option("--config", [&config_opt](const std::vector<std::string>& v) {
    config_opt = v.at(0);
    return true;
  }, "experiment config (JSON)");
  bench->add_option("--out", out_dir, "output directory");
  bench->add_flag("--list", list_presets, "list available presets");

  auto* verify = app.add_subcommand("verify", "check the planted-optimum certificate");
  verify->add_option("--instance", instance_path, "instance file")->required();
  verify->add_option("--tol", tol, "certificate tolerance (scaled by tau)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_generate(config_path, out_dir);
    if (solve->parsed()) {
      scfg.max_seconds = max_seconds;
      scfg.l_policy = l_policy == "backtracking" ? LPolicy::backtracking : LPolicy::spectrum;
      return cmd_solve(instance_path, scfg, trace_path);
    }
    if (bench->parsed()) return cmd_bench(preset, config_opt, out_dir, list_presets);
    if (verify->parsed()) return cmd_verify(instance_path, tol);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
