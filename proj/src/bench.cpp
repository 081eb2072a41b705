#include "l1bench/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "l1bench/serialize.hpp"

namespace l1bench {

namespace fs = std::filesystem;
using nlohmann::json;

void ExperimentConfig::validate() const {
  if (name.empty()) throw std::invalid_argument("ExperimentConfig: name must not be empty");
  if (n_list.empty()) throw std::invalid_argument("ExperimentConfig: dimension schedule is empty");
  if (!(m_ratio >= 1.0)) throw std::invalid_argument("ExperimentConfig: m_ratio must be >= 1");
  if (theta_list.empty()) throw std::invalid_argument("ExperimentConfig: theta schedule is empty");
  if (stage_counts.empty()) throw std::invalid_argument("ExperimentConfig: stage schedule is empty");
  if (tau_list.empty()) throw std::invalid_argument("ExperimentConfig: tau schedule is empty");
  if (solvers.empty()) throw std::invalid_argument("ExperimentConfig: solver list is empty");
  if (spectrum.kind == SpectrumRule::Kind::uniform_q && spectrum.q_list.empty()) {
    throw std::invalid_argument("ExperimentConfig: q schedule is empty");
  }
  if (s_divisor == 0) throw std::invalid_argument("ExperimentConfig: s_divisor must be positive");
  for (double tau : tau_list) {
    if (!(tau > 0.0)) throw std::invalid_argument("ExperimentConfig: tau values must be positive");
  }
  for (const auto& s : solvers) {
    if (!known_solver(s.id)) throw std::invalid_argument("ExperimentConfig: unknown solver '" + s.id + "'");
  }
  for (std::size_t n : n_list) {
    if (n < 2) throw std::invalid_argument("ExperimentConfig: dimensions must be at least 2");
  }
}

// ---------------------------------------------------------------------------
// JSON schema

namespace {

SolverConfig solver_from_json(const json& j) {
  SolverConfig cfg;
  cfg.id = j.at("id").get<std::string>();
  if (j.contains("max_iters")) cfg.max_iters = j.at("max_iters").get<std::size_t>();
  if (j.contains("max_seconds")) cfg.max_seconds = j.at("max_seconds").get<double>();
  if (j.contains("target_objective")) cfg.target_objective = j.at("target_objective").get<double>();
  if (j.contains("mu")) cfg.mu = j.at("mu").get<double>();
  if (j.contains("eta")) cfg.eta = j.at("eta").get<double>();
  if (j.contains("pcg_max_iters")) cfg.pcg_max_iters = j.at("pcg_max_iters").get<std::size_t>();
  if (j.contains("ls_max_backtracks")) cfg.ls_max_backtracks = j.at("ls_max_backtracks").get<std::size_t>();
  if (j.contains("grad_tol_rel")) cfg.grad_tol_rel = j.at("grad_tol_rel").get<double>();
  if (j.contains("l_policy")) {
    const std::string p = j.at("l_policy").get<std::string>();
    if (p == "spectrum") cfg.l_policy = LPolicy::spectrum;
    else if (p == "backtracking") cfg.l_policy = LPolicy::backtracking;
    else throw std::invalid_argument("solver config: unknown l_policy '" + p + "'");
  }
  if (j.contains("l_fixed")) cfg.l_fixed = j.at("l_fixed").get<double>();
  if (j.contains("varpi")) cfg.varpi = j.at("varpi").get<std::size_t>();
  if (j.contains("omega")) cfg.omega = j.at("omega").get<std::size_t>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  return cfg;
}

json solver_to_json(const SolverConfig& cfg) {
  json j;
  j["id"] = cfg.id;
  j["max_iters"] = cfg.max_iters;
  j["max_seconds"] = cfg.max_seconds;
  if (cfg.target_objective) j["target_objective"] = *cfg.target_objective;
  j["mu"] = cfg.mu;
  j["eta"] = cfg.eta;
  j["pcg_max_iters"] = cfg.pcg_max_iters;
  j["ls_max_backtracks"] = cfg.ls_max_backtracks;
  j["grad_tol_rel"] = cfg.grad_tol_rel;
  j["l_policy"] = cfg.l_policy == LPolicy::spectrum ? "spectrum" : "backtracking";
  if (cfg.l_fixed) j["l_fixed"] = *cfg.l_fixed;
  j["varpi"] = cfg.varpi;
  if (cfg.omega) j["omega"] = *cfg.omega;
  j["seed"] = cfg.seed;
  return j;
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig cfg;
  cfg.name = j.at("name").get<std::string>();
  cfg.n_list = j.at("n").get<std::vector<std::size_t>>();
  if (j.contains("m_ratio")) cfg.m_ratio = j.at("m_ratio").get<double>();

  const auto& sp = j.at("spectrum");
  const std::string sk = sp.at("kind").get<std::string>();
  if (sk == "uniform") {
    cfg.spectrum.kind = SpectrumRule::Kind::uniform_q;
    cfg.spectrum.q_list = sp.at("q").get<std::vector<int>>();
    if (sp.contains("shift")) cfg.spectrum.shift = sp.at("shift").get<double>();
  } else if (sk == "alternating") {
    cfg.spectrum.kind = SpectrumRule::Kind::alternating;
    cfg.spectrum.odd_value = sp.at("odd").get<double>();
    cfg.spectrum.even_value = sp.at("even").get<double>();
  } else {
    throw std::invalid_argument("config: unknown spectrum kind '" + sk + "'");
  }

  if (j.contains("theta")) cfg.theta_list = j.at("theta").get<std::vector<double>>();
  if (j.contains("right_stages")) cfg.stage_counts = j.at("right_stages").get<std::vector<std::size_t>>();
  if (j.contains("left_stages")) cfg.left_stage_count = j.at("left_stages").get<std::size_t>();
  if (j.contains("permute")) cfg.permute = j.at("permute").get<bool>();

  const auto& sol = j.at("solution");
  const std::string solk = sol.at("kind").get<std::string>();
  if (solk == "uniform") {
    cfg.solution.kind = SolutionRule::Kind::uniform;
    cfg.solution.gamma = sol.at("gamma").get<double>();
  } else if (solk == "spectral") {
    cfg.solution.kind = SolutionRule::Kind::spectral;
    cfg.solution.gamma = sol.at("gamma").get<double>();
    if (sol.contains("s1_fraction")) cfg.solution.s1_fraction = sol.at("s1_fraction").get<double>();
  } else if (solk == "two_value") {
    cfg.solution.kind = SolutionRule::Kind::two_value;
    cfg.solution.value_a = sol.at("value_a").get<double>();
    cfg.solution.value_b = sol.at("value_b").get<double>();
  } else {
    throw std::invalid_argument("config: unknown solution kind '" + solk + "'");
  }

  if (j.contains("s_divisor")) cfg.s_divisor = j.at("s_divisor").get<std::size_t>();
  if (j.contains("tau")) cfg.tau_list = j.at("tau").get<std::vector<double>>();
  for (const auto& s : j.at("solvers")) cfg.solvers.push_back(solver_from_json(s));
  if (j.contains("reference")) cfg.reference = j.at("reference").get<std::string>();
  if (j.contains("rel_target")) cfg.rel_target = j.at("rel_target").get<double>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.validate();
  return cfg;
}

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  j["n"] = cfg.n_list;
  j["m_ratio"] = cfg.m_ratio;
  json sp;
  if (cfg.spectrum.kind == SpectrumRule::Kind::uniform_q) {
    sp["kind"] = "uniform";
    sp["q"] = cfg.spectrum.q_list;
    sp["shift"] = cfg.spectrum.shift;
  } else {
    sp["kind"] = "alternating";
    sp["odd"] = cfg.spectrum.odd_value;
    sp["even"] = cfg.spectrum.even_value;
  }
  j["spectrum"] = std::move(sp);
  j["theta"] = cfg.theta_list;
  j["right_stages"] = cfg.stage_counts;
  j["left_stages"] = cfg.left_stage_count;
  j["permute"] = cfg.permute;
  json sol;
  switch (cfg.solution.kind) {
    case SolutionRule::Kind::uniform:
      sol["kind"] = "uniform";
      sol["gamma"] = cfg.solution.gamma;
      break;
    case SolutionRule::Kind::spectral:
      sol["kind"] = "spectral";
      sol["gamma"] = cfg.solution.gamma;
      sol["s1_fraction"] = cfg.solution.s1_fraction;
      break;
    case SolutionRule::Kind::two_value:
      sol["kind"] = "two_value";
      sol["value_a"] = cfg.solution.value_a;
      sol["value_b"] = cfg.solution.value_b;
      break;
  }
  j["solution"] = std::move(sol);
  j["s_divisor"] = cfg.s_divisor;
  j["tau"] = cfg.tau_list;
  json solvers = json::array();
  for (const auto& s : cfg.solvers) solvers.push_back(solver_to_json(s));
  j["solvers"] = std::move(solvers);
  j["reference"] = cfg.reference;
  j["rel_target"] = cfg.rel_target;
  j["seed"] = cfg.seed;
  return j;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("load_config: cannot open '" + path + "'");
  json j;
  is >> j;
  return config_from_json(j);
}

// ---------------------------------------------------------------------------
// Job enumeration and instance construction

namespace {

std::string format_double_tag(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

std::vector<InstanceJob> enumerate_jobs(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<InstanceJob> jobs;
  std::vector<std::optional<int>> q_axis;
  if (cfg.spectrum.kind == SpectrumRule::Kind::uniform_q) {
    for (int q : cfg.spectrum.q_list) q_axis.emplace_back(q);
  } else {
    q_axis.emplace_back(std::nullopt);
  }
  std::uint64_t counter = 0;
  for (std::size_t n : cfg.n_list) {
    for (const auto& q : q_axis) {
      for (double theta : cfg.theta_list) {
        for (std::size_t stages : cfg.stage_counts) {
          for (double tau : cfg.tau_list) {
            InstanceJob job;
            job.n = n;
            job.q = q;
            job.theta = theta;
            job.stages = stages;
            job.tau = tau;
            job.seed = mix_seed(cfg.seed, counter++);
            std::string name = cfg.name + "_n" + std::to_string(n);
            name += q ? "_q" + std::to_string(*q) : "_alt";
            if (cfg.theta_list.size() > 1) name += "_th" + format_double_tag(theta);
            if (cfg.stage_counts.size() > 1) name += "_st" + std::to_string(stages);
            if (cfg.tau_list.size() > 1) name += "_tau" + format_double_tag(tau);
            job.name = std::move(name);
            jobs.push_back(std::move(job));
          }
        }
      }
    }
  }
  return jobs;
}

ProblemInstance build_instance(const ExperimentConfig& cfg, const InstanceJob& job) {
  const std::size_t n = job.n;
  const std::size_t m = static_cast<std::size_t>(std::llround(cfg.m_ratio * static_cast<double>(n)));

  auto spec = std::make_shared<OperatorSpec>();
  spec->m = m;
  spec->n = n;
  // Stage pattern of the sparsity-control examples: offsets alternate and the
  // innermost stage always uses offset 0.
  for (std::size_t i = 0; i < job.stages; ++i) {
    const int offset = static_cast<int>((job.stages - 1 - i) % 2);
    spec->right_stages.push_back(RotationStage::paired(n, offset, job.theta));
  }
  for (std::size_t i = 0; i < cfg.left_stage_count; ++i) {
    const int offset = static_cast<int>((cfg.left_stage_count - 1 - i) % 2);
    spec->left_stages.push_back(RotationStage::paired(m, offset, job.theta));
  }
  if (cfg.permute) {
    spec->p1 = Permutation::random(m, mix_seed(job.seed, 1));
    spec->p2 = Permutation::random(m, mix_seed(job.seed, 2));
  }
  if (cfg.spectrum.kind == SpectrumRule::Kind::uniform_q) {
    spec->spectrum = Spectrum::uniform(n, 0.0, std::pow(10.0, *job.q), cfg.spectrum.shift,
                                       mix_seed(job.seed, 3));
  } else {
    spec->spectrum = Spectrum::alternating(n, cfg.spectrum.odd_value, cfg.spectrum.even_value);
  }
  spec->finalize();

  const std::size_t s = std::max<std::size_t>(1, n / cfg.s_divisor);
  Rng rng = make_rng(mix_seed(job.seed, 4));
  SparseSolution x;
  switch (cfg.solution.kind) {
    case SolutionRule::Kind::uniform:
      x = uniform_sparse_solution(n, s, cfg.solution.gamma, rng);
      break;
    case SolutionRule::Kind::spectral: {
      const std::size_t s1 =
          static_cast<std::size_t>(std::llround(cfg.solution.s1_fraction * static_cast<double>(s)));
      x = spectral_sparse_solution(*spec, s1, s - s1, cfg.solution.gamma);
      break;
    }
    case SolutionRule::Kind::two_value: {
      x = uniform_sparse_solution(n, s, 1.0, rng);
      for (std::size_t k = 0; k < x.values.size(); ++k) {
        x.values[k] = k < x.values.size() / 2 ? cfg.solution.value_a : cfg.solution.value_b;
      }
      break;
    }
  }

  Rng gen_rng = make_rng(mix_seed(job.seed, 5));
  ProblemInstance inst =
      generate_instance(job.tau, spec, std::move(x), FillPolicy::interior(), gen_rng);

  ConditioningReport report;
  report.kappa_gram = gram_condition_number(spec->spectrum);
  report.rho = 0.1;
  report.kappa_solution = inst.x_star.nnz() == 0
                              ? 1.0
                              : solution_condition_number(inst.x_star, *spec, report.rho);
  inst.conditioning = report;
  return inst;
}

// ---------------------------------------------------------------------------
// Experiment driver

void emit_plot_data(const std::vector<NamedTrace>& traces, const std::string& out_dir) {
  fs::create_directories(fs::path(out_dir));
  // best-known objective per instance across all traces
  std::map<std::string, double> best;
  for (const auto& nt : traces) {
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& s : nt.trace.samples) lo = std::min(lo, s.objective);
    auto [it, inserted] = best.emplace(nt.instance, lo);
    if (!inserted) it->second = std::min(it->second, lo);
  }
  for (const auto& nt : traces) {
    if (nt.trace.samples.empty()) {
      std::cerr << "emit_plot_data: warning: empty trace for " << nt.instance << "/" << nt.solver
                << ", skipped\n";
      continue;
    }
    const double lo = best.at(nt.instance);
    const fs::path path = fs::path(out_dir) / (nt.instance + "__" + nt.solver + ".dat");
    std::ofstream os(path);
    os << "# elapsed_s objective_gap\n";
    char line[128];
    for (const auto& s : nt.trace.samples) {
      std::snprintf(line, sizeof(line), "%.6f %.17g\n", s.elapsed_s, s.objective - lo);
      os << line;
    }
  }
}

void write_summary_csv(const RunSummary& summary, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_summary_csv: cannot open '" + path + "'");
  os << "instance,solver,status,reached,target,time_to_target_s,matvecs_to_target,"
        "matvecs_total,final_objective,kappa_gram,kappa_solution\n";
  char line[512];
  for (const auto& r : summary.rows) {
    std::snprintf(line, sizeof(line), "%s,%s,%s,%d,%.17g,%.6f,%.3f,%.3f,%.17g,%.6g,%.6g\n",
                  r.instance.c_str(), r.solver.c_str(), to_string(r.status), r.reached_target ? 1 : 0,
                  r.target, r.time_to_target, r.matvecs_to_target, r.matvecs_total,
                  r.final_objective, r.kappa_gram, r.kappa_solution);
    os << line;
  }
}

RunSummary run_experiment(const ExperimentConfig& cfg, const std::string& out_dir, bool quiet) {
  cfg.validate();
  bool has_reference = false;
  for (const auto& s : cfg.solvers) has_reference = has_reference || s.id == cfg.reference;
  if (!has_reference) {
    throw std::invalid_argument("run_experiment: reference solver '" + cfg.reference +
                                "' is not in the solver list");
  }
  const fs::path out(out_dir);
  fs::create_directories(out / "instances");
  fs::create_directories(out / "traces");

  const std::vector<InstanceJob> jobs = enumerate_jobs(cfg);
  RunSummary summary;
  std::vector<NamedTrace> traces;

  for (const auto& job : jobs) {
    const fs::path inst_path = out / "instances" / (job.name + ".l1i");
    ProblemInstance inst;
    if (fs::exists(inst_path)) {
      inst = load_instance(inst_path.string());
    } else {
      inst = build_instance(cfg, job);
      save_instance(inst, inst_path.string());
    }
    const double f_star = inst.objective_at_planted();
    double b_sq = 0.0;
    for (double v : inst.b) b_sq += v * v;
    const double f_zero = 0.5 * b_sq;

    if (!quiet) {
      std::printf("[%s] n=%zu kappa=%.2e f*=%.6g\n", job.name.c_str(), inst.cols(),
                  inst.conditioning ? inst.conditioning->kappa_gram : 0.0, f_star);
      std::fflush(stdout);
    }

    // Reference run fixes the target for the rest.
    SolverConfig ref_cfg;
    bool found = false;
    for (const auto& s : cfg.solvers) {
      if (s.id == cfg.reference) {
        ref_cfg = s;
        found = true;
        break;
      }
    }
    if (!found) throw std::logic_error("run_experiment: reference disappeared after validation");
    if (!ref_cfg.target_objective) {
      ref_cfg.target_objective = f_star + cfg.rel_target * std::max(f_zero - f_star, 0.0);
    }
    SolverTrace ref_trace = run_solver(inst, ref_cfg);
    double achieved = std::numeric_limits<double>::infinity();
    for (const auto& s : ref_trace.samples) achieved = std::min(achieved, s.objective);

    auto record = [&](const SolverConfig& scfg, SolverTrace trace, double target) {
      RunRecord row;
      row.instance = job.name;
      row.solver = scfg.id;
      row.status = trace.status;
      row.reached_target = trace.reached_target;
      row.target = target;
      row.time_to_target = trace.reached_target ? trace.time_to_target : trace.elapsed_s;
      row.matvecs_to_target = trace.reached_target ? trace.matvecs_to_target : trace.total_matvecs;
      row.matvecs_total = trace.total_matvecs;
      row.final_objective = trace.final_objective;
      if (inst.conditioning) {
        row.kappa_gram = inst.conditioning->kappa_gram;
        row.kappa_solution = inst.conditioning->kappa_solution;
      }
      summary.rows.push_back(row);
      write_trace_csv(trace, (out / "traces" / (job.name + "__" + scfg.id + ".csv")).string());
      traces.push_back({job.name, scfg.id, std::move(trace)});
      if (!quiet) {
        const RunRecord& r = summary.rows.back();
        std::printf("  %-9s %-14s f=%.6g matvecs=%.0f time=%.2fs\n", r.solver.c_str(),
                    to_string(r.status), r.final_objective, r.matvecs_total, r.time_to_target);
        std::fflush(stdout);
      }
    };

    record(ref_cfg, std::move(ref_trace), *ref_cfg.target_objective);

    for (const auto& s : cfg.solvers) {
      if (s.id == cfg.reference) continue;
      SolverConfig run_cfg = s;
      if (!run_cfg.target_objective) run_cfg.target_objective = achieved;
      record(run_cfg, run_solver(inst, run_cfg), *run_cfg.target_objective);
    }
  }

  emit_plot_data(traces, (out / "plots").string());
  write_summary_csv(summary, (out / "summary.csv").string());
  return summary;
}

// ---------------------------------------------------------------------------
// Preset catalog

namespace {

SolverConfig preset_solver(const std::string& id, std::size_t max_iters, double max_seconds) {
  SolverConfig cfg;
  cfg.id = id;
  cfg.max_iters = max_iters;
  cfg.max_seconds = max_seconds;
  return cfg;
}

std::map<std::string, ExperimentConfig> build_presets() {
  std::map<std::string, ExperimentConfig> cat;
  constexpr double two_pi = 6.283185307179586476925286766559;

  {
    // Conditioning sweep: kappa(A^T A) from 1e2 to 1e12, simple solution.
    ExperimentConfig c;
    c.name = "conditioning-sweep";
    c.n_list = {1u << 12};
    c.spectrum.q_list = {0, 1, 2, 3, 4, 5};
    c.theta_list = {two_pi / 3.0};
    c.solution.kind = SolutionRule::Kind::uniform;
    c.solution.gamma = 10.0;
    c.solvers = {preset_solver("ista", 200000, 120), preset_solver("fista", 50000, 120),
                 preset_solver("cd", 20000, 120), preset_solver("newton_cg", 200, 120)};
    c.seed = 101;
    cat[c.name] = std::move(c);
  }
  {
    // Conditioning sweep with the spectrum-aligned solution and two angles.
    ExperimentConfig c;
    c.name = "nontrivial-sweep";
    c.n_list = {1u << 12};
    c.spectrum.q_list = {0, 1, 2, 3};
    c.theta_list = {two_pi / 10.0, two_pi / 1000.0};
    c.solution.kind = SolutionRule::Kind::spectral;
    c.solution.gamma = 100.0;
    c.solvers = {preset_solver("fista", 50000, 120), preset_solver("cd", 20000, 120),
                 preset_solver("newton_cg", 200, 120)};
    c.seed = 202;
    cat[c.name] = std::move(c);
  }
  {
    // Dimension sweep at fixed conditioning.
    ExperimentConfig c;
    c.name = "dimension-sweep";
    c.n_list = {1u << 10, 1u << 12, 1u << 14, 1u << 16};
    c.spectrum.q_list = {1};
    c.theta_list = {two_pi / 10.0};
    c.solution.kind = SolutionRule::Kind::spectral;
    c.solution.gamma = 100.0;
    c.rel_target = 1e-4;
    c.solvers = {preset_solver("fista", 100000, 600), preset_solver("cd", 50000, 600),
                 preset_solver("newton_cg", 200, 600)};
    c.seed = 303;
    cat[c.name] = std::move(c);
  }
  {
    // Gram-density sweep via stage count.
    ExperimentConfig c;
    c.name = "density-sweep";
    c.n_list = {1u << 12};
    c.spectrum.q_list = {1};
    c.theta_list = {two_pi / 10.0};
    c.stage_counts = {1, 2, 3, 4};
    c.solution.kind = SolutionRule::Kind::spectral;
    c.solution.gamma = 100.0;
    c.solvers = {preset_solver("fista", 50000, 120), preset_solver("cd", 20000, 120),
                 preset_solver("newton_cg", 200, 120)};
    c.seed = 404;
    cat[c.name] = std::move(c);
  }
  {
    // Regularization-weight sweep.
    ExperimentConfig c;
    c.name = "tau-sweep";
    c.n_list = {1u << 12};
    c.spectrum.q_list = {1};
    c.theta_list = {two_pi / 10.0};
    c.solution.kind = SolutionRule::Kind::spectral;
    c.solution.gamma = 100.0;
    c.tau_list = {1e-4, 1e-2, 1.0, 1e2, 1e4};
    c.solvers = {preset_solver("fista", 50000, 120), preset_solver("cd", 20000, 120),
                 preset_solver("newton_cg", 200, 120)};
    c.seed = 505;
    cat[c.name] = std::move(c);
  }
  {
    // Alternating-spectrum scaling study, second-order solver only.
    ExperimentConfig c;
    c.name = "alternating-scaling";
    c.n_list = {1u << 12, 1u << 14};
    c.spectrum.kind = SpectrumRule::Kind::alternating;
    c.spectrum.odd_value = 0.1;
    c.spectrum.even_value = 100.0;
    c.theta_list = {two_pi / 3.0};
    c.solution.kind = SolutionRule::Kind::two_value;
    c.solution.value_a = -1e4;
    c.solution.value_b = 1e-1;
    c.s_divisor = 1u << 10;
    c.rel_target = 1e-4;
    c.solvers = {preset_solver("newton_cg", 200, 600)};
    c.reference = "newton_cg";
    c.seed = 606;
    cat[c.name] = std::move(c);
  }
  {
    // Tiny end-to-end exercise of the whole pipeline.
    ExperimentConfig c;
    c.name = "smoke";
    c.n_list = {1u << 8};
    c.spectrum.q_list = {1};
    c.theta_list = {two_pi / 10.0};
    c.solution.kind = SolutionRule::Kind::uniform;
    c.solution.gamma = 10.0;
    c.s_divisor = 32;
    c.solvers = {preset_solver("ista", 20000, 30), preset_solver("fista", 10000, 30),
                 preset_solver("cd", 5000, 30), preset_solver("newton_cg", 100, 30)};
    c.seed = 707;
    cat[c.name] = std::move(c);
  }
  for (auto& [name, cfg] : cat) cfg.validate();
  return cat;
}

}  // namespace

const std::map<std::string, ExperimentConfig>& presets() {
  static const std::map<std::string, ExperimentConfig> catalog = build_presets();
  return catalog;
}

}  // namespace l1bench
