#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "l1bench/instance.hpp"
#include "l1bench/solvers.hpp"

namespace l1bench {

struct SpectrumRule {
  enum class Kind { uniform_q, alternating };
  Kind kind = Kind::uniform_q;
  std::vector<int> q_list = {1};  // draws in [0, 10^q], then shifted
  double shift = 0.1;
  double odd_value = 0.1;
  double even_value = 100.0;
};

struct SolutionRule {
  enum class Kind { uniform, spectral, two_value };
  Kind kind = Kind::uniform;
  double gamma = 10.0;
  double s1_fraction = 0.5;   // spectral: share of s kept from the small end
  double value_a = -1e4;      // two_value: first half of the support
  double value_b = 1e-1;      // two_value: remaining support entries
};

/// Declarative description of one experiment family: the cross product of
/// dimensions, spectra, angles, stage counts and regularization weights, each
/// solved by every configured solver.
struct ExperimentConfig {
  std::string name = "experiment";
  std::vector<std::size_t> n_list = {1u << 12};
  double m_ratio = 2.0;
  SpectrumRule spectrum;
  std::vector<double> theta_list = {0.6283185307179586};  // 2*pi/10
  std::vector<std::size_t> stage_counts = {1};            // right-side stages
  std::size_t left_stage_count = 0;
  bool permute = false;  // seeded row permutations and left rotations pattern
  SolutionRule solution;
  std::size_t s_divisor = 128;  // s = n / s_divisor
  std::vector<double> tau_list = {1.0};
  std::vector<SolverConfig> solvers;
  std::string reference = "newton_cg";
  double rel_target = 1e-6;  // reference target: f* + rel_target (f0 - f*)
  std::uint64_t seed = 1;

  void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::string& path);

/// Catalog of ready-made experiment families at desk scale.
const std::map<std::string, ExperimentConfig>& presets();

struct RunRecord {
  std::string instance;
  std::string solver;
  StopReason status = StopReason::iter_budget;
  bool reached_target = false;
  double target = 0.0;
  double time_to_target = 0.0;
  double matvecs_to_target = 0.0;
  double matvecs_total = 0.0;
  double final_objective = 0.0;
  double kappa_gram = 0.0;
  double kappa_solution = 0.0;
};

struct RunSummary {
  std::vector<RunRecord> rows;
};

struct NamedTrace {
  std::string instance;
  std::string solver;
  SolverTrace trace;
};

/// One materialized point of the experiment grid.
struct InstanceJob {
  std::string name;
  std::size_t n = 0;
  std::optional<int> q;
  double theta = 0.0;
  std::size_t stages = 0;
  double tau = 1.0;
  std::uint64_t seed = 0;
};

std::vector<InstanceJob> enumerate_jobs(const ExperimentConfig& cfg);

/// Builds (or reloads from out_dir/instances) the instance for one job.
ProblemInstance build_instance(const ExperimentConfig& cfg, const InstanceJob& job);

/// Runs the whole experiment: the reference solver first fixes the target for
/// each instance, the remaining solvers chase it. Writes per-run trace CSVs,
/// plot-ready gap series and summary.csv under out_dir.
RunSummary run_experiment(const ExperimentConfig& cfg, const std::string& out_dir,
                          bool quiet = false);

/// Writes per-(instance, solver) files of (elapsed_s, objective - best_known)
/// rows; empty traces are skipped with a warning on stderr.
void emit_plot_data(const std::vector<NamedTrace>& traces, const std::string& out_dir);

void write_summary_csv(const RunSummary& summary, const std::string& path);

}  // namespace l1bench
