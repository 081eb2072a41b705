#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "l1bench/instance.hpp"

namespace l1bench {

enum class LPolicy { spectrum, backtracking };

struct SolverConfig {
  std::string id = "fista";  // ista | fista | cd | newton_cg
  std::size_t max_iters = 100000;
  double max_seconds = 600.0;
  std::optional<double> target_objective;

  // newton_cg
  double mu = 1e-5;                   // pseudo-Huber smoothing parameter
  double eta = 0.1;                   // PCG relative-residual tolerance
  std::size_t pcg_max_iters = 1000;
  std::size_t ls_max_backtracks = 50;
  double grad_tol_rel = 1e-8;         // stationarity scale vs max(1, ||A^T b||)

  // ista / fista
  LPolicy l_policy = LPolicy::spectrum;
  std::optional<double> l_fixed;      // pins L regardless of policy

  // cd
  std::size_t varpi = 1;              // modeled processor count
  std::optional<std::size_t> omega;   // partial separability degree; measured when absent

  std::uint64_t seed = 0;

  void validate(std::size_t n) const;
};

enum class StopReason { target_reached, iter_budget, time_budget };

const char* to_string(StopReason r);

struct TraceSample {
  std::size_t iter = 0;
  double elapsed_s = 0.0;
  double objective = 0.0;
  std::size_t nnz = 0;
  double matvecs = 0.0;
  std::size_t extra = 0;  // PCG iterations, backtracks, or applied updates
};

struct SolverTrace {
  std::string solver;
  std::vector<TraceSample> samples;
  StopReason status = StopReason::iter_budget;
  bool reached_target = false;
  double final_objective = std::numeric_limits<double>::quiet_NaN();
  double elapsed_s = 0.0;
  double total_matvecs = 0.0;  // matvec-equivalents
  std::size_t total_pcg_iterations = 0;
  std::size_t newton_steps = 0;
  double time_to_target = std::numeric_limits<double>::infinity();
  double matvecs_to_target = std::numeric_limits<double>::infinity();
};

/// tau ||x||_1 + 0.5 ||A x - b||^2; one matvec.
double objective(const ProblemInstance& inst, std::span<const double> x);

/// sign(v) * max(|v| - t, 0) = argmin_y t|y| + (y - v)^2 / 2.
double soft_threshold(double v, double t);

/// Smooth surrogate for the l1 norm: sum_i (sqrt(mu^2 + x_i^2) - mu).
double pseudo_huber(std::span<const double> x, double mu);

/// tau * psi_mu(x) + 0.5 ||A x - b||^2 and its derivatives. The Hessian is
/// applied matrix-free: two matvecs plus a diagonal scaling.
double smoothed_objective(const ProblemInstance& inst, std::span<const double> x, double mu);
std::vector<double> smoothed_gradient(const ProblemInstance& inst, std::span<const double> x,
                                      double mu);
std::vector<double> smoothed_hessvec(const ProblemInstance& inst, std::span<const double> x,
                                     double mu, std::span<const double> v);

struct PcgResult {
  std::vector<double> step;
  std::size_t iterations = 0;
  bool converged = false;
  bool negative_curvature = false;
  double rel_residual = 0.0;
  std::vector<double> best_residuals;  // best-so-far ||r|| per iteration
};

/// Preconditioned conjugate gradients for H d = rhs with a positive diagonal
/// preconditioner. Stops at ||H d - rhs|| <= eta ||rhs|| or returns the best
/// iterate seen when the iteration cap is hit.
PcgResult pcg_solve(const std::function<void(std::span<const double>, std::span<double>)>& hessvec,
                    std::span<const double> rhs, std::span<const double> precond_diagonal,
                    double eta, std::size_t max_iters);

/// Step damping for the coordinate-descent model: 1 + (omega-1)(varpi-1)/(n-1).
double cd_damping(std::size_t omega, std::size_t varpi, std::size_t n);

SolverTrace ista_run(const ProblemInstance& inst, const SolverConfig& cfg,
                     std::vector<double>* x_out = nullptr);
SolverTrace fista_run(const ProblemInstance& inst, const SolverConfig& cfg,
                      std::vector<double>* x_out = nullptr);
SolverTrace coordinate_descent_run(const ProblemInstance& inst, const SolverConfig& cfg,
                                   std::vector<double>* x_out = nullptr);
SolverTrace newton_cg_run(const ProblemInstance& inst, const SolverConfig& cfg,
                          std::vector<double>* x_out = nullptr);

bool known_solver(const std::string& id);
SolverTrace run_solver(const ProblemInstance& inst, const SolverConfig& cfg,
                       std::vector<double>* x_out = nullptr);

}  // namespace l1bench
