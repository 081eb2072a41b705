#include "l1bench/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace l1bench {

namespace {

using Clock = std::chrono::steady_clock;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm1(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += std::abs(v);
  return s;
}

std::size_t count_nnz(std::span<const double> a) {
  std::size_t c = 0;
  for (double v : a) {
    if (v != 0.0) ++c;
  }
  return c;
}

void require_finite(double f, const char* solver) {
  if (!std::isfinite(f)) {
    throw std::runtime_error(std::string(solver) + ": objective diverged to a non-finite value");
  }
}

// Shared run bookkeeping: sampling, budgets and target detection.
struct Tracker {
  SolverTrace trace;
  const CountingOperator& counter;
  std::optional<double> target;
  std::size_t max_iters;
  double max_seconds;
  Clock::time_point t0 = Clock::now();

  Tracker(std::string solver, const CountingOperator& ctr, const SolverConfig& cfg)
      : counter(ctr), target(cfg.target_objective), max_iters(cfg.max_iters),
        max_seconds(cfg.max_seconds) {
    trace.solver = std::move(solver);
  }

  double elapsed() const {
    return std::chrono::duration<double>(Clock::now() - t0).count();
  }

  void sample(std::size_t iter, double f, std::size_t nnz, std::size_t extra) {
    const double t = elapsed();
    const double mv = counter.equivalents();
    trace.samples.push_back({iter, t, f, nnz, mv, extra});
    trace.final_objective = f;
    if (!trace.reached_target && target && f <= *target) {
      mark_reached(t, mv);
    }
  }

  void mark_reached(double t, double mv) {
    trace.reached_target = true;
    trace.time_to_target = t;
    trace.matvecs_to_target = mv;
  }

  bool target_hit(double f) const { return target && f <= *target; }

  SolverTrace finish(StopReason status) {
    trace.status = status;
    if (status == StopReason::target_reached && !trace.reached_target) {
      // Stationarity stops (exact fixed point, vanishing gradient) count as
      // having reached the requested accuracy.
      trace.reached_target = true;
      if (!std::isfinite(trace.time_to_target)) {
        trace.time_to_target = elapsed();
        trace.matvecs_to_target = counter.equivalents();
      }
    }
    trace.elapsed_s = elapsed();
    trace.total_matvecs = counter.equivalents();
    return std::move(trace);
  }
};

// Effective Lipschitz setup for the proximal-gradient methods. The spectrum
// policy uses (sigma_max)^2 when the operator knows it; wide composites fall
// back to backtracking seeded with a power-iteration estimate.
struct LipschitzState {
  double value = 1.0;
  bool backtracking = false;

  LipschitzState(const LinearOperator& op, const SolverConfig& cfg) {
    if (cfg.l_fixed) {
      value = *cfg.l_fixed;
      backtracking = false;
      return;
    }
    if (cfg.l_policy == LPolicy::spectrum) {
      if (auto lmax = op.gram_lmax()) {
        value = *lmax;
        backtracking = false;
        return;
      }
    }
    backtracking = true;
    const double est = estimate_gram_lmax(op, 30, mix_seed(cfg.seed, 0x4c6d6178ULL));
    value = est > 0.0 ? est : 1.0;
  }
};

}  // namespace

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::target_reached: return "target-reached";
    case StopReason::iter_budget: return "iter-budget";
    case StopReason::time_budget: return "time-budget";
  }
  return "unknown";
}

void SolverConfig::validate(std::size_t n) const {
  if (!known_solver(id)) throw std::invalid_argument("SolverConfig: unknown solver id '" + id + "'");
  if (!(mu > 0.0)) throw std::invalid_argument("SolverConfig: mu must be positive");
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("SolverConfig: eta must lie in (0, 1)");
  if (varpi < 1) throw std::invalid_argument("SolverConfig: varpi must be at least 1");
  if (omega && (*omega < 1 || *omega > n)) {
    throw std::invalid_argument("SolverConfig: omega must lie in [1, n]");
  }
  if (l_fixed && !(*l_fixed > 0.0)) throw std::invalid_argument("SolverConfig: fixed L must be positive");
  if (!(max_seconds > 0.0)) throw std::invalid_argument("SolverConfig: max_seconds must be positive");
}

double objective(const ProblemInstance& inst, std::span<const double> x) {
  const LinearOperator& a = inst.op();
  std::vector<double> r(a.rows());
  a.apply(x, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= inst.b[i];
  return inst.tau * norm1(x) + 0.5 * dot(r, r);
}

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

double pseudo_huber(std::span<const double> x, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("pseudo_huber: mu must be positive");
  double s = 0.0;
  for (double v : x) s += std::sqrt(mu * mu + v * v) - mu;
  return s;
}

double smoothed_objective(const ProblemInstance& inst, std::span<const double> x, double mu) {
  const LinearOperator& a = inst.op();
  std::vector<double> r(a.rows());
  a.apply(x, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= inst.b[i];
  return inst.tau * pseudo_huber(x, mu) + 0.5 * dot(r, r);
}

std::vector<double> smoothed_gradient(const ProblemInstance& inst, std::span<const double> x,
                                      double mu) {
  const LinearOperator& a = inst.op();
  std::vector<double> r(a.rows());
  a.apply(x, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= inst.b[i];
  std::vector<double> g(a.cols());
  a.apply_transpose(r, g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] += inst.tau * x[i] / std::sqrt(mu * mu + x[i] * x[i]);
  }
  return g;
}

std::vector<double> smoothed_hessvec(const ProblemInstance& inst, std::span<const double> x,
                                     double mu, std::span<const double> v) {
  const LinearOperator& a = inst.op();
  std::vector<double> av(a.rows());
  a.apply(v, av);
  std::vector<double> h(a.cols());
  a.apply_transpose(av, h);
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double q = mu * mu + x[i] * x[i];
    h[i] += inst.tau * mu * mu / (q * std::sqrt(q)) * v[i];
  }
  return h;
}

PcgResult pcg_solve(const std::function<void(std::span<const double>, std::span<double>)>& hessvec,
                    std::span<const double> rhs, std::span<const double> precond_diagonal,
                    double eta, std::size_t max_iters) {
  const std::size_t n = rhs.size();
  if (precond_diagonal.size() != n) throw std::invalid_argument("pcg_solve: preconditioner size mismatch");
  for (double d : precond_diagonal) {
    if (!(d > 0.0)) throw std::invalid_argument("pcg_solve: preconditioner entries must be positive");
  }

  PcgResult res;
  res.step.assign(n, 0.0);
  const double rhs_norm = norm2(rhs);
  if (rhs_norm == 0.0) {
    res.converged = true;
    return res;
  }

  std::vector<double> r(rhs.begin(), rhs.end());
  std::vector<double> z(n), p(n), hp(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / precond_diagonal[i];
  p = z;
  double rz = dot(r, z);

  std::vector<double> best = res.step;
  double best_norm = rhs_norm;
  res.best_residuals.reserve(std::min<std::size_t>(max_iters, 1024));

  for (std::size_t k = 0; k < max_iters; ++k) {
    hessvec(p, hp);
    const double php = dot(p, hp);
    if (!(php > 0.0)) {
      if (!std::isfinite(php)) throw std::runtime_error("pcg_solve: breakdown, non-finite curvature");
      res.negative_curvature = true;
      break;
    }
    const double alpha = rz / php;
    for (std::size_t i = 0; i < n; ++i) {
      res.step[i] += alpha * p[i];
      r[i] -= alpha * hp[i];
    }
    ++res.iterations;
    const double rn = norm2(r);
    if (!std::isfinite(rn)) throw std::runtime_error("pcg_solve: breakdown, non-finite residual");
    if (rn < best_norm) {
      best_norm = rn;
      best = res.step;
    }
    res.best_residuals.push_back(best_norm);
    if (rn <= eta * rhs_norm) {
      res.converged = true;
      res.rel_residual = rn / rhs_norm;
      return res;
    }
    for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / precond_diagonal[i];
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  res.step = std::move(best);
  res.rel_residual = best_norm / rhs_norm;
  return res;
}

double cd_damping(std::size_t omega, std::size_t varpi, std::size_t n) {
  if (n <= 1 || varpi <= 1) return 1.0;
  return 1.0 + static_cast<double>(omega - 1) * static_cast<double>(varpi - 1) /
                   static_cast<double>(n - 1);
}

// ---------------------------------------------------------------------------
// ISTA / FISTA

namespace {

SolverTrace proximal_gradient_run(const ProblemInstance& inst, const SolverConfig& cfg,
                                  bool accelerated, std::vector<double>* x_out) {
  const char* name = accelerated ? "fista" : "ista";
  cfg.validate(inst.cols());
  const CountingOperator op(inst.op());
  const std::size_t n = inst.cols();
  const std::size_t m = inst.rows();
  const double tau = inst.tau;
  Tracker tk(name, op, cfg);

  LipschitzState lip(inst.op(), cfg);
  double lcap = lip.value * 0x1p60;

  std::vector<double> x(n, 0.0);
  std::vector<double> y;
  std::vector<double> r_x(m);
  std::vector<double> r_y;
  op.apply(x, r_x);
  for (std::size_t i = 0; i < m; ++i) r_x[i] -= inst.b[i];
  double f = tau * norm1(x) + 0.5 * dot(r_x, r_x);
  require_finite(f, name);
  tk.sample(0, f, count_nnz(x), 0);

  if (accelerated) {
    y = x;
    r_y = r_x;
  }
  double t_momentum = 1.0;

  std::vector<double> grad(n), trial(n), r_trial(m);
  StopReason status = StopReason::iter_budget;
  std::size_t last_sampled = 0;

  std::size_t k = 0;
  while (true) {
    if (tk.target_hit(f)) { status = StopReason::target_reached; break; }
    if (k >= cfg.max_iters) { status = StopReason::iter_budget; break; }
    if (tk.elapsed() > cfg.max_seconds) { status = StopReason::time_budget; break; }
    ++k;

    const std::vector<double>& base = accelerated ? y : x;
    const std::vector<double>& r_base = accelerated ? r_y : r_x;
    op.apply_transpose(r_base, grad);
    const double g_base = 0.5 * dot(r_base, r_base);

    if (lip.backtracking) lip.value = std::max(lip.value * 0.5, 1e-12);
    std::size_t backtracks = 0;
    while (true) {
      const double inv_l = 1.0 / lip.value;
      for (std::size_t i = 0; i < n; ++i) {
        trial[i] = soft_threshold(base[i] - inv_l * grad[i], tau * inv_l);
      }
      op.apply(trial, r_trial);
      for (std::size_t i = 0; i < m; ++i) r_trial[i] -= inst.b[i];
      if (!lip.backtracking) break;
      const double lhs = 0.5 * dot(r_trial, r_trial);
      double quad = g_base;
      double step_sq = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = trial[i] - base[i];
        quad += grad[i] * d;
        step_sq += d * d;
      }
      quad += 0.5 * lip.value * step_sq;
      if (lhs <= quad + 1e-12 * (std::abs(lhs) + std::abs(quad)) || lip.value >= lcap) break;
      lip.value *= 2.0;
      ++backtracks;
    }

    const bool fixed_point = std::equal(trial.begin(), trial.end(), base.begin());

    if (accelerated) {
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_momentum * t_momentum));
      const double beta = (t_momentum - 1.0) / t_next;
      for (std::size_t i = 0; i < n; ++i) {
        y[i] = trial[i] + beta * (trial[i] - x[i]);
      }
      // r_y follows by linearity; both residuals are fresh matvec results.
      for (std::size_t i = 0; i < m; ++i) {
        r_y[i] = (1.0 + beta) * r_trial[i] - beta * r_x[i];
      }
      x = trial;
      r_x = r_trial;
      t_momentum = t_next;
    } else {
      x.swap(trial);
      r_x.swap(r_trial);
    }

    f = tau * norm1(x) + 0.5 * dot(r_x, r_x);
    require_finite(f, name);
    if (k <= 1000 || k % 10 == 0 || fixed_point) {
      tk.sample(k, f, count_nnz(x), backtracks);
      last_sampled = k;
    }

    if (fixed_point) {
      status = StopReason::target_reached;  // exact prox fixed point: optimal
      break;
    }
  }

  if (last_sampled != k) tk.sample(k, f, count_nnz(x), 0);
  if (x_out) *x_out = std::move(x);
  return tk.finish(status);
}

}  // namespace

SolverTrace ista_run(const ProblemInstance& inst, const SolverConfig& cfg,
                     std::vector<double>* x_out) {
  return proximal_gradient_run(inst, cfg, false, x_out);
}

SolverTrace fista_run(const ProblemInstance& inst, const SolverConfig& cfg,
                      std::vector<double>* x_out) {
  return proximal_gradient_run(inst, cfg, true, x_out);
}

// ---------------------------------------------------------------------------
// Randomized coordinate descent (serial sampler with the damped model)

namespace {

std::size_t measure_partial_separability(const LinearOperator& op) {
  ColumnWorkspace ws;
  SparseColumn row;
  std::size_t omega = 1;
  for (std::size_t i = 0; i < op.rows(); ++i) {
    op.row(i, ws, row);
    omega = std::max(omega, row.nnz());
  }
  return std::min(omega, op.cols());
}

}  // namespace

SolverTrace coordinate_descent_run(const ProblemInstance& inst, const SolverConfig& cfg,
                                   std::vector<double>* x_out) {
  cfg.validate(inst.cols());
  const CountingOperator op(inst.op());
  const std::size_t n = inst.cols();
  const std::size_t m = inst.rows();
  const double tau = inst.tau;
  Tracker tk("cd", op, cfg);

  const std::vector<double> lips = op.gram_diagonal();
  std::size_t omega = 1;
  if (cfg.varpi > 1) {
    omega = cfg.omega ? *cfg.omega : measure_partial_separability(inst.op());
  }
  const double beta = cd_damping(omega, cfg.varpi, n);

  Rng rng = make_rng(cfg.seed);
  ColumnWorkspace ws;
  SparseColumn col;

  std::vector<double> x(n, 0.0);
  std::vector<double> r(m);
  op.apply(x, r);
  for (std::size_t i = 0; i < m; ++i) r[i] -= inst.b[i];
  double f = tau * norm1(x) + 0.5 * dot(r, r);
  require_finite(f, "cd");
  tk.sample(0, f, count_nnz(x), 0);

  StopReason status = StopReason::iter_budget;
  std::size_t sweep = 0;
  while (true) {
    if (tk.target_hit(f)) { status = StopReason::target_reached; break; }
    if (sweep >= cfg.max_iters) { status = StopReason::iter_budget; break; }
    if (tk.elapsed() > cfg.max_seconds) { status = StopReason::time_budget; break; }
    ++sweep;

    std::size_t applied = 0;
    double col_ops = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      const std::size_t i = static_cast<std::size_t>(uniform_index(rng, n));
      const double li = lips[i];
      if (li == 0.0) continue;  // zero column
      op.column(i, ws, col);
      double gi = 0.0;
      for (std::size_t k = 0; k < col.nnz(); ++k) gi += col.val[k] * r[col.idx[k]];
      col_ops += 1.0;
      const double scale = beta * li;
      const double xi_new = soft_threshold(x[i] - gi / scale, tau / scale);
      const double delta = xi_new - x[i];
      if (delta != 0.0) {
        x[i] = xi_new;
        for (std::size_t k = 0; k < col.nnz(); ++k) r[col.idx[k]] += delta * col.val[k];
        col_ops += 1.0;
        ++applied;
      }
    }
    op.add_equivalents(col_ops / static_cast<double>(n));

    // Full refresh once per sweep keeps the incremental residual honest.
    op.apply(x, r);
    for (std::size_t i = 0; i < m; ++i) r[i] -= inst.b[i];
    f = tau * norm1(x) + 0.5 * dot(r, r);
    require_finite(f, "cd");
    tk.sample(sweep, f, count_nnz(x), applied);
  }

  if (x_out) *x_out = std::move(x);
  return tk.finish(status);
}

// ---------------------------------------------------------------------------
// Newton-CG on the pseudo-Huber smoothed problem

SolverTrace newton_cg_run(const ProblemInstance& inst, const SolverConfig& cfg,
                          std::vector<double>* x_out) {
  cfg.validate(inst.cols());
  const CountingOperator op(inst.op());
  const std::size_t n = inst.cols();
  const std::size_t m = inst.rows();
  const double tau = inst.tau;
  const double mu = cfg.mu;
  Tracker tk("newton_cg", op, cfg);

  const std::vector<double> gram_diag = op.gram_diagonal();
  std::vector<double> atb(n);
  op.apply_transpose(inst.b, atb);
  const double grad_tol = cfg.grad_tol_rel * std::max(1.0, norm2(atb));

  std::vector<double> x(n, 0.0);
  std::vector<double> r(m);
  op.apply(x, r);
  for (std::size_t i = 0; i < m; ++i) r[i] -= inst.b[i];

  std::vector<double> grad(n), d2psi(n), precond(n), ad(m), x_trial(n), r_trial(m);
  std::vector<double> hess_av(m);

  StopReason status = StopReason::iter_budget;
  std::size_t step = 0;
  std::size_t last_pcg = 0;

  while (true) {
    double f_true = tau * norm1(x) + 0.5 * dot(r, r);
    require_finite(f_true, "newton_cg");
    tk.sample(step, f_true, count_nnz(x), last_pcg);

    if (tk.target_hit(f_true)) { status = StopReason::target_reached; break; }

    double f_smooth = tau * pseudo_huber(x, mu) + 0.5 * dot(r, r);
    op.apply_transpose(r, grad);
    for (std::size_t i = 0; i < n; ++i) {
      const double q = mu * mu + x[i] * x[i];
      const double root = std::sqrt(q);
      grad[i] += tau * x[i] / root;
      d2psi[i] = mu * mu / (q * root);
      precond[i] = tau * d2psi[i] + gram_diag[i];
    }
    if (norm2(grad) <= grad_tol) { status = StopReason::target_reached; break; }
    if (step >= cfg.max_iters) { status = StopReason::iter_budget; break; }
    if (tk.elapsed() > cfg.max_seconds) { status = StopReason::time_budget; break; }
    ++step;

    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = -grad[i];
    auto hessvec = [&](std::span<const double> v, std::span<double> out) {
      op.apply(v, hess_av);
      op.apply_transpose(hess_av, out);
      for (std::size_t i = 0; i < n; ++i) out[i] += tau * d2psi[i] * v[i];
    };
    PcgResult pcg = pcg_solve(hessvec, rhs, precond, cfg.eta, cfg.pcg_max_iters);
    last_pcg = pcg.iterations;
    tk.trace.total_pcg_iterations += pcg.iterations;

    op.apply(pcg.step, ad);
    const double slope = dot(grad, pcg.step);

    // Armijo backtracking; the last trial is accepted when the cap is hit,
    // so the outer objective may increase occasionally.
    double alpha = 1.0;
    std::size_t bt = 0;
    while (true) {
      for (std::size_t i = 0; i < n; ++i) x_trial[i] = x[i] + alpha * pcg.step[i];
      for (std::size_t i = 0; i < m; ++i) r_trial[i] = r[i] + alpha * ad[i];
      const double f_trial = tau * pseudo_huber(x_trial, mu) + 0.5 * dot(r_trial, r_trial);
      if (f_trial <= f_smooth + 1e-4 * alpha * slope || bt >= cfg.ls_max_backtracks) break;
      alpha *= 0.5;
      ++bt;
    }
    x.swap(x_trial);
    r.swap(r_trial);
    ++tk.trace.newton_steps;
  }

  if (x_out) *x_out = std::move(x);
  return tk.finish(status);
}

bool known_solver(const std::string& id) {
  return id == "ista" || id == "fista" || id == "cd" || id == "newton_cg";
}

SolverTrace run_solver(const ProblemInstance& inst, const SolverConfig& cfg,
                       std::vector<double>* x_out) {
  if (cfg.id == "ista") return ista_run(inst, cfg, x_out);
  if (cfg.id == "fista") return fista_run(inst, cfg, x_out);
  if (cfg.id == "cd") return coordinate_descent_run(inst, cfg, x_out);
  if (cfg.id == "newton_cg") return newton_cg_run(inst, cfg, x_out);
  throw std::invalid_argument("run_solver: unknown solver id '" + cfg.id + "'");
}

}  // namespace l1bench
