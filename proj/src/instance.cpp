#include "l1bench/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace l1bench {

FillPolicy FillPolicy::interior(double bound) {
  if (!(bound >= 0.0 && bound < 1.0)) {
    throw std::invalid_argument("FillPolicy: interior bound must lie in [0, 1)");
  }
  FillPolicy p;
  p.kind = Kind::interior_uniform;
  p.bound = bound;
  return p;
}

FillPolicy FillPolicy::fixed(double value) {
  if (std::abs(value) > 1.0) throw std::invalid_argument("FillPolicy: constant must lie in [-1, 1]");
  FillPolicy p;
  p.kind = Kind::constant;
  p.constant = value;
  return p;
}

std::vector<double> l1_subgradient(const SparseSolution& x, std::size_t dim,
                                   const FillPolicy& fill, Rng& rng) {
  std::vector<double> g(dim);
  if (fill.kind == FillPolicy::Kind::constant) {
    std::fill(g.begin(), g.end(), fill.constant);
  } else {
    for (auto& v : g) v = uniform_in(rng, -fill.bound, fill.bound);
  }
  for (std::size_t k = 0; k < x.support.size(); ++k) {
    const std::uint32_t i = x.support[k];
    if (i >= dim) throw std::invalid_argument("l1_subgradient: support exceeds requested dimension");
    g[i] = x.values[k] > 0.0 ? 1.0 : -1.0;
  }
  return g;
}

const LinearOperator& ProblemInstance::op() const {
  if (wide) return *wide;
  return *factored;
}

double ProblemInstance::objective_at_planted() const {
  return tau * x_star.norm1() + 0.5 * noise_norm * noise_norm;
}

ProblemInstance generate_instance(double tau, std::shared_ptr<const OperatorSpec> spec,
                                  SparseSolution x_star, const FillPolicy& fill, Rng& rng) {
  if (!(tau > 0.0)) throw std::invalid_argument("generate_instance: tau must be positive");
  if (!spec || !spec->finalized()) throw std::invalid_argument("generate_instance: spec must be finalized");
  if (spec->m < spec->n) {
    throw std::invalid_argument(
        "generate_instance: m < n; use generate_instance_wide for wide operators");
  }
  x_star.validate();
  if (x_star.n != spec->n) throw std::invalid_argument("generate_instance: solution dimension mismatch");

  const std::vector<double> g = l1_subgradient(x_star, spec->n, fill, rng);

  std::vector<double> w(spec->n);
  spec->apply_gram_inverse(g, w);
  std::vector<double> e(spec->m);
  spec->apply(w, e);
  for (auto& v : e) v *= tau;

  const std::vector<double> xd = x_star.dense();
  std::vector<double> b(spec->m);
  spec->apply(xd, b);
  double noise_sq = 0.0;
  for (std::size_t i = 0; i < spec->m; ++i) {
    b[i] += e[i];
    noise_sq += e[i] * e[i];
  }

  ProblemInstance inst;
  inst.tau = tau;
  inst.factored = std::move(spec);
  inst.b = std::move(b);
  inst.x_star = std::move(x_star);
  inst.noise_norm = std::sqrt(noise_sq);
  inst.cert_kappa = gram_condition_number(inst.factored->spectrum);
  return inst;
}

ProblemInstance generate_instance_wide(double tau, OperatorSpec b_spec, DenseMatrix n_cols,
                                       SparseSolution x_star, const FillPolicy& fill, Rng& rng,
                                       std::span<const double> xi_override) {
  if (!(tau > 0.0)) throw std::invalid_argument("generate_instance_wide: tau must be positive");
  if (!b_spec.finalized()) b_spec.finalize();
  if (b_spec.m != b_spec.n) {
    throw std::invalid_argument("generate_instance_wide: square invertible block required");
  }
  const std::size_t m = b_spec.m;
  const std::size_t n = m + n_cols.cols;
  if (n_cols.rows != m) throw std::invalid_argument("generate_instance_wide: column source row mismatch");
  if (n_cols.cols == 0) throw std::invalid_argument("generate_instance_wide: needs at least one extra column");

  x_star.validate();
  if (x_star.n != n) throw std::invalid_argument("generate_instance_wide: solution dimension mismatch");
  if (x_star.nnz() > m) throw std::invalid_argument("generate_instance_wide: support larger than row count");
  for (std::uint32_t i : x_star.support) {
    if (i >= m) {
      throw std::invalid_argument(
          "generate_instance_wide: support must lie within the square block (relabel with compact_support)");
    }
  }
  if (!xi_override.empty() && xi_override.size() != n_cols.cols) {
    throw std::invalid_argument("generate_instance_wide: xi override size mismatch");
  }

  const std::vector<double> g = l1_subgradient(x_star, m, fill, rng);
  std::vector<double> e(m);
  b_spec.apply_inverse_transpose(g, e);
  for (auto& v : e) v *= tau;
  double e_norm = 0.0;
  for (double v : e) e_norm += v * v;
  e_norm = std::sqrt(e_norm);

  for (std::size_t k = 0; k < n_cols.cols; ++k) {
    auto col = n_cols.col(k);
    double dot = 0.0, cnorm = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      dot += col[i] * e[i];
      cnorm += col[i] * col[i];
    }
    cnorm = std::sqrt(cnorm);
    // Columns numerically orthogonal to the noise cannot be rescaled; redraw them.
    while (std::abs(dot) <= 1e-12 * cnorm * e_norm || cnorm == 0.0) {
      dot = 0.0;
      cnorm = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        col[i] = normal(rng);
        dot += col[i] * e[i];
        cnorm += col[i] * col[i];
      }
      cnorm = std::sqrt(cnorm);
    }
    double xi;
    if (!xi_override.empty()) {
      xi = xi_override[k];
      if (std::abs(xi) > 1.0) throw std::invalid_argument("generate_instance_wide: |xi| must be <= 1");
    } else {
      do {
        xi = uniform_in(rng, -1.0, 1.0);
      } while (std::abs(xi) < 1e-3 || std::abs(xi) >= 1.0);
    }
    const double scale = xi * tau / std::abs(dot);
    for (std::size_t i = 0; i < m; ++i) col[i] *= scale;
  }

  auto block = std::make_shared<BlockOperator>(std::move(b_spec), std::move(n_cols));

  const std::vector<double> xd = x_star.dense();
  std::vector<double> b(m);
  block->apply(xd, b);
  for (std::size_t i = 0; i < m; ++i) b[i] += e[i];

  ProblemInstance inst;
  inst.tau = tau;
  inst.factored = std::shared_ptr<const OperatorSpec>(block, &block->base());
  inst.wide = std::move(block);
  inst.b = std::move(b);
  inst.x_star = std::move(x_star);
  inst.noise_norm = e_norm;
  inst.cert_kappa = gram_condition_number(inst.factored->spectrum);
  return inst;
}

CertificateReport verify_optimality(const ProblemInstance& inst, double tol) {
  const LinearOperator& a = inst.op();
  const std::vector<double> xd = inst.x_star.dense();
  std::vector<double> res(a.rows());
  a.apply(xd, res);
  for (std::size_t i = 0; i < res.size(); ++i) res[i] -= inst.b[i];
  std::vector<double> r(a.cols());
  a.apply_transpose(res, r);

  CertificateReport report;
  report.threshold = tol * inst.tau;
  std::vector<std::uint8_t> on_support(a.cols(), 0);
  for (std::size_t k = 0; k < inst.x_star.support.size(); ++k) {
    const std::uint32_t i = inst.x_star.support[k];
    on_support[i] = 1;
    const double sign = inst.x_star.values[k] > 0.0 ? 1.0 : -1.0;
    report.max_support_violation =
        std::max(report.max_support_violation, std::abs(r[i] + inst.tau * sign));
  }
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (on_support[i]) continue;
    report.max_offsupport_violation =
        std::max(report.max_offsupport_violation, std::max(std::abs(r[i]) - inst.tau, 0.0));
  }
  report.pass = report.max_support_violation <= report.threshold &&
                report.max_offsupport_violation <= report.threshold;
  return report;
}

std::pair<SparseSolution, std::vector<std::uint32_t>> compact_support(const SparseSolution& x,
                                                                      std::size_t m) {
  x.validate();
  if (x.nnz() > m) throw std::invalid_argument("compact_support: support larger than m");
  if (m > x.n) throw std::invalid_argument("compact_support: m exceeds dimension");

  // new index -> old index; support first, then the remaining indices in order.
  std::vector<std::uint32_t> relabel;
  relabel.reserve(x.n);
  std::vector<std::uint8_t> used(x.n, 0);
  for (std::uint32_t i : x.support) {
    relabel.push_back(i);
    used[i] = 1;
  }
  for (std::uint32_t i = 0; i < x.n; ++i) {
    if (!used[i]) relabel.push_back(i);
  }

  SparseSolution out;
  out.n = x.n;
  out.support.resize(x.nnz());
  std::iota(out.support.begin(), out.support.end(), 0u);
  out.values = x.values;
  return {out, relabel};
}

}  // namespace l1bench
