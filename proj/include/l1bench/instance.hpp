#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "l1bench/linops.hpp"
#include "l1bench/rng.hpp"
#include "l1bench/solution.hpp"

namespace l1bench {

/// How to fill subgradient entries at zero components of the planted solution.
/// The strictly interior default keeps those components inactive, so the
/// planted vector is the unique minimizer.
struct FillPolicy {
  enum class Kind { interior_uniform, constant };
  Kind kind = Kind::interior_uniform;
  double bound = 0.9;     // interior_uniform: draws in [-bound, bound]
  double constant = 0.0;  // constant: fixed value, |constant| <= 1

  static FillPolicy interior(double bound = 0.9);
  static FillPolicy fixed(double value);
};

/// Subgradient of the l1 norm at the planted point: sign on the support,
/// policy-filled elsewhere. dim is n for tall instances, m for wide ones.
std::vector<double> l1_subgradient(const SparseSolution& x, std::size_t dim,
                                   const FillPolicy& fill, Rng& rng);

/// A problem the planted point provably minimizes: the right-hand side is
/// built so that A^T (A x* - b) = -tau g with g in the l1 subdifferential.
struct ProblemInstance {
  double tau = 1.0;
  std::shared_ptr<const OperatorSpec> factored;  // tall form; base block for wide
  std::shared_ptr<const BlockOperator> wide;     // null for tall instances
  std::vector<double> b;
  SparseSolution x_star;
  double noise_norm = 0.0;  // ||e||_2 at generation
  double cert_kappa = 1.0;  // condition number entering certificate tolerances
  std::optional<ConditioningReport> conditioning;

  bool is_wide() const { return wide != nullptr; }
  const LinearOperator& op() const;
  std::size_t rows() const { return op().rows(); }
  std::size_t cols() const { return op().cols(); }
  /// tau ||x*||_1 + 0.5 ||e||^2, no matvec needed.
  double objective_at_planted() const;
};

/// m >= n generator: e = tau A (A^T A)^{-1} g, b = A x* + e.
ProblemInstance generate_instance(double tau, std::shared_ptr<const OperatorSpec> spec,
                                  SparseSolution x_star, const FillPolicy& fill, Rng& rng);

/// m < n generator: A = [B, E], e = tau B^{-T} g, columns E_k scaled so that
/// |E_k^T e| = |xi| tau with xi drawn in (-1, 1). The support must lie inside
/// the square block. xi_override pins the draws (tests).
ProblemInstance generate_instance_wide(double tau, OperatorSpec b_spec, DenseMatrix n_cols,
                                       SparseSolution x_star, const FillPolicy& fill, Rng& rng,
                                       std::span<const double> xi_override = {});

struct CertificateReport {
  double max_support_violation = 0.0;     // max_S |r_i + tau sign(x*_i)|
  double max_offsupport_violation = 0.0;  // max_{S^c} max(|r_i| - tau, 0)
  double threshold = 0.0;                 // tol * tau
  bool pass = false;
};

/// Checks A^T (A x* - b) against -tau d||x*||_1; passes iff both violation
/// maxima are at most tol * tau.
CertificateReport verify_optimality(const ProblemInstance& inst, double tol);

/// Column relabeling that moves the support of x into {0..m-1}, restoring the
/// wide generator's ordering convention for arbitrary supports. Returns the
/// relabeled solution and the permutation used (new index -> old index).
std::pair<SparseSolution, std::vector<std::uint32_t>> compact_support(const SparseSolution& x,
                                                                      std::size_t m);

}  // namespace l1bench
