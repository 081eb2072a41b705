#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "l1bench/linops.hpp"
#include "l1bench/rng.hpp"

namespace l1bench {

/// Planted sparse vector: support indices (ascending) and their nonzero values.
struct SparseSolution {
  std::size_t n = 0;
  std::vector<std::uint32_t> support;
  std::vector<double> values;

  std::size_t nnz() const { return support.size(); }
  std::vector<double> dense() const;
  double norm1() const;
  double norm2() const;
  void validate() const;
};

struct ConditioningReport {
  double kappa_gram = 1.0;      // lambda_1 / lambda_n of A^T A
  double rho = 0.1;
  double kappa_solution = 1.0;  // may be +inf
};

/// Random support of size s, values uniform in [-gamma, gamma] with exact
/// zeros rejected.
SparseSolution uniform_sparse_solution(std::size_t n, std::size_t s, double gamma, Rng& rng);

/// Solves min_x ||G^T x - gamma (Sigma^T Sigma)^{-1} 1||^2 exactly (G is
/// orthonormal), then keeps the s1 smallest and s2 largest nonzero components
/// by magnitude (ties broken by lower index).
SparseSolution spectral_sparse_solution(const OperatorSpec& op, std::size_t s1, std::size_t s2,
                                        double gamma);

/// (sigma_max / sigma_min)^2.
double gram_condition_number(const Spectrum& spectrum);

/// ||x||_2 / ||P_rho x||_2 where P_rho projects onto eigenvectors of A^T A
/// with eigenvalue >= rho; +inf when the projected mass vanishes.
double solution_condition_number(const SparseSolution& x, const OperatorSpec& op, double rho);

}  // namespace l1bench
