#include "l1bench/solution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace l1bench {

std::vector<double> SparseSolution::dense() const {
  std::vector<double> x(n, 0.0);
  for (std::size_t k = 0; k < support.size(); ++k) x[support[k]] = values[k];
  return x;
}

double SparseSolution::norm1() const {
  double s = 0.0;
  for (double v : values) s += std::abs(v);
  return s;
}

double SparseSolution::norm2() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(s);
}

void SparseSolution::validate() const {
  if (support.size() != values.size()) {
    throw std::invalid_argument("SparseSolution: support/value size mismatch");
  }
  std::uint32_t prev = 0;
  bool first = true;
  for (std::size_t k = 0; k < support.size(); ++k) {
    if (support[k] >= n) throw std::invalid_argument("SparseSolution: index out of range");
    if (!first && support[k] <= prev) {
      throw std::invalid_argument("SparseSolution: support must be strictly increasing");
    }
    if (values[k] == 0.0) throw std::invalid_argument("SparseSolution: stored values must be nonzero");
    prev = support[k];
    first = false;
  }
}

SparseSolution uniform_sparse_solution(std::size_t n, std::size_t s, double gamma, Rng& rng) {
  if (s > n) throw std::invalid_argument("uniform_sparse_solution: s must not exceed n");
  if (!(gamma > 0.0)) throw std::invalid_argument("uniform_sparse_solution: gamma must be positive");

  SparseSolution x;
  x.n = n;
  if (s == 0) return x;

  // Floyd's sampling: s distinct indices with O(s) memory.
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(s * 2);
  for (std::uint64_t j = n - s; j < n; ++j) {
    const std::uint64_t t = uniform_index(rng, j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  x.support.reserve(s);
  for (std::uint64_t idx : chosen) x.support.push_back(static_cast<std::uint32_t>(idx));
  std::sort(x.support.begin(), x.support.end());

  x.values.reserve(s);
  for (std::size_t k = 0; k < s; ++k) {
    double v;
    do {
      v = uniform_in(rng, -gamma, gamma);
    } while (v == 0.0);
    x.values.push_back(v);
  }
  return x;
}

SparseSolution spectral_sparse_solution(const OperatorSpec& op, std::size_t s1, std::size_t s2,
                                        double gamma) {
  const std::size_t n = op.n;
  const std::size_t s = s1 + s2;
  if (s > n) throw std::invalid_argument("spectral_sparse_solution: s1 + s2 must not exceed n");
  if (!(gamma > 0.0)) throw std::invalid_argument("spectral_sparse_solution: gamma must be positive");

  const auto& sig = op.spectrum.values();
  std::vector<double> xhat(n);
  for (std::size_t i = 0; i < n; ++i) xhat[i] = gamma / (sig[i] * sig[i]);
  op.apply_right_factor(xhat, false);  // x = G * gamma (Sigma^T Sigma)^{-1} 1

  std::vector<std::uint32_t> nz;
  nz.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (xhat[i] != 0.0) nz.push_back(static_cast<std::uint32_t>(i));
  }
  std::stable_sort(nz.begin(), nz.end(), [&](std::uint32_t a, std::uint32_t b) {
    return std::abs(xhat[a]) < std::abs(xhat[b]);
  });

  std::vector<std::uint32_t> keep;
  if (nz.size() <= s) {
    keep = nz;
  } else {
    keep.insert(keep.end(), nz.begin(), nz.begin() + static_cast<std::ptrdiff_t>(s1));
    keep.insert(keep.end(), nz.end() - static_cast<std::ptrdiff_t>(s2), nz.end());
  }
  std::sort(keep.begin(), keep.end());

  SparseSolution x;
  x.n = n;
  x.support = std::move(keep);
  x.values.reserve(x.support.size());
  for (std::uint32_t i : x.support) x.values.push_back(xhat[i]);
  return x;
}

double gram_condition_number(const Spectrum& spectrum) {
  const double smax = spectrum.sigma_max();
  const double smin = spectrum.sigma_min();
  if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
  const double r = smax / smin;
  return r * r;
}

double solution_condition_number(const SparseSolution& x, const OperatorSpec& op, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("solution_condition_number: rho must be positive");
  if (x.n != op.n) throw std::invalid_argument("solution_condition_number: dimension mismatch");
  if (x.nnz() == 0) throw std::invalid_argument("solution_condition_number: undefined for the zero vector");

  const auto& sig = op.spectrum.values();
  const double lmin = op.spectrum.sigma_min() * op.spectrum.sigma_min();
  if (rho <= lmin) return 1.0;  // projection is the identity

  std::vector<double> u = x.dense();
  op.apply_right_factor(u, true);  // G^T x
  for (std::size_t i = 0; i < op.n; ++i) {
    if (sig[i] * sig[i] < rho) u[i] = 0.0;
  }
  op.apply_right_factor(u, false);  // P_rho x

  double proj = 0.0;
  for (double v : u) proj += v * v;
  proj = std::sqrt(proj);
  const double norm = x.norm2();
  if (proj <= 1e-14 * norm) return std::numeric_limits<double>::infinity();
  return norm / proj;
}

}  // namespace l1bench
