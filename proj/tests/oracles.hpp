// Test-side oracles, independent of the library's application paths: dense
// operators are assembled directly from the rotation/permutation/spectrum
// definitions with Eigen and never through the sweep kernels they check.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "l1bench/instance.hpp"
#include "l1bench/linops.hpp"
#include "l1bench/rng.hpp"

namespace oracle {

inline Eigen::MatrixXd dense_stage(const l1bench::RotationStage& st) {
  using l1bench::RotationStage;
  const auto n = static_cast<Eigen::Index>(st.n);
  if (st.kind == RotationStage::Kind::paired) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n, n);
    const double c = std::cos(st.theta);
    const double s = std::sin(st.theta);
    for (Eigen::Index k = st.offset; k + 1 < n; k += 2) {
      g(k, k) = c;
      g(k, k + 1) = -s;
      g(k + 1, k) = s;
      g(k + 1, k + 1) = c;
    }
    return g;
  }
  Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n, n);
  for (const auto& r : st.rotations) {
    Eigen::MatrixXd rot = Eigen::MatrixXd::Identity(n, n);
    const double c = std::cos(r.theta);
    const double s = std::sin(r.theta);
    rot(r.i, r.i) = c;
    rot(r.i, r.j) = -s;
    rot(r.j, r.i) = s;
    rot(r.j, r.j) = c;
    g = g * rot;  // stage = rotations[0] * rotations[1] * ...
  }
  return g;
}

inline Eigen::MatrixXd dense_permutation(const l1bench::Permutation& p) {
  const auto n = static_cast<Eigen::Index>(p.n);
  Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    mat(i, p.source_of(static_cast<std::uint32_t>(i))) = 1.0;
  }
  return mat;
}

inline Eigen::MatrixXd dense_operator(const l1bench::OperatorSpec& spec) {
  const auto m = static_cast<Eigen::Index>(spec.m);
  const auto n = static_cast<Eigen::Index>(spec.n);
  Eigen::MatrixXd right = Eigen::MatrixXd::Identity(n, n);
  for (const auto& st : spec.right_stages) right = right * dense_stage(st);
  Eigen::MatrixXd left = Eigen::MatrixXd::Identity(m, m);
  for (const auto& st : spec.left_stages) left = left * dense_stage(st);
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(m, n);
  const auto& sig = spec.spectrum.values();
  for (Eigen::Index i = 0; i < n; ++i) sigma(i, i) = sig[static_cast<std::size_t>(i)];
  return dense_permutation(spec.p1) * left * dense_permutation(spec.p2) * sigma *
         right.transpose();
}

inline Eigen::MatrixXd dense_operator(const l1bench::BlockOperator& block) {
  const Eigen::MatrixXd base = dense_operator(block.base());
  const auto m = base.rows();
  const auto extc = static_cast<Eigen::Index>(block.ext().cols);
  Eigen::MatrixXd a(m, base.cols() + extc);
  a.leftCols(base.cols()) = base;
  for (Eigen::Index j = 0; j < extc; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) {
      a(i, base.cols() + j) = block.ext().at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
  }
  return a;
}

inline Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline std::vector<double> random_vector(std::size_t n, l1bench::Rng& rng, double scale = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = scale * (2.0 * l1bench::uniform_unit(rng) - 1.0);
  return v;
}

inline double rel_error(const Eigen::VectorXd& got, const Eigen::VectorXd& want) {
  const double denom = std::max(want.norm(), 1e-30);
  return (got - want).norm() / denom;
}

/// A moderately general random spec: stages on both sides, seeded
/// permutations, explicit-list stage mixed in when asked.
inline l1bench::OperatorSpec random_spec(std::size_t m, std::size_t n, std::uint64_t seed,
                                         bool with_explicit_stage = false) {
  using namespace l1bench;
  Rng rng = make_rng(seed);
  OperatorSpec spec;
  spec.m = m;
  spec.n = n;
  const std::size_t right = 1 + seed % 3;
  for (std::size_t i = 0; i < right; ++i) {
    spec.right_stages.push_back(
        RotationStage::paired(n, static_cast<int>(i % 2), uniform_in(rng, 0.1, 3.0)));
  }
  if (with_explicit_stage && n >= 4) {
    std::vector<GivensRotation> rots;
    for (int k = 0; k < 3; ++k) {
      const auto i = static_cast<std::uint32_t>(uniform_index(rng, n));
      auto j = static_cast<std::uint32_t>(uniform_index(rng, n));
      while (j == i) j = static_cast<std::uint32_t>(uniform_index(rng, n));
      rots.push_back({i, j, uniform_in(rng, 0.1, 3.0)});
    }
    spec.right_stages.push_back(RotationStage::explicit_list(n, std::move(rots)));
  }
  const std::size_t left = seed % 2 + 1;
  for (std::size_t i = 0; i < left; ++i) {
    spec.left_stages.push_back(
        RotationStage::paired(m, static_cast<int>((i + 1) % 2), uniform_in(rng, 0.1, 3.0)));
  }
  spec.p1 = Permutation::random(m, mix_seed(seed, 11));
  spec.p2 = Permutation::random(m, mix_seed(seed, 12));
  std::vector<double> sig(n);
  for (auto& s : sig) s = uniform_in(rng, 0.5, 4.0);
  spec.spectrum = Spectrum::from_values(std::move(sig));
  spec.finalize();
  return spec;
}

}  // namespace oracle
