#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "l1bench/rng.hpp"

namespace l1bench {

struct GivensRotation {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  double theta = 0.0;
};

/// One factor of an orthonormal composition: either a sweep of disjoint-pair
/// plane rotations sharing a single angle (offset 0 pairs (1,2),(3,4),...;
/// offset 1 pairs (2,3),(4,5),..., 1-based), or an explicit list of
/// rotations. A stage with rotation list [R0, R1, ..., Rk] represents the
/// matrix product R0*R1*...*Rk; stage lists compose the same way.
struct RotationStage {
  enum class Kind { paired, explicit_list };

  Kind kind = Kind::paired;
  std::size_t n = 0;
  int offset = 0;
  double theta = 0.0;
  std::vector<GivensRotation> rotations;

  static RotationStage paired(std::size_t n, int offset, double theta);
  static RotationStage explicit_list(std::size_t n, std::vector<GivensRotation> rotations);

  std::size_t pair_count() const;
  void validate() const;
  std::size_t encoded_bytes() const;
};

/// Applies the stage (or its transpose) to v in place.
void apply_stage(const RotationStage& stage, std::span<double> v, bool transposed);

struct Permutation {
  enum class Kind { identity, seeded, explicit_list };

  Kind kind = Kind::identity;
  std::size_t n = 0;
  std::uint64_t seed = 0;

  static Permutation identity(std::size_t n);
  static Permutation random(std::size_t n, std::uint64_t seed);
  static Permutation from_indices(std::vector<std::uint32_t> map);

  // (Pv)[i] = v[map[i]]; realize() fills map (and its inverse) for seeded kinds.
  void realize();
  bool realized() const { return kind == Kind::identity || !map_.empty(); }
  const std::vector<std::uint32_t>& map() const { return map_; }
  const std::vector<std::uint32_t>& inverse() const { return inv_; }

  void apply(std::span<const double> in, std::span<double> out) const;
  void apply_transpose(std::span<const double> in, std::span<double> out) const;
  std::uint32_t image_of(std::uint32_t src) const;   // i such that (Pv)[i] = v[src]
  std::uint32_t source_of(std::uint32_t dst) const;  // map[dst]

  void validate() const;
  std::size_t encoded_bytes() const;

 private:
  std::vector<std::uint32_t> map_;
  std::vector<std::uint32_t> inv_;
};

/// Singular values sigma_1..sigma_n of the diagonal factor; eigenvalues of
/// the Gram matrix A^T A are sigma_i^2 by construction.
struct Spectrum {
  enum class Kind { explicit_values, uniform, alternating };

  Kind kind = Kind::explicit_values;
  std::size_t n = 0;
  // uniform: draws in (lo, hi], then shifted, so sigma_i in (shift, hi+shift].
  double lo = 0.0, hi = 1.0, shift = 0.0;
  std::uint64_t seed = 0;
  // alternating: value at odd/even 1-based positions.
  double odd_value = 1.0, even_value = 1.0;

  static Spectrum from_values(std::vector<double> values);
  static Spectrum uniform(std::size_t n, double lo, double hi, double shift, std::uint64_t seed);
  static Spectrum alternating(std::size_t n, double odd_value, double even_value);

  void realize();
  bool realized() const { return !values_.empty(); }
  const std::vector<double>& values() const;
  // Recorded realized values (bit-exact replay of uniform draws).
  void set_realized(std::vector<double> values);

  double sigma_max() const;
  double sigma_min() const;
  void validate() const;  // all sigma_i > 0
  std::size_t encoded_bytes() const;

 private:
  std::vector<double> values_;
};

struct SparseColumn {
  std::vector<std::uint32_t> idx;
  std::vector<double> val;
  void clear() { idx.clear(); val.clear(); }
  std::size_t nnz() const { return idx.size(); }
};

/// Scatter workspace for sparse stage sweeps. Reusable across calls; the
/// dense accumulator is kept zeroed between uses via the touched list.
struct ColumnWorkspace {
  std::vector<double> acc;
  std::vector<std::uint8_t> flag;
  std::vector<std::uint32_t> active;
  std::vector<std::uint32_t> scratch;

  void ensure(std::size_t size);
};

struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // column-major

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double& at(std::size_t i, std::size_t j) { return data[j * rows + i]; }
  double at(std::size_t i, std::size_t j) const { return data[j * rows + i]; }
  std::span<double> col(std::size_t j) { return {data.data() + j * rows, rows}; }
  std::span<const double> col(std::size_t j) const { return {data.data() + j * rows, rows}; }
};

/// Matrix-free linear map with the access patterns the solvers need.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;

  virtual std::size_t rows() const = 0;
  virtual std::size_t cols() const = 0;
  virtual void apply(std::span<const double> x, std::span<double> out) const = 0;
  virtual void apply_transpose(std::span<const double> y, std::span<double> out) const = 0;
  virtual std::vector<double> gram_diagonal() const = 0;
  /// Exact largest eigenvalue of A^T A when cheaply known.
  virtual std::optional<double> gram_lmax() const { return std::nullopt; }
  virtual void column(std::size_t j, ColumnWorkspace& ws, SparseColumn& out) const = 0;
  virtual void row(std::size_t i, ColumnWorkspace& ws, SparseColumn& out) const = 0;

  std::vector<double> apply(std::span<const double> x) const;
  std::vector<double> apply_transpose(std::span<const double> y) const;
};

inline constexpr std::size_t kDefaultMaterializeCap = std::size_t{1} << 24;

/// Factored operator A = (P1 * Gtilde * P2) * Sigma * G^T. The right stages
/// compose G on R^n, the left stages compose Gtilde on R^m; storage excluding
/// realized arrays is proportional to the stage count.
class OperatorSpec final : public LinearOperator {
 public:
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<RotationStage> right_stages;
  std::vector<RotationStage> left_stages;
  Permutation p1;
  Permutation p2;
  Spectrum spectrum;

  /// Validates, realizes the spectrum and permutations. Must be called once
  /// before any application; afterwards the spec is immutable and safe for
  /// concurrent use.
  void finalize();
  bool finalized() const { return finalized_; }

  std::size_t rows() const override { return m; }
  std::size_t cols() const override { return n; }
  void apply(std::span<const double> x, std::span<double> out) const override;
  void apply_transpose(std::span<const double> y, std::span<double> out) const override;
  std::vector<double> gram_diagonal() const override;
  std::optional<double> gram_lmax() const override;
  void column(std::size_t j, ColumnWorkspace& ws, SparseColumn& out) const override;
  void row(std::size_t i, ColumnWorkspace& ws, SparseColumn& out) const override;

  using LinearOperator::apply;
  using LinearOperator::apply_transpose;

  /// v -> G (Sigma^T Sigma)^{-1} G^T v: two stage sweeps and one diagonal scaling.
  void apply_gram_inverse(std::span<const double> v, std::span<double> out) const;
  /// v -> G v (transposed = false) or G^T v in place.
  void apply_right_factor(std::span<double> v, bool transposed) const;
  /// Square specs only: v -> B^{-T} v = (P1 Gtilde P2) Sigma^{-1} G^T v.
  void apply_inverse_transpose(std::span<const double> v, std::span<double> out) const;

  DenseMatrix materialize(std::size_t entry_cap = kDefaultMaterializeCap) const;

  /// Bytes needed to reconstruct the spec, excluding realized arrays
  /// (explicit permutations and explicit spectra count in full).
  std::size_t encoded_bytes() const;

 private:
  bool finalized_ = false;
  void require_finalized() const;
};

struct NnzCounts {
  std::size_t nnz_a = 0;
  std::size_t nnz_gram = 0;
};

/// Entries with |value| > tol in dense A and A^T A. Materialization cap applies.
NnzCounts nnz_counts(const OperatorSpec& spec, double tol = 1e-12,
                     std::size_t entry_cap = kDefaultMaterializeCap);

/// A = [B, E] with an invertible factored block B (m x m) and appended dense
/// columns E (m x (n-m)); the wide-form generator produces these.
class BlockOperator final : public LinearOperator {
 public:
  BlockOperator(OperatorSpec base, DenseMatrix ext);

  const OperatorSpec& base() const { return base_; }
  const DenseMatrix& ext() const { return ext_; }

  std::size_t rows() const override { return base_.m; }
  std::size_t cols() const override { return base_.n + ext_.cols; }
  void apply(std::span<const double> x, std::span<double> out) const override;
  void apply_transpose(std::span<const double> y, std::span<double> out) const override;
  std::vector<double> gram_diagonal() const override;
  void column(std::size_t j, ColumnWorkspace& ws, SparseColumn& out) const override;
  void row(std::size_t i, ColumnWorkspace& ws, SparseColumn& out) const override;

  using LinearOperator::apply;
  using LinearOperator::apply_transpose;

  DenseMatrix materialize(std::size_t entry_cap = kDefaultMaterializeCap) const;

 private:
  OperatorSpec base_;
  DenseMatrix ext_;
};

/// Pass-through wrapper that tallies applications; solvers report work in
/// matvec-equivalents through one of these.
class CountingOperator final : public LinearOperator {
 public:
  explicit CountingOperator(const LinearOperator& inner) : inner_(&inner) {}

  std::size_t rows() const override { return inner_->rows(); }
  std::size_t cols() const override { return inner_->cols(); }
  void apply(std::span<const double> x, std::span<double> out) const override {
    ++count_;
    inner_->apply(x, out);
  }
  void apply_transpose(std::span<const double> y, std::span<double> out) const override {
    ++count_;
    inner_->apply_transpose(y, out);
  }
  std::vector<double> gram_diagonal() const override { return inner_->gram_diagonal(); }
  std::optional<double> gram_lmax() const override { return inner_->gram_lmax(); }
  void column(std::size_t j, ColumnWorkspace& ws, SparseColumn& out) const override {
    inner_->column(j, ws, out);
  }
  void row(std::size_t i, ColumnWorkspace& ws, SparseColumn& out) const override {
    inner_->row(i, ws, out);
  }

  using LinearOperator::apply;
  using LinearOperator::apply_transpose;

  void add_equivalents(double amount) const { fractional_ += amount; }
  double equivalents() const { return static_cast<double>(count_) + fractional_; }

 private:
  const LinearOperator* inner_;
  mutable std::size_t count_ = 0;
  mutable double fractional_ = 0.0;
};

/// Power-iteration estimate of lambda_max(A^T A) for operators without an
/// exact spectrum (wide composites).
double estimate_gram_lmax(const LinearOperator& op, std::size_t iters, std::uint64_t seed);

/// Largest stage count on either side; bounds per-column fill as 2^value.
std::size_t total_stage_count(const OperatorSpec& spec);

}  // namespace l1bench
