#include "l1bench/linops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace l1bench {

namespace {

void check_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw std::invalid_argument(std::string(what) + ": expected length " +
                                std::to_string(want) + ", got " + std::to_string(got));
  }
}

inline void rotate_pair(double& vi, double& vj, double c, double s, bool transposed) {
  const double a = vi;
  const double b = vj;
  if (transposed) {
    vi = c * a + s * b;
    vj = -s * a + c * b;
  } else {
    vi = c * a - s * b;
    vj = s * a + c * b;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// RotationStage

RotationStage RotationStage::paired(std::size_t n, int offset, double theta) {
  RotationStage st;
  st.kind = Kind::paired;
  st.n = n;
  st.offset = offset;
  st.theta = theta;
  st.validate();
  return st;
}

RotationStage RotationStage::explicit_list(std::size_t n, std::vector<GivensRotation> rotations) {
  RotationStage st;
  st.kind = Kind::explicit_list;
  st.n = n;
  st.rotations = std::move(rotations);
  st.validate();
  return st;
}

std::size_t RotationStage::pair_count() const {
  if (kind == Kind::explicit_list) return rotations.size();
  if (n < 2) return 0;
  if (offset == 0) return n / 2;
  return n / 2 - (n % 2 == 0 ? 1 : 0);
}

void RotationStage::validate() const {
  if (n == 0) throw std::invalid_argument("RotationStage: dimension must be positive");
  if (kind == Kind::paired) {
    if (offset != 0 && offset != 1) throw std::invalid_argument("RotationStage: offset must be 0 or 1");
  } else {
    for (const auto& r : rotations) {
      if (r.i == r.j || r.i >= n || r.j >= n) {
        throw std::invalid_argument("RotationStage: rotation indices must be distinct and within dimension");
      }
    }
  }
}

std::size_t RotationStage::encoded_bytes() const {
  if (kind == Kind::paired) return 2 + sizeof(double);
  return 2 + rotations.size() * (2 * sizeof(std::uint32_t) + sizeof(double));
}

void apply_stage(const RotationStage& stage, std::span<double> v, bool transposed) {
  check_size(v.size(), stage.n, "apply_stage");
  if (stage.kind == RotationStage::Kind::paired) {
    const double c = std::cos(stage.theta);
    const double s = std::sin(stage.theta);
    const std::size_t start = static_cast<std::size_t>(stage.offset);
    if (transposed) {
      for (std::size_t k = start; k + 1 < stage.n; k += 2) {
        rotate_pair(v[k], v[k + 1], c, s, true);
      }
    } else {
      for (std::size_t k = start; k + 1 < stage.n; k += 2) {
        rotate_pair(v[k], v[k + 1], c, s, false);
      }
    }
    return;
  }
  // Explicit list: the stage is the product rotations[0] * ... * rotations[k].
  if (transposed) {
    for (const auto& r : stage.rotations) {
      rotate_pair(v[r.i], v[r.j], std::cos(r.theta), std::sin(r.theta), true);
    }
  } else {
    for (auto it = stage.rotations.rbegin(); it != stage.rotations.rend(); ++it) {
      rotate_pair(v[it->i], v[it->j], std::cos(it->theta), std::sin(it->theta), false);
    }
  }
}

// ---------------------------------------------------------------------------
// Sparse stage sweeps over a scatter workspace

void ColumnWorkspace::ensure(std::size_t size) {
  if (acc.size() < size) {
    acc.resize(size, 0.0);
    flag.resize(size, 0);
  }
  active.clear();
  scratch.clear();
}

namespace {

inline void spa_activate(ColumnWorkspace& ws, std::uint32_t idx, double value) {
  if (!ws.flag[idx]) {
    ws.flag[idx] = 1;
    ws.acc[idx] = value;
    ws.active.push_back(idx);
  } else {
    ws.acc[idx] += value;
  }
}

void spa_clear(ColumnWorkspace& ws) {
  for (std::uint32_t idx : ws.active) {
    ws.acc[idx] = 0.0;
    ws.flag[idx] = 0;
  }
  ws.active.clear();
}

void spa_stage(const RotationStage& stage, std::size_t dim, bool transposed, ColumnWorkspace& ws) {
  if (stage.n != dim) throw std::invalid_argument("spa_stage: stage dimension mismatch");
  if (stage.kind == RotationStage::Kind::paired) {
    const double c = std::cos(stage.theta);
    const double s = std::sin(stage.theta);
    const std::uint32_t offset = static_cast<std::uint32_t>(stage.offset);
    ws.scratch.assign(ws.active.begin(), ws.active.end());
    for (std::uint32_t idx : ws.scratch) {
      if (idx < offset) continue;
      const std::uint32_t rel = idx - offset;
      if (rel % 2 == 0) {
        if (idx + 1 < dim && !ws.flag[idx + 1]) spa_activate(ws, idx + 1, 0.0);
      } else {
        if (!ws.flag[idx - 1]) spa_activate(ws, idx - 1, 0.0);
      }
    }
    for (std::uint32_t idx : ws.active) {
      if (idx < offset) continue;
      const std::uint32_t rel = idx - offset;
      if (rel % 2 != 0 || idx + 1 >= dim) continue;
      rotate_pair(ws.acc[idx], ws.acc[idx + 1], c, s, transposed);
    }
    return;
  }
  auto touch = [&](const GivensRotation& r) {
    if (!ws.flag[r.i] && !ws.flag[r.j]) return;
    if (!ws.flag[r.i]) spa_activate(ws, r.i, 0.0);
    if (!ws.flag[r.j]) spa_activate(ws, r.j, 0.0);
    rotate_pair(ws.acc[r.i], ws.acc[r.j], std::cos(r.theta), std::sin(r.theta), transposed);
  };
  if (transposed) {
    for (const auto& r : stage.rotations) touch(r);
  } else {
    for (auto it = stage.rotations.rbegin(); it != stage.rotations.rend(); ++it) touch(*it);
  }
}

void spa_emit_sorted(ColumnWorkspace& ws, SparseColumn& out) {
  std::sort(ws.active.begin(), ws.active.end());
  out.clear();
  out.idx.reserve(ws.active.size());
  out.val.reserve(ws.active.size());
  for (std::uint32_t idx : ws.active) {
    const double v = ws.acc[idx];
    if (v != 0.0) {
      out.idx.push_back(idx);
      out.val.push_back(v);
    }
  }
  spa_clear(ws);
}

}  // namespace

// ---------------------------------------------------------------------------
// Permutation

Permutation Permutation::identity(std::size_t n) {
  Permutation p;
  p.kind = Kind::identity;
  p.n = n;
  return p;
}

Permutation Permutation::random(std::size_t n, std::uint64_t seed) {
  Permutation p;
  p.kind = Kind::seeded;
  p.n = n;
  p.seed = seed;
  return p;
}

Permutation Permutation::from_indices(std::vector<std::uint32_t> map) {
  Permutation p;
  p.kind = Kind::explicit_list;
  p.n = map.size();
  p.map_ = std::move(map);
  p.validate();
  p.realize();
  return p;
}

void Permutation::realize() {
  if (kind == Kind::identity) return;
  if (kind == Kind::seeded && map_.empty()) {
    map_.resize(n);
    std::iota(map_.begin(), map_.end(), 0u);
    Rng rng = make_rng(seed);
    for (std::size_t i = n; i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform_index(rng, i));
      std::swap(map_[i - 1], map_[j]);
    }
  }
  if (inv_.empty()) {
    inv_.resize(n);
    for (std::size_t i = 0; i < n; ++i) inv_[map_[i]] = static_cast<std::uint32_t>(i);
  }
}

void Permutation::apply(std::span<const double> in, std::span<double> out) const {
  check_size(in.size(), n, "Permutation::apply");
  check_size(out.size(), n, "Permutation::apply");
  if (kind == Kind::identity) {
    std::copy(in.begin(), in.end(), out.begin());
    return;
  }
  for (std::size_t i = 0; i < n; ++i) out[i] = in[map_[i]];
}

void Permutation::apply_transpose(std::span<const double> in, std::span<double> out) const {
  check_size(in.size(), n, "Permutation::apply_transpose");
  check_size(out.size(), n, "Permutation::apply_transpose");
  if (kind == Kind::identity) {
    std::copy(in.begin(), in.end(), out.begin());
    return;
  }
  for (std::size_t i = 0; i < n; ++i) out[map_[i]] = in[i];
}

std::uint32_t Permutation::image_of(std::uint32_t src) const {
  return kind == Kind::identity ? src : inv_[src];
}

std::uint32_t Permutation::source_of(std::uint32_t dst) const {
  return kind == Kind::identity ? dst : map_[dst];
}

void Permutation::validate() const {
  if (kind == Kind::identity) return;
  if (kind == Kind::seeded) return;
  if (map_.size() != n) throw std::invalid_argument("Permutation: index array size mismatch");
  std::vector<std::uint8_t> seen(n, 0);
  for (std::uint32_t v : map_) {
    if (v >= n || seen[v]) throw std::invalid_argument("Permutation: mapping is not a bijection");
    seen[v] = 1;
  }
}

std::size_t Permutation::encoded_bytes() const {
  switch (kind) {
    case Kind::identity: return 1;
    case Kind::seeded: return 1 + sizeof(std::uint64_t);
    case Kind::explicit_list: return 1 + n * sizeof(std::uint32_t);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Spectrum

Spectrum Spectrum::from_values(std::vector<double> values) {
  Spectrum s;
  s.kind = Kind::explicit_values;
  s.n = values.size();
  s.values_ = std::move(values);
  return s;
}

Spectrum Spectrum::uniform(std::size_t n, double lo, double hi, double shift, std::uint64_t seed) {
  Spectrum s;
  s.kind = Kind::uniform;
  s.n = n;
  s.lo = lo;
  s.hi = hi;
  s.shift = shift;
  s.seed = seed;
  return s;
}

Spectrum Spectrum::alternating(std::size_t n, double odd_value, double even_value) {
  Spectrum s;
  s.kind = Kind::alternating;
  s.n = n;
  s.odd_value = odd_value;
  s.even_value = even_value;
  return s;
}

void Spectrum::realize() {
  if (!values_.empty()) return;
  values_.resize(n);
  if (kind == Kind::uniform) {
    Rng rng = make_rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
      double u;
      do {
        u = uniform_in(rng, lo, hi);
      } while (u <= lo);  // keep sigma strictly above the shift
      values_[i] = u + shift;
    }
  } else if (kind == Kind::alternating) {
    for (std::size_t i = 0; i < n; ++i) {
      values_[i] = (i % 2 == 0) ? odd_value : even_value;  // 1-based odd positions
    }
  }
}

const std::vector<double>& Spectrum::values() const {
  if (values_.empty() && n > 0) throw std::logic_error("Spectrum: values requested before realize()");
  return values_;
}

void Spectrum::set_realized(std::vector<double> values) {
  if (values.size() != n) throw std::invalid_argument("Spectrum: realized value count mismatch");
  values_ = std::move(values);
}

double Spectrum::sigma_max() const {
  const auto& v = values();
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

double Spectrum::sigma_min() const {
  const auto& v = values();
  return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end());
}

void Spectrum::validate() const {
  for (double s : values()) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw std::runtime_error("Spectrum: all singular values must be strictly positive");
    }
  }
}

std::size_t Spectrum::encoded_bytes() const {
  switch (kind) {
    case Kind::explicit_values: return 1 + n * sizeof(double);
    case Kind::uniform: return 1 + 3 * sizeof(double) + sizeof(std::uint64_t);
    case Kind::alternating: return 1 + 2 * sizeof(double);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// LinearOperator conveniences

std::vector<double> LinearOperator::apply(std::span<const double> x) const {
  std::vector<double> out(rows());
  apply(x, out);
  return out;
}

std::vector<double> LinearOperator::apply_transpose(std::span<const double> y) const {
  std::vector<double> out(cols());
  apply_transpose(y, out);
  return out;
}

// ---------------------------------------------------------------------------
// OperatorSpec

void OperatorSpec::finalize() {
  if (m == 0 || n == 0) throw std::invalid_argument("OperatorSpec: dimensions must be positive");
  if (m < n) throw std::invalid_argument("OperatorSpec: requires m >= n");
  for (const auto& st : right_stages) {
    st.validate();
    if (st.n != n) throw std::invalid_argument("OperatorSpec: right stage dimension mismatch");
  }
  for (const auto& st : left_stages) {
    st.validate();
    if (st.n != m) throw std::invalid_argument("OperatorSpec: left stage dimension mismatch");
  }
  if (p1.n == 0) p1 = Permutation::identity(m);
  if (p2.n == 0) p2 = Permutation::identity(m);
  if (p1.n != m || p2.n != m) throw std::invalid_argument("OperatorSpec: permutation dimension mismatch");
  p1.validate();
  p2.validate();
  p1.realize();
  p2.realize();
  if (spectrum.n != n) throw std::invalid_argument("OperatorSpec: spectrum size mismatch");
  spectrum.realize();
  spectrum.validate();
  finalized_ = true;
}

void OperatorSpec::require_finalized() const {
  if (!finalized_) throw std::logic_error("OperatorSpec: finalize() must be called before use");
}

void OperatorSpec::apply(std::span<const double> x, std::span<double> out) const {
  require_finalized();
  check_size(x.size(), n, "OperatorSpec::apply");
  check_size(out.size(), m, "OperatorSpec::apply");
  const auto& sig = spectrum.values();

  std::vector<double> v(x.begin(), x.end());
  for (const auto& st : right_stages) apply_stage(st, v, true);  // G^T x

  std::vector<double> t(m);
  if (p2.kind == Permutation::Kind::identity) {
    for (std::size_t i = 0; i < m; ++i) t[i] = i < n ? sig[i] * v[i] : 0.0;
  } else {
    const auto& map = p2.map();
    for (std::size_t i = 0; i < m; ++i) {
      const std::uint32_t j = map[i];
      t[i] = j < n ? sig[j] * v[j] : 0.0;
    }
  }

  for (auto it = left_stages.rbegin(); it != left_stages.rend(); ++it) {
    apply_stage(*it, t, false);  // Gtilde * (P2 Sigma G^T x)
  }
  p1.apply(t, out);
}

void OperatorSpec::apply_transpose(std::span<const double> y, std::span<double> out) const {
  require_finalized();
  check_size(y.size(), m, "OperatorSpec::apply_transpose");
  check_size(out.size(), n, "OperatorSpec::apply_transpose");
  const auto& sig = spectrum.values();

  std::vector<double> t(m);
  p1.apply_transpose(y, t);
  for (const auto& st : left_stages) apply_stage(st, t, true);  // Gtilde^T

  std::vector<double> v(n, 0.0);
  if (p2.kind == Permutation::Kind::identity) {
    for (std::size_t j = 0; j < n; ++j) v[j] = sig[j] * t[j];
  } else {
    const auto& map = p2.map();
    for (std::size_t i = 0; i < m; ++i) {
      const std::uint32_t j = map[i];
      if (j < n) v[j] = sig[j] * t[i];
    }
  }

  for (auto it = right_stages.rbegin(); it != right_stages.rend(); ++it) {
    apply_stage(*it, v, false);  // G * (Sigma^T P2^T ...)
  }
  std::copy(v.begin(), v.end(), out.begin());
}

void OperatorSpec::apply_gram_inverse(std::span<const double> v, std::span<double> out) const {
  require_finalized();
  check_size(v.size(), n, "OperatorSpec::apply_gram_inverse");
  check_size(out.size(), n, "OperatorSpec::apply_gram_inverse");
  const auto& sig = spectrum.values();
  if (!(spectrum.sigma_min() > 0.0)) {
    throw std::runtime_error("OperatorSpec: singular spectrum, Gram inverse undefined");
  }
  std::vector<double> u(v.begin(), v.end());
  for (const auto& st : right_stages) apply_stage(st, u, true);
  for (std::size_t i = 0; i < n; ++i) u[i] /= sig[i] * sig[i];
  for (auto it = right_stages.rbegin(); it != right_stages.rend(); ++it) {
    apply_stage(*it, u, false);
  }
  std::copy(u.begin(), u.end(), out.begin());
}

void OperatorSpec::apply_right_factor(std::span<double> v, bool transposed) const {
  require_finalized();
  check_size(v.size(), n, "OperatorSpec::apply_right_factor");
  if (transposed) {
    for (const auto& st : right_stages) apply_stage(st, v, true);
  } else {
    for (auto it = right_stages.rbegin(); it != right_stages.rend(); ++it) {
      apply_stage(*it, v, false);
    }
  }
}

void OperatorSpec::apply_inverse_transpose(std::span<const double> v, std::span<double> out) const {
  require_finalized();
  if (m != n) throw std::invalid_argument("OperatorSpec: inverse transpose requires a square operator");
  check_size(v.size(), n, "OperatorSpec::apply_inverse_transpose");
  check_size(out.size(), n, "OperatorSpec::apply_inverse_transpose");
  const auto& sig = spectrum.values();
  if (!(spectrum.sigma_min() > 0.0)) {
    throw std::runtime_error("OperatorSpec: singular spectrum, inverse undefined");
  }

  std::vector<double> u(v.begin(), v.end());
  for (const auto& st : right_stages) apply_stage(st, u, true);  // G^T v

  std::vector<double> t(m);
  if (p2.kind == Permutation::Kind::identity) {
    for (std::size_t i = 0; i < m; ++i) t[i] = u[i] / sig[i];
  } else {
    const auto& map = p2.map();
    for (std::size_t i = 0; i < m; ++i) {
      const std::uint32_t j = map[i];
      t[i] = u[j] / sig[j];
    }
  }
  for (auto it = left_stages.rbegin(); it != left_stages.rend(); ++it) {
    apply_stage(*it, t, false);
  }
  p1.apply(t, out);
}

std::vector<double> OperatorSpec::gram_diagonal() const {
  require_finalized();
  const auto& sig = spectrum.values();
  if (right_stages.empty()) {
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = sig[i] * sig[i];
    return d;
  }
  // (A^T A)_{ii} = sum_j sigma_j^2 (G^T e_i)_j^2; the sparse sweep keeps the
  // per-column fill bounded by 2^{stage count}.
  std::vector<double> d(n, 0.0);
  ColumnWorkspace ws;
  ws.ensure(n);
  for (std::size_t i = 0; i < n; ++i) {
    spa_activate(ws, static_cast<std::uint32_t>(i), 1.0);
    for (const auto& st : right_stages) spa_stage(st, n, true, ws);
    double acc = 0.0;
    for (std::uint32_t idx : ws.active) {
      const double w = ws.acc[idx];
      acc += sig[idx] * sig[idx] * w * w;
    }
    d[i] = acc;
    spa_clear(ws);
  }
  return d;
}

std::optional<double> OperatorSpec::gram_lmax() const {
  require_finalized();
  const double s = spectrum.sigma_max();
  return s * s;
}

void OperatorSpec::column(std::size_t j, ColumnWorkspace& ws, SparseColumn& out) const {
  require_finalized();
  if (j >= n) throw std::invalid_argument("OperatorSpec::column: index out of range");
  const auto& sig = spectrum.values();
  ws.ensure(std::max(m, n));

  spa_activate(ws, static_cast<std::uint32_t>(j), 1.0);
  for (const auto& st : right_stages) spa_stage(st, n, true, ws);

  // Sigma then P2: a value at position k lands at the row P2 maps from k.
  std::vector<std::pair<std::uint32_t, double>> carry;
  carry.reserve(ws.active.size());
  for (std::uint32_t idx : ws.active) carry.emplace_back(idx, ws.acc[idx]);
  spa_clear(ws);
  for (const auto& [idx, val] : carry) {
    spa_activate(ws, p2.image_of(idx), sig[idx] * val);
  }

  for (auto it = left_stages.rbegin(); it != left_stages.rend(); ++it) {
    spa_stage(*it, m, false, ws);
  }

  if (p1.kind != Permutation::Kind::identity) {
    carry.clear();
    for (std::uint32_t idx : ws.active) carry.emplace_back(idx, ws.acc[idx]);
    spa_clear(ws);
    for (const auto& [idx, val] : carry) spa_activate(ws, p1.image_of(idx), val);
  }
  spa_emit_sorted(ws, out);
}

void OperatorSpec::row(std::size_t i, ColumnWorkspace& ws, SparseColumn& out) const {
  require_finalized();
  if (i >= m) throw std::invalid_argument("OperatorSpec::row: index out of range");
  const auto& sig = spectrum.values();
  ws.ensure(std::max(m, n));

  spa_activate(ws, p1.source_of(static_cast<std::uint32_t>(i)), 1.0);
  for (const auto& st : left_stages) spa_stage(st, m, true, ws);

  std::vector<std::pair<std::uint32_t, double>> carry;
  carry.reserve(ws.active.size());
  for (std::uint32_t idx : ws.active) carry.emplace_back(idx, ws.acc[idx]);
  spa_clear(ws);
  for (const auto& [idx, val] : carry) {
    const std::uint32_t t = p2.source_of(idx);
    if (t < n) spa_activate(ws, t, sig[t] * val);
  }

  for (auto it = right_stages.rbegin(); it != right_stages.rend(); ++it) {
    spa_stage(*it, n, false, ws);
  }
  spa_emit_sorted(ws, out);
}

DenseMatrix OperatorSpec::materialize(std::size_t entry_cap) const {
  require_finalized();
  if (m * n > entry_cap) {
    throw std::runtime_error("OperatorSpec::materialize: " + std::to_string(m * n) +
                             " entries exceed the cap of " + std::to_string(entry_cap));
  }
  DenseMatrix a(m, n);
  std::vector<double> e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    apply(e, a.col(j));
    e[j] = 0.0;
  }
  return a;
}

std::size_t OperatorSpec::encoded_bytes() const {
  std::size_t bytes = 2 * sizeof(std::uint64_t);  // dimensions
  for (const auto& st : right_stages) bytes += st.encoded_bytes();
  for (const auto& st : left_stages) bytes += st.encoded_bytes();
  bytes += p1.encoded_bytes() + p2.encoded_bytes();
  bytes += spectrum.encoded_bytes();
  return bytes;
}

std::size_t total_stage_count(const OperatorSpec& spec) {
  return spec.right_stages.size() + spec.left_stages.size();
}

NnzCounts nnz_counts(const OperatorSpec& spec, double tol, std::size_t entry_cap) {
  const DenseMatrix a = spec.materialize(entry_cap);
  NnzCounts counts;
  for (double v : a.data) {
    if (std::abs(v) > tol) ++counts.nnz_a;
  }
  const std::size_t n = spec.n;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < spec.m; ++k) dot += a.at(k, i) * a.at(k, j);
      if (std::abs(dot) > tol) ++counts.nnz_gram;
    }
  }
  return counts;
}

// ---------------------------------------------------------------------------
// BlockOperator

BlockOperator::BlockOperator(OperatorSpec base, DenseMatrix ext)
    : base_(std::move(base)), ext_(std::move(ext)) {
  if (!base_.finalized()) base_.finalize();
  if (base_.m != base_.n) throw std::invalid_argument("BlockOperator: base block must be square");
  if (ext_.rows != base_.m) throw std::invalid_argument("BlockOperator: extension row count mismatch");
}

void BlockOperator::apply(std::span<const double> x, std::span<double> out) const {
  check_size(x.size(), cols(), "BlockOperator::apply");
  check_size(out.size(), rows(), "BlockOperator::apply");
  base_.apply(x.first(base_.n), out);
  for (std::size_t j = 0; j < ext_.cols; ++j) {
    const double xj = x[base_.n + j];
    if (xj == 0.0) continue;
    const auto col = ext_.col(j);
    for (std::size_t i = 0; i < ext_.rows; ++i) out[i] += col[i] * xj;
  }
}

void BlockOperator::apply_transpose(std::span<const double> y, std::span<double> out) const {
  check_size(y.size(), rows(), "BlockOperator::apply_transpose");
  check_size(out.size(), cols(), "BlockOperator::apply_transpose");
  base_.apply_transpose(y, out.first(base_.n));
  for (std::size_t j = 0; j < ext_.cols; ++j) {
    const auto col = ext_.col(j);
    double dot = 0.0;
    for (std::size_t i = 0; i < ext_.rows; ++i) dot += col[i] * y[i];
    out[base_.n + j] = dot;
  }
}

std::vector<double> BlockOperator::gram_diagonal() const {
  std::vector<double> d = base_.gram_diagonal();
  d.reserve(cols());
  for (std::size_t j = 0; j < ext_.cols; ++j) {
    const auto col = ext_.col(j);
    double s = 0.0;
    for (double v : col) s += v * v;
    d.push_back(s);
  }
  return d;
}

void BlockOperator::column(std::size_t j, ColumnWorkspace& ws, SparseColumn& out) const {
  if (j < base_.n) {
    base_.column(j, ws, out);
    return;
  }
  if (j >= cols()) throw std::invalid_argument("BlockOperator::column: index out of range");
  const auto col = ext_.col(j - base_.n);
  out.clear();
  for (std::size_t i = 0; i < col.size(); ++i) {
    if (col[i] != 0.0) {
      out.idx.push_back(static_cast<std::uint32_t>(i));
      out.val.push_back(col[i]);
    }
  }
}

void BlockOperator::row(std::size_t i, ColumnWorkspace& ws, SparseColumn& out) const {
  base_.row(i, ws, out);
  for (std::size_t j = 0; j < ext_.cols; ++j) {
    const double v = ext_.at(i, j);
    if (v != 0.0) {
      out.idx.push_back(static_cast<std::uint32_t>(base_.n + j));
      out.val.push_back(v);
    }
  }
}

DenseMatrix BlockOperator::materialize(std::size_t entry_cap) const {
  if (rows() * cols() > entry_cap) {
    throw std::runtime_error("BlockOperator::materialize: entry cap exceeded");
  }
  DenseMatrix a(rows(), cols());
  const DenseMatrix b = base_.materialize(entry_cap);
  for (std::size_t j = 0; j < base_.n; ++j) {
    std::copy(b.col(j).begin(), b.col(j).end(), a.col(j).begin());
  }
  for (std::size_t j = 0; j < ext_.cols; ++j) {
    std::copy(ext_.col(j).begin(), ext_.col(j).end(), a.col(base_.n + j).begin());
  }
  return a;
}

// ---------------------------------------------------------------------------

double estimate_gram_lmax(const LinearOperator& op, std::size_t iters, std::uint64_t seed) {
  const std::size_t n = op.cols();
  Rng rng = make_rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = normal(rng);
  std::vector<double> av(op.rows());
  std::vector<double> w(n);
  double lambda = 0.0;
  for (std::size_t it = 0; it < iters; ++it) {
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) break;
    for (auto& x : v) x /= norm;
    op.apply(v, av);
    op.apply_transpose(av, w);
    lambda = 0.0;
    for (std::size_t i = 0; i < n; ++i) lambda += v[i] * w[i];
    v.swap(w);
  }
  return lambda;
}

}  // namespace l1bench
