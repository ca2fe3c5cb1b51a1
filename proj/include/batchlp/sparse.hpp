// Copyright 2026 the batchlp authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BATCHLP_SPARSE_HPP_
#define BATCHLP_SPARSE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace batchlp {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

// Read-only view of one CSR-encoded matrix (pattern + values).
struct CsrView {
  int n_rows = 0;
  int n_cols = 0;
  std::span<const int> offsets;  // length n_rows + 1
  std::span<const int> cols;
  std::span<const double> values;
};

// Dense column-major block. Column j is contiguous so per-problem vectors can
// be handed to the scalar kernels as plain spans.
class DenseColumnBlock {
 public:
  DenseColumnBlock() = default;
  DenseColumnBlock(int n_rows, int n_cols)
      : n_rows_(n_rows), n_cols_(n_cols),
        data_(static_cast<std::size_t>(n_rows) * n_cols, 0.0) {}

  int n_rows() const { return n_rows_; }
  int n_cols() const { return n_cols_; }
  double* col(int j) { return data_.data() + static_cast<std::size_t>(j) * n_rows_; }
  const double* col(int j) const {
    return data_.data() + static_cast<std::size_t>(j) * n_rows_;
  }
  std::span<double> col_span(int j) { return {col(j), static_cast<std::size_t>(n_rows_)}; }
  std::span<const double> col_span(int j) const {
    return {col(j), static_cast<std::size_t>(n_rows_)};
  }
  double& at(int i, int j) { return data_[static_cast<std::size_t>(j) * n_rows_ + i]; }
  double at(int i, int j) const {
    return data_[static_cast<std::size_t>(j) * n_rows_ + i];
  }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  void swap_columns(int a, int b) {
    if (a == b) return;
    std::swap_ranges(col(a), col(a) + n_rows_, col(b));
  }

  // Reshapes without shrinking capacity; contents are unspecified afterwards.
  void resize(int n_rows, int n_cols) {
    n_rows_ = n_rows;
    n_cols_ = n_cols;
    data_.resize(static_cast<std::size_t>(n_rows) * n_cols);
  }

 private:
  int n_rows_ = 0;
  int n_cols_ = 0;
  std::vector<double> data_;
};

// Sparse matrix in CSR form with an eagerly built explicit transpose, so
// products with the matrix and with its transpose both run on a row-ordered
// layout. Immutable after construction and safe to share across threads.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  // Builds from coordinate triplets. Duplicate entries are summed; entries
  // that cancel to exactly zero are dropped.
  static SparseMatrix from_triplets(std::vector<Triplet> triplets, int n_rows,
                                    int n_cols) {
    if (n_rows < 0 || n_cols < 0)
      throw std::invalid_argument("sparse: negative dimension");
    for (const Triplet& t : triplets) {
      if (t.row < 0 || t.row >= n_rows || t.col < 0 || t.col >= n_cols)
        throw std::out_of_range("sparse: triplet index (" +
                                std::to_string(t.row) + ", " +
                                std::to_string(t.col) + ") out of range");
    }
    std::stable_sort(triplets.begin(), triplets.end(),
                     [](const Triplet& a, const Triplet& b) {
                       return a.row != b.row ? a.row < b.row : a.col < b.col;
                     });

    SparseMatrix m;
    m.n_rows_ = n_rows;
    m.n_cols_ = n_cols;
    m.row_offsets_.assign(static_cast<std::size_t>(n_rows) + 1, 0);
    std::size_t i = 0;
    while (i < triplets.size()) {
      const int r = triplets[i].row;
      const int c = triplets[i].col;
      double sum = 0.0;
      while (i < triplets.size() && triplets[i].row == r && triplets[i].col == c)
        sum += triplets[i++].value;
      if (sum != 0.0) {
        m.col_indices_.push_back(c);
        m.values_.push_back(sum);
        ++m.row_offsets_[r + 1];
      }
    }
    for (int r = 0; r < n_rows; ++r) m.row_offsets_[r + 1] += m.row_offsets_[r];
    m.build_transpose();
    return m;
  }

  int n_rows() const { return n_rows_; }
  int n_cols() const { return n_cols_; }
  std::int64_t nnz() const { return static_cast<std::int64_t>(values_.size()); }

  CsrView view() const {
    return {n_rows_, n_cols_, row_offsets_, col_indices_, values_};
  }
  CsrView transpose_view() const {
    return {n_cols_, n_rows_, t_row_offsets_, t_col_indices_, t_values_};
  }

 private:
  void build_transpose() {
    t_row_offsets_.assign(static_cast<std::size_t>(n_cols_) + 1, 0);
    t_col_indices_.resize(values_.size());
    t_values_.resize(values_.size());
    for (int c : col_indices_) ++t_row_offsets_[c + 1];
    for (int c = 0; c < n_cols_; ++c) t_row_offsets_[c + 1] += t_row_offsets_[c];
    std::vector<int> cursor(t_row_offsets_.begin(), t_row_offsets_.end() - 1);
    for (int r = 0; r < n_rows_; ++r) {
      for (int p = row_offsets_[r]; p < row_offsets_[r + 1]; ++p) {
        const int c = col_indices_[p];
        const int q = cursor[c]++;
        t_col_indices_[q] = r;
        t_values_[q] = values_[p];
      }
    }
  }

  int n_rows_ = 0;
  int n_cols_ = 0;
  std::vector<int> row_offsets_, col_indices_;
  std::vector<double> values_;
  std::vector<int> t_row_offsets_, t_col_indices_;
  std::vector<double> t_values_;
};

// Sparse matrix times dense vector. The accumulation order within a row is
// the stored column order; this is the documented reduction order every
// higher-level product inherits.
inline void csr_apply(const CsrView& m, const double* x, double* out) {
  for (int i = 0; i < m.n_rows; ++i) {
    double acc = 0.0;
    for (int p = m.offsets[i]; p < m.offsets[i + 1]; ++p)
      acc += m.values[p] * x[m.cols[p]];
    out[i] = acc;
  }
}

inline void spmv(const SparseMatrix& a, std::span<const double> x,
                 std::span<double> out, bool transpose_a = false) {
  const CsrView v = transpose_a ? a.transpose_view() : a.view();
  if (static_cast<int>(x.size()) != v.n_cols ||
      static_cast<int>(out.size()) != v.n_rows)
    throw std::invalid_argument("spmv: dimension mismatch");
  csr_apply(v, x.data(), out.data());
}

namespace detail {

// Backend parallelism cap from BATCHLP_THREADS (default 1). Columns are
// distributed whole, so results do not depend on the thread count.
inline int max_backend_threads() {
  static const int cached = [] {
    const char* env = std::getenv("BATCHLP_THREADS");
    if (env == nullptr) return 1;
    const int v = std::atoi(env);
    return v < 1 ? 1 : v;
  }();
  return cached;
}

}  // namespace detail

// Sparse times dense block: out.col(j) = op(A) * x.col(j) for the leading
// active_width columns; trailing columns of `out` are left untouched. The
// transposed product uses the stored transpose, never an on-the-fly sweep.
inline void spmm(const SparseMatrix& a, const DenseColumnBlock& x,
                 DenseColumnBlock& out, bool transpose_a = false,
                 int active_width = -1) {
  const CsrView v = transpose_a ? a.transpose_view() : a.view();
  if (x.n_rows() != v.n_cols || out.n_rows() != v.n_rows ||
      out.n_cols() != x.n_cols())
    throw std::invalid_argument("spmm: dimension mismatch");
  const int width = active_width < 0 ? x.n_cols() : active_width;
  if (width > x.n_cols()) throw std::invalid_argument("spmm: active width too large");

  const int threads = detail::max_backend_threads();
  if (threads <= 1 || width < 2 ||
      static_cast<std::int64_t>(width) * a.nnz() < (1 << 18)) {
    for (int j = 0; j < width; ++j) csr_apply(v, x.col(j), out.col(j));
    return;
  }
  const int used = std::min(threads, width);
  std::vector<std::thread> pool;
  pool.reserve(used);
  for (int t = 0; t < used; ++t) {
    pool.emplace_back([&, t] {
      for (int j = t; j < width; j += used) csr_apply(v, x.col(j), out.col(j));
    });
  }
  for (std::thread& th : pool) th.join();
}

inline DenseColumnBlock spmm(const SparseMatrix& a, const DenseColumnBlock& x,
                             bool transpose_a = false) {
  DenseColumnBlock out(transpose_a ? a.n_cols() : a.n_rows(), x.n_cols());
  spmm(a, x, out, transpose_a);
  return out;
}

namespace detail {

inline double power_iteration_from(const SparseMatrix& a,
                                   std::vector<double> v) {
  const int n = a.n_cols();
  const int m = a.n_rows();
  std::vector<double> u(m), w(n);
  double estimate = 0.0;
  int stagnant = 0;
  for (int iter = 0; iter < 5000; ++iter) {
    spmv(a, v, u);
    double unorm = 0.0;
    for (double e : u) unorm += e * e;
    unorm = std::sqrt(unorm);
    if (unorm == 0.0) {
      // Start vector fell into the null space; restart from a basis vector.
      std::fill(v.begin(), v.end(), 0.0);
      v[iter % n] = 1.0;
      estimate = 0.0;
      stagnant = 0;
      continue;
    }
    spmv(a, u, w, /*transpose_a=*/true);
    double wnorm = 0.0;
    for (double e : w) wnorm += e * e;
    wnorm = std::sqrt(wnorm);

    const double prev = estimate;
    estimate = unorm;  // ||A v|| with ||v|| = 1
    if (prev > 0.0 && std::abs(estimate - prev) <= 1e-4 * estimate) {
      // A few confirmation rounds guard against premature stagnation on
      // closely spaced singular values.
      if (++stagnant >= 10) break;
    } else {
      stagnant = 0;
    }
    if (wnorm == 0.0) break;
    for (int i = 0; i < n; ++i) v[i] = w[i] / wnorm;
  }
  return estimate;
}

}  // namespace detail

// Estimate of ||A||_2 by power iteration on A'A, inflated by 1.01 so that
// step sizes derived as eta = 0.998/estimate keep eta * ||A||_2 < 1 under
// estimation error. Two deterministic starts: the normalized all-ones vector,
// and a fixed seeded pseudo-random vector that rescues matrices whose
// dominant singular direction is orthogonal to the ones vector (structured
// matrices hit this exactly). The larger estimate wins.
inline double spectral_norm(const SparseMatrix& a) {
  if (a.nnz() == 0) throw std::invalid_argument("spectral_norm: zero matrix");
  const int n = a.n_cols();

  std::vector<double> ones(n, 1.0 / std::sqrt(static_cast<double>(n)));
  const double from_ones = detail::power_iteration_from(a, std::move(ones));

  std::vector<double> mixed(n);
  std::uint64_t state = 0x9e3779b97f4a7c15ull;
  double norm_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    mixed[i] = (state >> 11) * 0x1.0p-53 * 2.0 - 1.0;
    norm_sq += mixed[i] * mixed[i];
  }
  const double inv = 1.0 / std::sqrt(norm_sq);
  for (double& e : mixed) e *= inv;
  const double from_mixed = detail::power_iteration_from(a, std::move(mixed));

  return std::max(from_ones, from_mixed) * 1.01;
}

}  // namespace batchlp

#endif  // BATCHLP_SPARSE_HPP_
