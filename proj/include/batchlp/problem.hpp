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

#ifndef BATCHLP_PROBLEM_HPP_
#define BATCHLP_PROBLEM_HPP_

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "batchlp/bounds.hpp"
#include "batchlp/sparse.hpp"

namespace batchlp {

// min c'x  s.t.  l <= Ax <= u,  xl <= x <= xu.
struct LpProblem {
  SparseMatrix A;
  std::vector<double> objective;  // c, length n
  Bounds row_bounds;              // l, u, length m
  Bounds var_bounds;              // xl, xu, length n

  int num_rows() const { return A.n_rows(); }
  int num_cols() const { return A.n_cols(); }
};

struct Diagnostic {
  enum class Severity { kError, kWarning };
  Severity severity;
  std::string message;
};

struct Diagnostics {
  std::vector<Diagnostic> items;

  bool ok() const {
    return std::none_of(items.begin(), items.end(), [](const Diagnostic& d) {
      return d.severity == Diagnostic::Severity::kError;
    });
  }
  void error(std::string msg) {
    items.push_back({Diagnostic::Severity::kError, std::move(msg)});
  }
  void warning(std::string msg) {
    items.push_back({Diagnostic::Severity::kWarning, std::move(msg)});
  }
};

// Structural checks; reports everything it finds and never aborts. Empty rows
// and columns are legal (bound-only variables, vacuous rows) and only warned
// about.
inline Diagnostics validate(const LpProblem& p) {
  Diagnostics d;
  const int m = p.num_rows();
  const int n = p.num_cols();
  if (static_cast<int>(p.objective.size()) != n)
    d.error("objective length " + std::to_string(p.objective.size()) +
            " does not match column count " + std::to_string(n));
  if (static_cast<int>(p.row_bounds.size()) != m)
    d.error("row bound count " + std::to_string(p.row_bounds.size()) +
            " does not match row count " + std::to_string(m));
  if (static_cast<int>(p.var_bounds.size()) != n)
    d.error("variable bound count " + std::to_string(p.var_bounds.size()) +
            " does not match column count " + std::to_string(n));

  for (std::size_t i = 0; i < p.row_bounds.size(); ++i)
    if (!p.row_bounds.at(i).valid())
      d.error("inverted interval, row " + std::to_string(i));
  for (std::size_t i = 0; i < p.var_bounds.size(); ++i)
    if (!p.var_bounds.at(i).valid())
      d.error("inverted interval, variable " + std::to_string(i));
  for (std::size_t i = 0; i < p.objective.size(); ++i)
    if (!std::isfinite(p.objective[i]))
      d.error("non-finite objective entry " + std::to_string(i));

  const CsrView a = p.A.view();
  for (int r = 0; r < a.n_rows; ++r)
    if (a.offsets[r] == a.offsets[r + 1])
      d.warning("row " + std::to_string(r) + " has no nonzeros");
  const CsrView at = p.A.transpose_view();
  for (int c = 0; c < at.n_rows; ++c)
    if (at.offsets[c] == at.offsets[c + 1])
      d.warning("column " + std::to_string(c) + " has no nonzeros");
  return d;
}

// Appends the row c'x <= alpha; used to carry an incumbent objective bound
// into a batch. Rebuilds the CSR once.
inline LpProblem append_cutoff_row(const LpProblem& p, double alpha) {
  const CsrView a = p.A.view();
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(p.A.nnz()) + p.objective.size());
  for (int r = 0; r < a.n_rows; ++r)
    for (int q = a.offsets[r]; q < a.offsets[r + 1]; ++q)
      triplets.push_back({r, a.cols[q], a.values[q]});
  for (int c = 0; c < p.num_cols(); ++c)
    if (p.objective[c] != 0.0) triplets.push_back({p.num_rows(), c, p.objective[c]});

  LpProblem out;
  out.A = SparseMatrix::from_triplets(std::move(triplets), p.num_rows() + 1,
                                      p.num_cols());
  out.objective = p.objective;
  out.row_bounds = p.row_bounds;
  out.row_bounds.push_back({-kInf, alpha});
  out.var_bounds = p.var_bounds;
  return out;
}

enum class OverrideKind { kObjectiveEntry, kVariableLower, kVariableUpper };

// One edited entry of one batch column; a column carries at most a handful.
struct ColumnOverride {
  int column = 0;
  OverrideKind kind = OverrideKind::kVariableLower;
  int variable = 0;
  double value = 0.0;
};

enum class ObjectiveMode {
  kSharedObjective,    // every column minimizes the base c
  kSignedUnitColumns,  // column j < n minimizes +x_j, column n+j minimizes -x_j
};

// N problems sharing one constraint matrix. Objective and bound variation is
// held as overrides against the base, never as materialized n-by-N matrices.
class BatchProblem {
 public:
  BatchProblem(LpProblem base, int batch_width, ObjectiveMode mode,
               std::vector<ColumnOverride> overrides,
               std::optional<double> cutoff = std::nullopt)
      : batch_width_(batch_width), mode_(mode), cutoff_(cutoff) {
    if (batch_width < 0) throw std::invalid_argument("batch: negative width");
    if (mode == ObjectiveMode::kSignedUnitColumns &&
        batch_width != 2 * base.num_cols())
      throw std::invalid_argument(
          "batch: signed unit columns require width 2n");
    base_ = cutoff ? append_cutoff_row(base, *cutoff) : std::move(base);

    const int n = base_.num_cols();
    for (const ColumnOverride& o : overrides) {
      if (o.column < 0 || o.column >= batch_width)
        throw std::out_of_range("batch: override column out of range");
      if (o.variable < 0 || o.variable >= n)
        throw std::out_of_range("batch: override variable out of range");
      Interval eff = base_.var_bounds.at(o.variable);
      if (o.kind == OverrideKind::kVariableLower) eff.lower = o.value;
      if (o.kind == OverrideKind::kVariableUpper) eff.upper = o.value;
      if (o.kind != OverrideKind::kObjectiveEntry && !eff.valid())
        throw std::invalid_argument(
            "batch: override inverts the bound interval of variable " +
            std::to_string(o.variable));
    }
    std::stable_sort(overrides.begin(), overrides.end(),
                     [](const ColumnOverride& a, const ColumnOverride& b) {
                       return a.column < b.column;
                     });
    overrides_ = std::move(overrides);
    column_offsets_.assign(static_cast<std::size_t>(batch_width) + 1, 0);
    for (const ColumnOverride& o : overrides_) ++column_offsets_[o.column + 1];
    for (int j = 0; j < batch_width; ++j)
      column_offsets_[j + 1] += column_offsets_[j];
  }

  const LpProblem& base() const { return base_; }
  int batch_width() const { return batch_width_; }
  ObjectiveMode objective_mode() const { return mode_; }
  std::optional<double> cutoff() const { return cutoff_; }
  std::span<const ColumnOverride> overrides_for(int column) const {
    return {overrides_.data() + column_offsets_[column],
            overrides_.data() + column_offsets_[column + 1]};
  }

 private:
  LpProblem base_;
  int batch_width_;
  ObjectiveMode mode_;
  std::optional<double> cutoff_;
  std::vector<ColumnOverride> overrides_;  // sorted by column
  std::vector<int> column_offsets_;
};

// Effective objective and variable bounds of one batch column: base vectors
// with that column's overrides applied on access, nothing copied.
class ColumnView {
 public:
  // View of a standalone problem (a batch of one with no edits).
  explicit ColumnView(const LpProblem& base)
      : base_(&base), mode_(ObjectiveMode::kSharedObjective), column_(0) {}

  ColumnView(const LpProblem& base, ObjectiveMode mode, int column,
             std::span<const ColumnOverride> overrides)
      : base_(&base), mode_(mode), column_(column), overrides_(overrides) {}

  double cost(int i) const {
    double c;
    if (mode_ == ObjectiveMode::kSharedObjective) {
      c = base_->objective[i];
    } else {
      const int n = base_->num_cols();
      c = column_ < n ? (i == column_ ? 1.0 : 0.0)
                      : (i == column_ - n ? -1.0 : 0.0);
    }
    for (const ColumnOverride& o : overrides_)
      if (o.kind == OverrideKind::kObjectiveEntry && o.variable == i)
        c = o.value;
    return c;
  }

  double lower(int i) const {
    double v = base_->var_bounds.lower[i];
    for (const ColumnOverride& o : overrides_)
      if (o.kind == OverrideKind::kVariableLower && o.variable == i) v = o.value;
    return v;
  }

  double upper(int i) const {
    double v = base_->var_bounds.upper[i];
    for (const ColumnOverride& o : overrides_)
      if (o.kind == OverrideKind::kVariableUpper && o.variable == i) v = o.value;
    return v;
  }

  const LpProblem& problem() const { return *base_; }

 private:
  const LpProblem* base_;
  ObjectiveMode mode_;
  int column_;
  std::span<const ColumnOverride> overrides_;
};

inline ColumnView resolve_column(const BatchProblem& b, int column) {
  if (column < 0 || column >= b.batch_width())
    throw std::out_of_range("resolve_column: column out of range");
  return ColumnView(b.base(), b.objective_mode(), column,
                    b.overrides_for(column));
}

}  // namespace batchlp

#endif  // BATCHLP_PROBLEM_HPP_
