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
//
// Optimization-based bound tightening. Minimizes and maximizes every
// variable over the LP relaxation as one 2n-column batch with +/- unit
// objectives, then applies guarded bound updates: each certified value is
// relaxed by a safety margin before it replaces a bound, and a bound only
// moves when the improvement clears a threshold. Columns that hit the
// iteration limit never update a bound unless the lenient mode can certify a
// dual-feasible partial iterate.

#ifndef BATCHLP_OBBT_HPP_
#define BATCHLP_OBBT_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "batchlp/batch_solver.hpp"
#include "batchlp/problem.hpp"
#include "batchlp/solver.hpp"

namespace batchlp {

struct ObbtConfig {
  double eps_opt = 1e-4;
  double eps_dual = 1e-8;  // dual residual certified much tighter than the gap
  double min_improvement = 1e-4;
  std::int64_t max_iterations = 100000;
  std::optional<double> cutoff;  // incumbent bound, appended as c'x <= cutoff
  // Accept a bound from an iteration-limited column when its partial iterate
  // is dual feasible at eps_dual; the dual objective is then a valid bound.
  bool lenient_iteration_limit = false;
  SolverConfig solver;  // remaining solver knobs

  void check() const {
    if (eps_dual > eps_opt)
      throw std::invalid_argument("obbt: eps_dual must not exceed eps_opt");
    if (!(min_improvement > 0.0))
      throw std::invalid_argument("obbt: min_improvement must be positive");
  }

  SolverConfig solver_config() const {
    SolverConfig cfg = solver;
    cfg.eps_opt = eps_opt;
    cfg.eps_dual = eps_dual;
    cfg.max_iterations = max_iterations;
    return cfg;
  }
};

struct ObbtVariable {
  int variable = 0;
  double old_lower = -kInf, old_upper = kInf;
  double new_lower = -kInf, new_upper = kInf;
  bool lower_changed = false, upper_changed = false;
  double lower_margin = 0.0, upper_margin = 0.0;  // safety margin applied
  SolveStatus lower_status = SolveStatus::kIterationLimit;
  SolveStatus upper_status = SolveStatus::kIterationLimit;

  bool changed() const { return lower_changed || upper_changed; }
};

struct ObbtOutcome {
  std::vector<ObbtVariable> variables;
  int changed_count = 0;
  int solved_count = 0;  // subproblems finished before the iteration cap
  int limit_count = 0;
  double mean_reduction_pct = 0.0;
  std::int64_t iterations = 0;
  std::int64_t sparse_products = 0;
};

struct ObbtBatch {
  BatchProblem batch;
  std::vector<PresetColumn> presets;  // fixed variables, settled a priori
};

// Column i minimizes x_i, column n + i minimizes -x_i. Fixed variables cost
// nothing: both of their columns are preset to their fixed value.
inline ObbtBatch build_obbt_batch(const LpProblem& p, const ObbtConfig& cfg) {
  cfg.check();
  const int n = p.num_cols();
  std::vector<PresetColumn> presets;
  for (int i = 0; i < n; ++i) {
    const Interval b = p.var_bounds.at(i);
    if (!b.is_fixed()) continue;
    SolveResult lo;
    lo.status = SolveStatus::kOptimal;
    lo.objective = b.lower;
    presets.push_back({i, std::move(lo)});
    SolveResult hi;
    hi.status = SolveStatus::kOptimal;
    hi.objective = -b.lower;
    presets.push_back({n + i, std::move(hi)});
  }
  return {BatchProblem(p, 2 * n, ObjectiveMode::kSignedUnitColumns, {},
                       cfg.cutoff),
          std::move(presets)};
}

namespace detail {

// Margin relaxing a certified objective value into a safe bound:
// eps (1 + |objective| + |dual support terms|), evaluated at the column's
// own returned triple.
inline double obbt_margin(const LpProblem& base, const SolveResult& r,
                          double eps) {
  double sup_r = 0.0;
  for (std::size_t i = 0; i < r.reduced_costs.size(); ++i)
    sup_r += support_term(r.reduced_costs[i], base.var_bounds.lower[i],
                          base.var_bounds.upper[i]);
  const double sup_y = support_function(r.y, base.row_bounds);
  return eps * (1.0 + std::abs(r.objective) + std::abs(sup_r + sup_y));
}

inline double obbt_dual_objective(const LpProblem& base, const SolveResult& r) {
  double sup_r = 0.0;
  for (std::size_t i = 0; i < r.reduced_costs.size(); ++i)
    sup_r += support_term(r.reduced_costs[i], base.var_bounds.lower[i],
                          base.var_bounds.upper[i]);
  return -(sup_r + support_function(r.y, base.row_bounds));
}

// A certified lower estimate of the column's optimal value, or nothing when
// the column cannot be trusted. Unit objectives make ||c|| = 1.
inline std::optional<double> certified_value(const LpProblem& base,
                                             const SolveResult& r,
                                             const ObbtConfig& cfg) {
  if (r.status == SolveStatus::kOptimal)
    return r.objective - obbt_margin(base, r, cfg.eps_opt);
  if (cfg.lenient_iteration_limit && r.status == SolveStatus::kIterationLimit &&
      !r.y.empty() && r.residuals.dual <= cfg.eps_dual * 2.0) {
    const double dual = obbt_dual_objective(base, r);
    if (std::isfinite(dual)) return dual - obbt_margin(base, r, cfg.eps_opt);
  }
  return std::nullopt;
}

}  // namespace detail

inline ObbtOutcome run_obbt(const LpProblem& p, const ObbtConfig& cfg = {},
                            BatchWorkspace* ws = nullptr) {
  cfg.check();
  const int n = p.num_cols();
  ObbtBatch built = build_obbt_batch(p, cfg);
  const BatchSolveSummary summary =
      solve_batch(built.batch, cfg.solver_config(), built.presets, ws);

  ObbtOutcome outcome;
  outcome.iterations = summary.iterations;
  outcome.sparse_products = summary.sparse_products;
  outcome.variables.resize(n);

  for (const SolveResult& r : summary.per_problem) {
    if (r.status == SolveStatus::kIterationLimit) ++outcome.limit_count;
    else ++outcome.solved_count;
  }

  double reduction_sum = 0.0;
  int reduction_count = 0;
  for (int i = 0; i < n; ++i) {
    ObbtVariable& var = outcome.variables[i];
    var.variable = i;
    var.old_lower = p.var_bounds.lower[i];
    var.old_upper = p.var_bounds.upper[i];
    var.new_lower = var.old_lower;
    var.new_upper = var.old_upper;

    const SolveResult& lo = summary.per_problem[i];
    const SolveResult& hi = summary.per_problem[n + i];
    var.lower_status = lo.status;
    var.upper_status = hi.status;

    // Lower side: the column minimized x_i, its certified value minus the
    // margin is a safe new lower bound.
    if (const std::optional<double> v =
            detail::certified_value(built.batch.base(), lo, cfg)) {
      var.lower_margin = lo.objective - *v;
      if (std::isfinite(*v) && *v > var.old_lower + cfg.min_improvement) {
        var.new_lower = *v;
        var.lower_changed = true;
      }
    }
    // Upper side: the column minimized -x_i; negating its certified value
    // gives a safe new upper bound (margin already folded in).
    if (const std::optional<double> v =
            detail::certified_value(built.batch.base(), hi, cfg)) {
      var.upper_margin = -*v - (-hi.objective);
      if (std::isfinite(*v) && -*v < var.old_upper - cfg.min_improvement) {
        var.new_upper = -*v;
        var.upper_changed = true;
      }
    }

    if (var.changed()) {
      ++outcome.changed_count;
      const double old_width = var.old_upper - var.old_lower;
      if (std::isfinite(old_width) && old_width > 0.0) {
        const double new_width = var.new_upper - var.new_lower;
        reduction_sum += 100.0 * (old_width - new_width) / old_width;
        ++reduction_count;
      }
    }
  }
  outcome.mean_reduction_pct =
      reduction_count > 0 ? reduction_sum / reduction_count : 0.0;
  return outcome;
}

// (number of changed variables, mean percentage width reduction over changed
// variables with finite original width).
inline std::pair<int, double> domain_reduction_stats(const ObbtOutcome& o) {
  return {o.changed_count, o.mean_reduction_pct};
}

}  // namespace batchlp

#endif  // BATCHLP_OBBT_HPP_
