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
// Batched solver: N problems sharing one constraint matrix iterate together
// as column-stacked matrices X and Y. Each column keeps its own primal
// weight (and so its own tau/sigma) while the step size eta and the Halpern
// coefficient are shared. Restarts are synchronized on the averaged
// fixed-point residual. Finished columns are swapped behind the active
// prefix so the two matrix products per iteration shrink as problems solve.
//
// A width-1 batch reproduces the single-problem solver iterate for iterate:
// every elementwise kernel, product kernel and decision rule is shared, in
// the same order.

#ifndef BATCHLP_BATCH_SOLVER_HPP_
#define BATCHLP_BATCH_SOLVER_HPP_

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "batchlp/problem.hpp"
#include "batchlp/solver.hpp"
#include "batchlp/sparse.hpp"

namespace batchlp {

// A column whose result is known before iterating (for example a branch whose
// rounded bound already contradicts the base bounds). It occupies its batch
// slot but is frozen from the start.
struct PresetColumn {
  int column = 0;
  SolveResult result;
};

struct BatchSolveSummary {
  std::vector<SolveResult> per_problem;  // indexed by original problem order
  std::int64_t iterations = 0;
  int restarts = 0;
  std::int64_t sparse_products = 0;
  std::vector<RestartEvent> restart_log;
  std::uint64_t trajectory_hash = 1469598103934665603ull;
};

// Buffers reused across batch solves; they only ever grow, so steady-state
// drivers (repeated branching rounds) allocate once.
struct BatchWorkspace {
  DenseColumnBlock X, Y, AX, anchor_X, anchor_Y, anchor_AX;
  DenseColumnBlock XT, YT, AXT, ATY, AT_YT;
  std::vector<double> weights, residuals, anchor_residuals, reduced;
  std::vector<int> slot_problem;
  CertificateWorkspace cert;
};

namespace detail {

struct FrozenColumn {
  bool done = false;
  SolveResult result;
};

}  // namespace detail

inline BatchSolveSummary solve_batch(const BatchProblem& batch,
                                     const SolverConfig& cfg = {},
                                     std::span<const PresetColumn> presets = {},
                                     BatchWorkspace* external_ws = nullptr,
                                     std::span<const double> initial_weights = {}) {
  cfg.check();
  const LpProblem& p = batch.base();
  const int n = p.num_cols();
  const int m = p.num_rows();
  const int width = batch.batch_width();
  const CsrView a = p.A.view();
  const CsrView at = p.A.transpose_view();

  BatchSolveSummary summary;
  std::vector<detail::FrozenColumn> frozen(width);
  for (const PresetColumn& preset : presets) {
    if (preset.column < 0 || preset.column >= width)
      throw std::out_of_range("solve_batch: preset column out of range");
    if (frozen[preset.column].done)
      throw std::invalid_argument("solve_batch: duplicate preset column");
    frozen[preset.column] = {true, preset.result};
  }
  if (width == 0) return summary;

  BatchWorkspace local_ws;
  BatchWorkspace& ws = external_ws != nullptr ? *external_ws : local_ws;
  ws.X.resize(n, width);
  ws.Y.resize(m, width);
  ws.AX.resize(m, width);
  ws.anchor_X.resize(n, width);
  ws.anchor_Y.resize(m, width);
  ws.anchor_AX.resize(m, width);
  ws.XT.resize(n, width);
  ws.YT.resize(m, width);
  ws.AXT.resize(m, width);
  ws.ATY.resize(n, width);
  ws.AT_YT.resize(n, width);
  ws.weights.assign(width, cfg.w_init);
  if (!initial_weights.empty()) {
    if (static_cast<int>(initial_weights.size()) != width)
      throw std::invalid_argument("solve_batch: initial weight count mismatch");
    std::copy(initial_weights.begin(), initial_weights.end(), ws.weights.begin());
  }
  ws.residuals.assign(width, 0.0);
  ws.anchor_residuals.assign(width, 0.0);
  ws.reduced.assign(n, 0.0);
  ws.slot_problem.resize(width);
  for (int j = 0; j < width; ++j) ws.slot_problem[j] = j;

  const double eta = step_size_for(p.A);
  const double eps_dual = cfg.effective_eps_dual();

  for (int j = 0; j < width; ++j) {
    const ColumnView view = resolve_column(batch, j);
    double* xj = ws.X.col(j);
    for (int i = 0; i < n; ++i)
      xj[i] = project_box(0.0, view.lower(i), view.upper(i));
    std::fill_n(ws.Y.col(j), m, 0.0);
  }
  spmm(p.A, ws.X, ws.AX);
  ++summary.sparse_products;

  std::vector<detail::BestCandidate> best(width);

  int active = width;
  auto swap_slots = [&](int s, int t) {
    if (s == t) return;
    ws.X.swap_columns(s, t);
    ws.Y.swap_columns(s, t);
    ws.AX.swap_columns(s, t);
    ws.anchor_X.swap_columns(s, t);
    ws.anchor_Y.swap_columns(s, t);
    ws.anchor_AX.swap_columns(s, t);
    std::swap(ws.weights[s], ws.weights[t]);
    std::swap(ws.residuals[s], ws.residuals[t]);
    std::swap(ws.anchor_residuals[s], ws.anchor_residuals[t]);
    std::swap(ws.slot_problem[s], ws.slot_problem[t]);
    std::swap(best[s], best[t]);
  };
  // Park preset columns behind the active prefix before iterating.
  for (int s = active - 1; s >= 0; --s) {
    if (frozen[ws.slot_problem[s]].done) swap_slots(s, --active);
  }

  // Anchor at the start point.
  ws.anchor_X.data() = ws.X.data();
  ws.anchor_Y.data() = ws.Y.data();
  ws.anchor_AX.data() = ws.AX.data();

  auto freeze_result = [&](int slot, SolveResult&& r) {
    frozen[ws.slot_problem[slot]] = {true, std::move(r)};
  };

  double mean_anchor = 0.0, mean_prev = 0.0;
  std::int64_t inner_k = 0, total_k = 0;

  while (active > 0) {
    // T(Z): two matrix products plus the elementwise steps, per column.
    spmm(p.A, ws.Y, ws.ATY, /*transpose_a=*/true, active);
    ++summary.sparse_products;
    for (int j = 0; j < active; ++j) {
      const ColumnView view = resolve_column(batch, ws.slot_problem[j]);
      const StepParams sp(eta, ws.weights[j]);
      const double* xj = ws.X.col(j);
      const double* atyj = ws.ATY.col(j);
      double* xtj = ws.XT.col(j);
      for (int i = 0; i < n; ++i)
        xtj[i] = project_box(xj[i] - sp.tau * (view.cost(i) + atyj[i]),
                             view.lower(i), view.upper(i));
    }
    spmm(p.A, ws.XT, ws.AXT, /*transpose_a=*/false, active);
    ++summary.sparse_products;
    for (int j = 0; j < active; ++j) {
      const StepParams sp(eta, ws.weights[j]);
      const double* yj = ws.Y.col(j);
      const double* axj = ws.AX.col(j);
      const double* axtj = ws.AXT.col(j);
      double* ytj = ws.YT.col(j);
      for (int i = 0; i < m; ++i) {
        const double v = 2.0 * axtj[i] - axj[i];
        ytj[i] = dual_step_element(yj[i], v, sp.sigma, p.row_bounds.lower[i],
                                   p.row_bounds.upper[i]);
      }
    }

    for (int j = 0; j < active; ++j) {
      ws.residuals[j] = m_norm_residual(
          ws.X.col_span(j), ws.Y.col_span(j), ws.XT.col_span(j),
          ws.YT.col_span(j), ws.AX.col_span(j), ws.AXT.col_span(j), eta,
          ws.weights[j]);
    }
    double residual_sum = 0.0;
    int residual_count = 0;
    if (cfg.average_over_all_columns) {
      for (int j = 0; j < width; ++j) residual_sum += ws.residuals[j];
      residual_count = width;
    } else {
      for (int j = 0; j < active; ++j) residual_sum += ws.residuals[j];
      residual_count = active;
    }
    const double mean_residual = residual_sum / residual_count;
    if (inner_k == 0) {
      mean_anchor = mean_residual;
      for (int j = 0; j < active; ++j) ws.anchor_residuals[j] = ws.residuals[j];
    }

    const bool at_cap = total_k >= cfg.max_iterations;
    if (total_k % cfg.termination_check_period == 0 || at_cap) {
      spmm(p.A, ws.YT, ws.AT_YT, /*transpose_a=*/true, active);
      ++summary.sparse_products;
      std::vector<int> finished;
      for (int j = 0; j < active; ++j) {
        const ColumnView view = resolve_column(batch, ws.slot_problem[j]);
        const OptimalityReport rep = evaluate_optimality(
            view, ws.XT.col_span(j), ws.YT.col_span(j), ws.AXT.col_span(j),
            ws.AT_YT.col_span(j), ws.reduced, cfg.eps_opt, eps_dual,
            cfg.robust_bound_contribution);
        if (rep.optimal()) {
          SolveResult r;
          r.status = SolveStatus::kOptimal;
          r.objective = rep.objective;
          r.x.assign(ws.XT.col(j), ws.XT.col(j) + n);
          r.y.assign(ws.YT.col(j), ws.YT.col(j) + m);
          r.reduced_costs = ws.reduced;
          r.residuals = detail::residuals_of(rep, ws.residuals[j]);
          r.iterations = total_k;
          r.restarts = summary.restarts;
          finished.push_back(j);
          freeze_result(j, std::move(r));
          continue;
        }
        SolveResult cert_result;
        const CertificateKind cert = check_infeasibility_probe(
            view, at, ws.X.col_span(j), ws.Y.col_span(j), ws.XT.col_span(j),
            ws.YT.col_span(j), ws.ATY.col_span(j), ws.AX.col_span(j),
            ws.AXT.col_span(j), ws.reduced, cfg.eps_infeas, ws.cert,
            &cert_result.certificate, &summary.sparse_products);
        if (cert != CertificateKind::kNone) {
          cert_result.status = cert == CertificateKind::kPrimal
                                   ? SolveStatus::kPrimalInfeasible
                                   : SolveStatus::kDualInfeasible;
          cert_result.objective = rep.objective;
          cert_result.x.assign(ws.XT.col(j), ws.XT.col(j) + n);
          cert_result.y.assign(ws.YT.col(j), ws.YT.col(j) + m);
          cert_result.reduced_costs = ws.reduced;
          cert_result.residuals = detail::residuals_of(rep, ws.residuals[j]);
          cert_result.iterations = total_k;
          cert_result.restarts = summary.restarts;
          finished.push_back(j);
          freeze_result(j, std::move(cert_result));
          continue;
        }
        best[j].offer(rep, ws.residuals[j], ws.XT.col_span(j),
                      ws.YT.col_span(j), ws.reduced);
      }
      if (!finished.empty()) {
        for (int s = active - 1; s >= 0; --s) {
          if (frozen[ws.slot_problem[s]].done) swap_slots(s, --active);
        }
        if (active == 0) break;
      }
    }
    if (at_cap) {
      for (int j = 0; j < active; ++j) {
        SolveResult r;
        r.status = SolveStatus::kIterationLimit;
        r.objective = best[j].report.objective;
        r.x = std::move(best[j].x);
        r.y = std::move(best[j].y);
        r.reduced_costs = std::move(best[j].reduced);
        r.residuals = detail::residuals_of(best[j].report, best[j].fixed_point);
        r.iterations = total_k;
        r.restarts = summary.restarts;
        freeze_result(j, std::move(r));
      }
      active = 0;
      break;
    }

    if (inner_k >= 1) {
      const std::optional<RestartReason> reason = restart_reason(
          mean_residual, mean_anchor, mean_prev, inner_k, total_k, cfg);
      if (reason.has_value()) {
        summary.restart_log.push_back(
            {total_k, *reason, mean_residual, mean_anchor});
        for (int j = 0; j < active; ++j) {
          // Synchronized restarts fire on the averaged residual, so a column
          // may be re-anchored without having made progress of its own; its
          // displacement then reflects the step sizes, not the problem, and
          // must not drive the weight.
          if (ws.residuals[j] <= ws.anchor_residuals[j]) {
            const double dx_norm =
                detail::distance(ws.X.col_span(j), ws.anchor_X.col_span(j));
            const double dy_norm =
                detail::distance(ws.Y.col_span(j), ws.anchor_Y.col_span(j));
            ws.weights[j] = smoothed_primal_weight(ws.weights[j], dx_norm,
                                                   dy_norm, cfg.theta);
          }
          std::copy_n(ws.X.col(j), n, ws.anchor_X.col(j));
          std::copy_n(ws.Y.col(j), m, ws.anchor_Y.col(j));
          std::copy_n(ws.AX.col(j), m, ws.anchor_AX.col(j));
        }
        inner_k = 0;
        ++summary.restarts;
        continue;
      }
    }

    const double alpha = static_cast<double>(inner_k + 1) /
                         static_cast<double>(inner_k + 2);
    for (int j = 0; j < active; ++j) {
      halpern_combine(alpha, ws.XT.col_span(j), ws.anchor_X.col_span(j),
                      ws.X.col_span(j));
      halpern_combine(alpha, ws.YT.col_span(j), ws.anchor_Y.col_span(j),
                      ws.Y.col_span(j));
      halpern_combine(alpha, ws.AXT.col_span(j), ws.anchor_AX.col_span(j),
                      ws.AX.col_span(j));
    }
    mean_prev = mean_residual;
    ++inner_k;
    ++total_k;
    if (cfg.trace_iterates) {
      summary.trajectory_hash =
          detail::fold_hash(summary.trajectory_hash, ws.X.col_span(0));
      summary.trajectory_hash =
          detail::fold_hash(summary.trajectory_hash, ws.Y.col_span(0));
    }
  }

  summary.iterations = total_k;
  summary.per_problem.resize(width);
  for (int j = 0; j < width; ++j) {
    if (!frozen[j].done)
      throw std::logic_error("solve_batch: column finished without a result");
    summary.per_problem[j] = std::move(frozen[j].result);
  }
  return summary;
}

}  // namespace batchlp

#endif  // BATCHLP_BATCH_SOLVER_HPP_
