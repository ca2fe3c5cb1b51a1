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
// Full strong branching over a batched solve: for each fractional variable of
// a relaxation point, one column bounds it up to the ceiling and one column
// bounds it down to the floor. All 2p child problems share the constraint
// matrix, objective and row bounds; each column differs from the base in a
// single variable bound.

#ifndef BATCHLP_STRONG_BRANCHING_HPP_
#define BATCHLP_STRONG_BRANCHING_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "batchlp/batch_solver.hpp"
#include "batchlp/problem.hpp"
#include "batchlp/solver.hpp"

namespace batchlp {

struct FsbRequest {
  LpProblem problem;
  std::vector<double> x_rel;            // relaxation optimum
  std::vector<int> fractional_indices;  // variables to branch on
  double integrality_tol = 1e-6;
};

struct FsbBatch {
  BatchProblem batch;
  // Branches whose rounded bound already contradicts the base interval are
  // settled without solving.
  std::vector<PresetColumn> presets;
};

struct FsbBranch {
  int variable = 0;
  SolveStatus up_status = SolveStatus::kIterationLimit;
  SolveStatus down_status = SolveStatus::kIterationLimit;
  double up_objective = 0.0;
  double down_objective = 0.0;
  double delta_up = 0.0;
  double delta_down = 0.0;
  bool up_flagged = false;  // infeasible branch, delta substituted
  bool down_flagged = false;
  std::int64_t up_iterations = 0;
  std::int64_t down_iterations = 0;
  double score = 0.0;
};

struct FsbOutcome {
  double root_objective = 0.0;
  std::vector<FsbBranch> branches;
  std::int64_t iterations = 0;
  std::int64_t sparse_products = 0;
};

inline void validate_fsb_request(const FsbRequest& req) {
  const int n = req.problem.num_cols();
  if (static_cast<int>(req.x_rel.size()) != n)
    throw std::invalid_argument("fsb: relaxation point has wrong dimension");
  for (const int i : req.fractional_indices) {
    if (i < 0 || i >= n)
      throw std::out_of_range("fsb: fractional index out of range");
    const double v = req.x_rel[i];
    if (std::abs(v - std::round(v)) <= req.integrality_tol)
      throw std::invalid_argument("fsb: variable " + std::to_string(i) +
                                  " is not fractional");
    const Interval b = req.problem.var_bounds.at(i);
    if (b.is_fixed())
      throw std::invalid_argument("fsb: variable " + std::to_string(i) +
                                  " is fixed; fixing contradicts fractionality");
    if (v < b.lower - req.integrality_tol || v > b.upper + req.integrality_tol)
      throw std::invalid_argument("fsb: relaxation value of variable " +
                                  std::to_string(i) + " violates its bounds");
  }
}

// 2p columns: column j tightens the lower bound of the j-th fractional
// variable to the ceiling, column p + j tightens its upper bound to the
// floor. Exactly one override per solvable column.
inline FsbBatch build_fsb_batch(const FsbRequest& req) {
  validate_fsb_request(req);
  const int p = static_cast<int>(req.fractional_indices.size());
  std::vector<ColumnOverride> overrides;
  std::vector<PresetColumn> presets;
  overrides.reserve(2 * static_cast<std::size_t>(p));

  for (int j = 0; j < p; ++j) {
    const int var = req.fractional_indices[j];
    const Interval base = req.problem.var_bounds.at(var);
    const double up = std::ceil(req.x_rel[var]);
    const double down = std::floor(req.x_rel[var]);
    if (up > base.upper) {
      SolveResult r;
      r.status = SolveStatus::kPrimalInfeasible;
      presets.push_back({j, std::move(r)});
    } else {
      overrides.push_back({j, OverrideKind::kVariableLower, var, up});
    }
    if (down < base.lower) {
      SolveResult r;
      r.status = SolveStatus::kPrimalInfeasible;
      presets.push_back({p + j, std::move(r)});
    } else {
      overrides.push_back({p + j, OverrideKind::kVariableUpper, var, down});
    }
  }
  return {BatchProblem(req.problem, 2 * p, ObjectiveMode::kSharedObjective,
                       std::move(overrides)),
          std::move(presets)};
}

// Runs the batch and keeps the allocation across rounds; later rounds with
// fewer fractional variables reuse the high-water buffers.
class FsbDriver {
 public:
  FsbOutcome run(const FsbRequest& req, const SolverConfig& cfg = {},
                 double infeasible_delta = 1e20) {
    const int p = static_cast<int>(req.fractional_indices.size());
    FsbOutcome outcome;
    outcome.root_objective = 0.0;
    for (int i = 0; i < req.problem.num_cols(); ++i)
      outcome.root_objective += req.problem.objective[i] * req.x_rel[i];
    if (p == 0) return outcome;

    FsbBatch fsb = build_fsb_batch(req);
    const BatchSolveSummary summary =
        solve_batch(fsb.batch, cfg, fsb.presets, &workspace_);
    outcome.iterations = summary.iterations;
    outcome.sparse_products = summary.sparse_products;
    outcome.branches.resize(p);

    for (int j = 0; j < p; ++j) {
      FsbBranch& br = outcome.branches[j];
      br.variable = req.fractional_indices[j];
      const SolveResult& up = summary.per_problem[j];
      const SolveResult& down = summary.per_problem[p + j];
      br.up_status = up.status;
      br.down_status = down.status;
      br.up_objective = up.objective;
      br.down_objective = down.objective;
      br.up_iterations = up.iterations;
      br.down_iterations = down.iterations;
      if (up.status == SolveStatus::kPrimalInfeasible) {
        br.delta_up = infeasible_delta;
        br.up_flagged = true;
      } else {
        br.delta_up = up.objective - outcome.root_objective;
      }
      if (down.status == SolveStatus::kPrimalInfeasible) {
        br.delta_down = infeasible_delta;
        br.down_flagged = true;
      } else {
        br.delta_down = down.objective - outcome.root_objective;
      }
      br.score = std::max(br.delta_down, 1e-6) * std::max(br.delta_up, 1e-6);
    }
    return outcome;
  }

 private:
  BatchWorkspace workspace_;
};

inline FsbOutcome run_fsb(const FsbRequest& req, const SolverConfig& cfg = {},
                          double infeasible_delta = 1e20) {
  FsbDriver driver;
  return driver.run(req, cfg, infeasible_delta);
}

// Product-rule ranking: score_i = max(delta_down, eps) * max(delta_up, eps),
// descending, ties broken toward the smaller variable index.
inline std::vector<int> score_branching(const FsbOutcome& outcome,
                                        double score_eps = 1e-6) {
  std::vector<std::pair<double, int>> scored;
  scored.reserve(outcome.branches.size());
  for (const FsbBranch& br : outcome.branches) {
    const double score =
        std::max(br.delta_down, score_eps) * std::max(br.delta_up, score_eps);
    scored.emplace_back(score, br.variable);
  }
  std::sort(scored.begin(), scored.end(),
            [](const std::pair<double, int>& a, const std::pair<double, int>& b) {
              if (a.first != b.first) return a.first > b.first;
              return a.second < b.second;
            });
  std::vector<int> ranked;
  ranked.reserve(scored.size());
  for (const auto& [score, var] : scored) ranked.push_back(var);
  return ranked;
}

}  // namespace batchlp

#endif  // BATCHLP_STRONG_BRANCHING_HPP_
