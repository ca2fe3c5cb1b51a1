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

#include <cmath>
#include <random>
#include <vector>

#include "batchlp/oracle.hpp"
#include "batchlp/solver.hpp"
#include "doctest.h"
#include "support/instances.hpp"

using namespace batchlp;

namespace {

// Exact fixed point of the operator for the two-variable LP: any point on the
// active face with y = 1 satisfies both stationarity equations.
WarmStart two_var_fixed_point() {
  return {{0.5, 0.5}, {1.0}};
}

}  // namespace

TEST_CASE("operator application on a one-variable problem by hand") {
  // min x, row 0 <= x, x in [0,1], tau = sigma = 0.5, start (1, 0).
  const LpProblem p = testsupport::make_problem(
      {{0, 0, 1.0}}, 1, 1, {1.0}, {{0.0, kInf}}, {{0.0, 1.0}});
  const StepParams sp(0.5, 1.0);
  const auto [xt, yt] = apply_T(p, sp, std::vector<double>{1.0},
                                std::vector<double>{0.0});
  CHECK(xt[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(yt[0] == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("operator keeps a feasible stationary point still") {
  // c = 0, y = 0, x interior with Ax inside the row box: nothing moves.
  const LpProblem p = testsupport::make_problem(
      {{0, 0, 1.0}, {0, 1, 1.0}}, 1, 2, {0.0, 0.0}, {{-kInf, 5.0}},
      {{0.0, 2.0}, {0.0, 2.0}});
  const StepParams sp(0.4, 1.0);
  const auto [xt, yt] = apply_T(p, sp, std::vector<double>{1.0, 1.0},
                                std::vector<double>{0.0});
  CHECK(xt[0] == 1.0);
  CHECK(xt[1] == 1.0);
  CHECK(yt[0] == 0.0);
}

TEST_CASE("operator fixed point stays fixed") {
  const LpProblem p = testsupport::two_var_lp();
  const WarmStart z = two_var_fixed_point();
  const StepParams sp(0.3, 1.0);
  const auto [xt, yt] = apply_T(p, sp, z.x, z.y);
  CHECK(std::abs(xt[0] - z.x[0]) <= 1e-9);
  CHECK(std::abs(xt[1] - z.x[1]) <= 1e-9);
  CHECK(std::abs(yt[0] - z.y[0]) <= 1e-9);
}

TEST_CASE("halpern combination arithmetic") {
  // At a fixed point with matching anchor nothing moves.
  std::vector<double> z{1.0, -2.0};
  const std::vector<double> t = z;
  const std::vector<double> anchor = z;
  halpern_combine(0.5, t, anchor, z);
  CHECK(z[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(z[1] == doctest::Approx(-2.0).epsilon(1e-15));

  // k = 0 reduces to a plain operator step.
  std::vector<double> z0{0.3, 0.7};
  const std::vector<double> t0{0.9, -0.1};
  std::vector<double> cur = z0;
  halpern_combine(0.5, t0, z0, cur);
  CHECK(cur[0] == doctest::Approx(t0[0]).epsilon(1e-15));
  CHECK(cur[1] == doctest::Approx(t0[1]).epsilon(1e-15));

  // k = 1 with a zero anchor and T(z) = z gives (2/3) z.
  std::vector<double> z1{0.9};
  const std::vector<double> t1 = z1;
  const std::vector<double> zero{0.0};
  halpern_combine(2.0 / 3.0, t1, zero, z1);
  CHECK(z1[0] == doctest::Approx(0.6).epsilon(1e-15));
}

TEST_CASE("residual metric simple values") {
  // T(z) = z gives zero.
  std::vector<double> x{1.0, 2.0}, y{0.5};
  std::vector<double> ax{1.5};
  CHECK(m_norm_residual(x, y, x, y, ax, ax, 0.5, 1.0) == 0.0);

  // dx = e1, dy = 0, w = eta = 1 gives 1.
  std::vector<double> xt{2.0, 2.0};
  CHECK(m_norm_residual(x, y, xt, y, ax, ax, 1.0, 1.0) ==
        doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("residual metric matches the dense quadratic form") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const int m = 2 + static_cast<int>(rng() % 6);
    const int n = 2 + static_cast<int>(rng() % 6);
    std::vector<Triplet> t;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j)
        if (rng() % 2 == 0) t.push_back({i, j, unif(rng)});
    const SparseMatrix a = SparseMatrix::from_triplets(std::move(t), m, n);
    const double norm = a.nnz() > 0 ? spectral_norm(a) : 1.0;
    const double eta = 0.998 / norm;
    const double w = 0.25 + 2.0 * std::abs(unif(rng));

    std::vector<double> dx(n), dy(m), adx(m);
    for (double& e : dx) e = unif(rng);
    for (double& e : dy) e = unif(rng);
    spmv(a, dx, adx);

    // Dense M = [[(w/eta) I, A'], [A, (1/(eta w)) I]] applied to (dx, dy).
    double expected = 0.0;
    for (int i = 0; i < n; ++i) expected += (w / eta) * dx[i] * dx[i];
    for (int i = 0; i < m; ++i) expected += (1.0 / (eta * w)) * dy[i] * dy[i];
    for (int i = 0; i < m; ++i) expected += 2.0 * dy[i] * adx[i];

    const double got = m_norm_squared(dx, dy, adx, eta, w);
    CHECK(std::abs(got - expected) <= 1e-10 * std::max(1.0, std::abs(expected)));
    CHECK(got >= -1e-10);
  }
}

TEST_CASE("residual metric flags a broken step size") {
  // eta ||A|| >= 1 makes the form indefinite for adversarial displacements:
  // A = [3], dx = 1, dy = -1, A dx = 3 at eta = 1.
  CHECK_THROWS_AS(
      (void)detail::m_residual_from_terms(1.0, 1.0, -3.0, /*eta=*/1.0, 1.0),
      std::domain_error);
}

TEST_CASE("restart decision rules") {
  SolverConfig cfg;
  CHECK(restart_reason(0.19, 1.0, 0.1, 5, 50, cfg) ==
        RestartReason::kSufficientDecay);
  CHECK(restart_reason(0.5, 1.0, 0.4, 5, 50, cfg) ==
        RestartReason::kNecessaryNoProgress);
  CHECK(restart_reason(0.9, 1.0, 0.95, 37, 100, cfg) ==
        RestartReason::kArtificial);
  CHECK_FALSE(restart_reason(0.9, 1.0, 0.95, 36, 100, cfg).has_value());
}

TEST_CASE("primal weight smoothing") {
  CHECK(smoothed_primal_weight(1.0, 1.0, 4.0, 0.5) ==
        doctest::Approx(2.0).epsilon(1e-12));
  // d equal to the current weight is a fixed point.
  CHECK(smoothed_primal_weight(3.0, 2.0, 6.0, 0.5) ==
        doctest::Approx(3.0).epsilon(1e-12));
  // Vanishing dual displacement leaves the weight alone.
  CHECK(smoothed_primal_weight(1.7, 1.0, 0.0, 0.5) == 1.7);
  CHECK(smoothed_primal_weight(1.7, 0.0, 1.0, 0.5) == 1.7);
}

TEST_CASE("a large row violation fails the primal condition") {
  // Candidate with ||Ax|| = 1 violating the row box by 10 at eps = 1e-4.
  const LpProblem p = testsupport::make_problem(
      {{0, 0, 1.0}}, 1, 1, {0.0}, {{-kInf, -9.0}}, {{-20.0, 20.0}});
  std::vector<double> xt{1.0}, yt{0.0}, axt{1.0}, at_yt{0.0}, reduced(1);
  const OptimalityReport rep = evaluate_optimality(
      ColumnView(p), xt, yt, axt, at_yt, reduced, 1e-4, 1e-4, false);
  CHECK(rep.primal_residual == doctest::Approx(10.0));
  CHECK_FALSE(rep.primal_ok);
  CHECK_FALSE(rep.optimal());
}

TEST_CASE("certificates live in their barrier cones") {
  SolverConfig cfg;
  cfg.eps_opt = 1e-6;
  const LpProblem inf = testsupport::make_problem(
      {{0, 0, 1.0}, {0, 1, 1.0}}, 1, 2, {0.0, 0.0}, {{2.0, kInf}},
      {{0.0, 0.5}, {0.0, 0.5}});
  const SolveResult r = solve(inf, cfg);
  REQUIRE(r.status == SolveStatus::kPrimalInfeasible);
  REQUIRE(r.certificate.delta_y.size() == 1);
  REQUIRE(r.certificate.delta_r.size() == 2);
  CHECK(std::isfinite(support_function(r.certificate.delta_y, inf.row_bounds)));
  CHECK(std::isfinite(support_function(r.certificate.delta_r, inf.var_bounds)));
  // The certificate actually certifies: negative support, tiny residual.
  const double s = support_function(r.certificate.delta_y, inf.row_bounds) +
                   support_function(r.certificate.delta_r, inf.var_bounds);
  CHECK(s < 0.0);
}

TEST_CASE("fully two-sided problems never trip a noise certificate") {
  // With every row an equality and every variable boxed, the cone
  // projections are identities, the priced certificate residual is
  // structurally zero and the displacement support sum is pure cancellation
  // noise. The only feasible point is x = (2, 3).
  const LpProblem p = testsupport::make_problem(
      {{0, 0, 4.0}, {0, 1, 3.0}, {1, 0, -1.0}, {1, 1, -4.0}}, 2, 2,
      {1.0, 0.0}, {{17.0, 17.0}, {-14.0, -14.0}},
      {{0.0, 2.0}, {0.0, 3.0}});
  SolverConfig cfg;
  cfg.eps_opt = 1e-6;
  const SolveResult r = solve(p, cfg);
  REQUIRE(r.status == SolveStatus::kOptimal);
  CHECK(r.objective == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("solve reaches the known optimum of the two-variable LP") {
  SolverConfig cfg;
  cfg.eps_opt = 1e-6;
  const SolveResult r = solve(testsupport::two_var_lp(), cfg);
  REQUIRE(r.status == SolveStatus::kOptimal);
  CHECK(r.objective == doctest::Approx(-1.0).epsilon(1e-4));
}

TEST_CASE("solve accepts an oracle-optimal warm start immediately") {
  SolverConfig cfg;
  cfg.eps_opt = 1e-6;
  const WarmStart z = two_var_fixed_point();
  const SolveResult r = solve(testsupport::two_var_lp(), cfg, &z);
  REQUIRE(r.status == SolveStatus::kOptimal);
  CHECK(r.iterations == 0);
  CHECK(r.objective == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("iterating from an exact fixed point never drifts") {
  const LpProblem p = testsupport::two_var_lp();
  const WarmStart z0 = two_var_fixed_point();
  const StepParams sp(step_size_for(p.A), 1.0);

  std::vector<double> x = z0.x, y = z0.y, ax(1);
  spmv(p.A, x, ax);
  std::vector<double> aty(2), xt(2), axt(1), yt(1);
  const std::vector<double> anchor_x = x, anchor_y = y, anchor_ax = ax;
  for (std::int64_t k = 0; k < 50; ++k) {
    apply_operator(ColumnView(p), p.A.view(), p.A.transpose_view(), sp,
                   x.data(), y.data(), ax.data(), aty.data(), xt.data(),
                   axt.data(), yt.data());
    const double alpha =
        static_cast<double>(k + 1) / static_cast<double>(k + 2);
    halpern_combine(alpha, xt, anchor_x, x);
    halpern_combine(alpha, yt, anchor_y, y);
    halpern_combine(alpha, axt, anchor_ax, ax);
    CHECK(std::abs(x[0] - z0.x[0]) <= 1e-12);
    CHECK(std::abs(x[1] - z0.x[1]) <= 1e-12);
    CHECK(std::abs(y[0] - z0.y[0]) <= 1e-12);
  }

  // The solver sees the same point as immediately optimal.
  SolverConfig cfg;
  cfg.eps_opt = 1e-9;
  const SolveResult r = solve(p, cfg, &z0);
  CHECK(r.status == SolveStatus::kOptimal);
  CHECK(r.iterations == 0);
}

TEST_CASE("empty constraint sets are handled") {
  // No rows at all: the projected start is optimal.
  const LpProblem boxonly = testsupport::make_problem(
      {}, 0, 2, {0.0, 0.0}, {}, {{0.25, 1.0}, {-1.0, 1.0}});
  const SolveResult r = solve(boxonly);
  REQUIRE(r.status == SolveStatus::kOptimal);
  CHECK(r.objective == 0.0);
  CHECK(r.iterations == 0);
  CHECK(r.x[0] == 0.25);
  CHECK(r.x[1] == 0.0);

  // All-zero 1x1 matrix with a free row behaves the same way.
  const LpProblem zero = testsupport::make_problem(
      {}, 1, 1, {0.0}, {{-kInf, kInf}}, {{0.0, 1.0}});
  const SolveResult rz = solve(zero);
  REQUIRE(rz.status == SolveStatus::kOptimal);
  CHECK(rz.objective == 0.0);
}

TEST_CASE("solver statuses match the oracle on the three constructions") {
  SolverConfig cfg;
  cfg.eps_opt = 1e-6;

  const SolveResult feasible = solve(testsupport::random_feasible_lp(42), cfg);
  CHECK(feasible.status == SolveStatus::kOptimal);

  const SolveResult primal_inf =
      solve(testsupport::random_primal_infeasible_lp(42), cfg);
  CHECK(primal_inf.status == SolveStatus::kPrimalInfeasible);

  const SolveResult dual_inf =
      solve(testsupport::random_dual_infeasible_lp(42), cfg);
  CHECK(dual_inf.status == SolveStatus::kDualInfeasible);
}

TEST_CASE("hand-built infeasible and unbounded instances certify") {
  SolverConfig cfg;
  cfg.eps_opt = 1e-6;
  // x0 + x1 >= 2 over [0, 0.5]^2 cannot be met.
  const LpProblem inf = testsupport::make_problem(
      {{0, 0, 1.0}, {0, 1, 1.0}}, 1, 2, {0.0, 0.0}, {{2.0, kInf}},
      {{0.0, 0.5}, {0.0, 0.5}});
  CHECK(solve(inf, cfg).status == SolveStatus::kPrimalInfeasible);

  // min -x0 with x0 - x1 <= 0 rides the ray (1, 1).
  const LpProblem unb = testsupport::make_problem(
      {{0, 0, 1.0}, {0, 1, -1.0}}, 1, 2, {-1.0, 0.0}, {{-kInf, 0.0}},
      {{0.0, kInf}, {0.0, kInf}});
  CHECK(solve(unb, cfg).status == SolveStatus::kDualInfeasible);
}

TEST_CASE("reported primal iterates respect their box") {
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const LpProblem p = testsupport::random_feasible_lp(seed);
    SolverConfig cfg;
    cfg.eps_opt = 1e-6;
    const SolveResult r = solve(p, cfg);
    REQUIRE(r.status == SolveStatus::kOptimal);
    for (int i = 0; i < p.num_cols(); ++i) {
      CHECK(r.x[i] >= p.var_bounds.lower[i]);
      CHECK(r.x[i] <= p.var_bounds.upper[i]);
    }
  }
}

TEST_CASE("solve is deterministic") {
  const LpProblem p = testsupport::random_feasible_lp(77);
  SolverConfig cfg;
  cfg.eps_opt = 1e-6;
  cfg.trace_iterates = true;
  const SolveResult a = solve(p, cfg);
  const SolveResult b = solve(p, cfg);
  CHECK(a.iterations == b.iterations);
  CHECK(a.trajectory_hash == b.trajectory_hash);
  REQUIRE(a.x.size() == b.x.size());
  for (std::size_t i = 0; i < a.x.size(); ++i) CHECK(a.x[i] == b.x[i]);
}

TEST_CASE("iteration limit carries the best candidate") {
  SolverConfig cfg;
  cfg.eps_opt = 1e-12;  // effectively unreachable for the budget below
  cfg.max_iterations = 16;
  const SolveResult r = solve(testsupport::two_var_lp(), cfg);
  CHECK(r.status == SolveStatus::kIterationLimit);
  CHECK(r.iterations == 16);
  REQUIRE(r.x.size() == 2);
  CHECK(std::isfinite(r.objective));
  CHECK(std::isfinite(r.residuals.dual));
}

TEST_CASE("sufficient-decay restarts never raise the anchor residual") {
  const LpProblem p = testsupport::random_feasible_lp(5);
  SolverConfig cfg;
  cfg.eps_opt = 1e-8;
  const SolveResult r = solve(p, cfg);
  for (const RestartEvent& e : r.restart_log) {
    if (e.reason == RestartReason::kSufficientDecay)
      CHECK(e.residual <= e.anchor_residual);
  }
}

TEST_CASE("both duality gap routes agree bit for bit") {
  const LpProblem p = testsupport::random_feasible_lp(9);
  SolverConfig plain;
  plain.eps_opt = 1e-6;
  SolverConfig robust = plain;
  robust.robust_bound_contribution = true;
  const SolveResult a = solve(p, plain);
  const SolveResult b = solve(p, robust);
  CHECK(a.status == b.status);
  CHECK(a.iterations == b.iterations);
  CHECK(a.objective == b.objective);
}
