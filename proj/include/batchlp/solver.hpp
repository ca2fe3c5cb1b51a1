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
// Reflected Halpern primal-dual hybrid gradient for a single LP.
//
// The iterate update is
//   z^{k+1} = (k+1)/(k+2) * (2 T(z^k) - z^k) + 1/(k+2) * z^0,
// where T applies one projected primal step and one projected dual step and
// z^0 is the anchor. The anchor is reset to the current iterate on adaptive
// restarts driven by the fixed-point residual ||T(z) - z||_M.
//
// Per iteration the operator costs exactly two sparse products (A'y and
// A x_new). A(2x_new - x) is then a vector combination because A x is carried
// along as part of the state: the Halpern update is affine, so A x^{k+1}
// follows from A x_new, A x^k and the anchor's A x^0 without another product.
// That also makes the residual's cross term dy'A dx free. Termination and
// infeasibility are evaluated every termination_check_period iterations on
// the (x_new, y_new) candidate, which costs one extra A'y product; the
// candidate is used because the dual step leaves y_new inside the barrier
// cone, keeping the support-function terms of the duality gap finite.

#ifndef BATCHLP_SOLVER_HPP_
#define BATCHLP_SOLVER_HPP_

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "batchlp/bounds.hpp"
#include "batchlp/problem.hpp"
#include "batchlp/sparse.hpp"

namespace batchlp {

// Primal step tau = eta/w, dual step sigma = eta*w. With eta below 1/||A||_2
// the induced residual metric is positive semidefinite.
struct StepParams {
  double eta = 0.0;
  double w = 1.0;
  double tau = 0.0;
  double sigma = 0.0;

  StepParams() = default;
  StepParams(double eta_, double w_)
      : eta(eta_), w(w_), tau(eta_ / w_), sigma(eta_ * w_) {}
};

inline double step_size_for(const SparseMatrix& a) {
  return 0.998 / (a.nnz() == 0 ? 1.0 : spectral_norm(a));
}

struct SolverConfig {
  double eps_opt = 1e-4;
  double eps_infeas = 1e-8;
  // Dual residual tolerance override; negative means "use eps_opt". Bound
  // tightening sets this to 1e-8 while keeping the looser gap tolerance.
  double eps_dual = -1.0;
  double theta = 0.5;  // primal weight smoothing exponent
  double beta_sufficient = 0.2;
  double beta_necessary = 0.8;
  double beta_artificial = 0.36;
  std::int64_t max_iterations = 100000;
  std::int64_t termination_check_period = 64;
  double w_init = 1.0;
  // Alternative route for the bound term of the duality gap, read off the
  // sign pattern of -c - A'y instead of the projected reduced costs.
  bool robust_bound_contribution = false;
  // Batched solves only: keep frozen columns in the averaged restart
  // residual instead of averaging over active columns.
  bool average_over_all_columns = false;
  // Fold every iterate into SolveResult::trajectory_hash (regression aid).
  bool trace_iterates = false;

  double effective_eps_dual() const { return eps_dual < 0.0 ? eps_opt : eps_dual; }

  void check() const {
    if (!(beta_sufficient > 0.0 && beta_sufficient < beta_necessary &&
          beta_necessary < 1.0))
      throw std::invalid_argument("config: need 0 < beta_s < beta_n < 1");
    if (!(theta > 0.0 && theta <= 1.0))
      throw std::invalid_argument("config: need 0 < theta <= 1");
    if (termination_check_period < 1)
      throw std::invalid_argument("config: check period must be >= 1");
    if (max_iterations < 0)
      throw std::invalid_argument("config: negative iteration limit");
    if (!(eps_opt > 0.0) || !(eps_infeas > 0.0))
      throw std::invalid_argument("config: tolerances must be positive");
  }
};

enum class SolveStatus {
  kOptimal,
  kPrimalInfeasible,
  kDualInfeasible,
  kIterationLimit,
};

enum class RestartReason { kSufficientDecay, kNecessaryNoProgress, kArtificial };

struct RestartEvent {
  std::int64_t at_iteration = 0;
  RestartReason reason = RestartReason::kSufficientDecay;
  double residual = 0.0;         // averaged residual that fired the restart
  double anchor_residual = 0.0;  // residual at the anchor it replaced
};

// Displacement vectors witnessing infeasibility. delta_y and delta_r live in
// the barrier cones of the row and variable bounds by construction.
struct InfeasibilityProbe {
  std::vector<double> delta_x, delta_y, delta_r;
};

struct Residuals {
  double gap = kInf;          // |primal - dual| of the reported candidate
  double primal = kInf;       // ||Ax - proj(Ax)||
  double dual = kInf;         // ||c + A'y + r||
  double fixed_point = kInf;  // ||T(z) - z||_M at the last evaluation
};

struct SolveResult {
  SolveStatus status = SolveStatus::kIterationLimit;
  double objective = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> x, y, reduced_costs;
  Residuals residuals;
  std::int64_t iterations = 0;
  int restarts = 0;
  InfeasibilityProbe certificate;  // filled for infeasible statuses
  std::vector<RestartEvent> restart_log;
  std::uint64_t trajectory_hash = 1469598103934665603ull;
  std::int64_t sparse_products = 0;
};

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) {
  double s = 0.0;
  for (double e : a) s += e * e;
  return std::sqrt(s);
}

inline double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline std::uint64_t fold_hash(std::uint64_t h, std::span<const double> v) {
  const unsigned char* bytes = reinterpret_cast<const unsigned char*>(v.data());
  for (std::size_t i = 0; i < v.size() * sizeof(double); ++i) {
    h ^= bytes[i];
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace detail

// Dual update element y + sigma v - sigma proj(y/sigma + v), computed as
// sigma (s - proj(s)) with s = y/sigma + v. The difference form is exactly
// sign-correct after the clamp, so the output lies in the barrier cone of
// [lo, hi] with no rounding slop; the support-function terms of the duality
// gap stay finite at every candidate.
inline double dual_step_element(double y, double v, double sigma, double lo,
                                double hi) {
  const double s = y / sigma + v;
  return sigma * (s - project_box(s, lo, hi));
}

// One application of the operator on one column.
//   x_new = proj_box(x - tau (c + A'y))
//   y_new = y + sigma v - sigma proj_box(y/sigma + v),  v = A(2 x_new - x)
// Inputs x, y and ax = A x; outputs aty = A'y, xt = x_new, axt = A x_new and
// yt = y_new. Exactly two sparse products.
inline void apply_operator(const ColumnView& col, const CsrView& a,
                           const CsrView& at, const StepParams& sp,
                           const double* x, const double* y, const double* ax,
                           double* aty, double* xt, double* axt, double* yt) {
  const int n = a.n_cols;
  const int m = a.n_rows;
  csr_apply(at, y, aty);
  for (int i = 0; i < n; ++i)
    xt[i] = project_box(x[i] - sp.tau * (col.cost(i) + aty[i]), col.lower(i),
                        col.upper(i));
  csr_apply(a, xt, axt);
  const Bounds& rb = col.problem().row_bounds;
  for (int i = 0; i < m; ++i) {
    const double v = 2.0 * axt[i] - ax[i];
    yt[i] = dual_step_element(y[i], v, sp.sigma, rb.lower[i], rb.upper[i]);
  }
}

// Standalone operator application; computes A x internally. Main loops use
// apply_operator with the carried A x instead.
inline std::pair<std::vector<double>, std::vector<double>> apply_T(
    const LpProblem& p, const StepParams& sp, std::span<const double> x,
    std::span<const double> y) {
  const int n = p.num_cols();
  const int m = p.num_rows();
  if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != m)
    throw std::invalid_argument("apply_T: dimension mismatch");
  std::vector<double> ax(m), aty(n), xt(n), axt(m), yt(m);
  spmv(p.A, x, ax);
  apply_operator(ColumnView(p), p.A.view(), p.A.transpose_view(), sp, x.data(),
                 y.data(), ax.data(), aty.data(), xt.data(), axt.data(),
                 yt.data());
  return {std::move(xt), std::move(yt)};
}

// Quadratic form of the residual metric for a displacement (dx, dy):
//   (w/eta) ||dx||^2 + (1/(eta w)) ||dy||^2 + 2 dy'(A dx).
inline double m_norm_squared(std::span<const double> dx,
                             std::span<const double> dy,
                             std::span<const double> a_dx, double eta,
                             double w) {
  double dx_sq = 0.0;
  for (double e : dx) dx_sq += e * e;
  double dy_sq = 0.0, cross = 0.0;
  for (std::size_t i = 0; i < dy.size(); ++i) {
    dy_sq += dy[i] * dy[i];
    cross += dy[i] * a_dx[i];
  }
  return (w / eta) * dx_sq + (1.0 / (eta * w)) * dy_sq + 2.0 * cross;
}

namespace detail {

inline double m_residual_from_terms(double dx_sq, double dy_sq, double cross,
                                    double eta, double w) {
  const double msq = (w / eta) * dx_sq + (1.0 / (eta * w)) * dy_sq + 2.0 * cross;
  if (msq < 0.0) {
    const double scale =
        (w / eta) * dx_sq + (1.0 / (eta * w)) * dy_sq + 2.0 * std::abs(cross);
    if (msq < -1e-12 * std::max(1.0, scale))
      throw std::domain_error(
          "residual metric is not positive semidefinite; step size exceeds "
          "1/||A||");
    return 0.0;
  }
  return std::sqrt(msq);
}

}  // namespace detail

// ||T(z) - z||_M from the iterate, the operator output and the carried
// products. Tiny negative rounding is clamped to zero; a genuinely negative
// form signals a broken step size.
inline double m_norm_residual(std::span<const double> x,
                              std::span<const double> y,
                              std::span<const double> xt,
                              std::span<const double> yt,
                              std::span<const double> ax,
                              std::span<const double> axt, double eta,
                              double w) {
  double dx_sq = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = xt[i] - x[i];
    dx_sq += d * d;
  }
  double dy_sq = 0.0, cross = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = yt[i] - y[i];
    dy_sq += d * d;
    cross += d * (axt[i] - ax[i]);
  }
  return detail::m_residual_from_terms(dx_sq, dy_sq, cross, eta, w);
}

// z <- alpha (2 t - z) + (1 - alpha) anchor, elementwise, in place.
inline void halpern_combine(double alpha, std::span<const double> t_out,
                            std::span<const double> anchor,
                            std::span<double> z) {
  for (std::size_t i = 0; i < z.size(); ++i)
    z[i] = alpha * (2.0 * t_out[i] - z[i]) + (1.0 - alpha) * anchor[i];
}

inline std::optional<RestartReason> restart_reason(double r, double r_anchor,
                                                   double r_prev,
                                                   std::int64_t inner_k,
                                                   std::int64_t total_k,
                                                   const SolverConfig& cfg) {
  if (r <= cfg.beta_sufficient * r_anchor) return RestartReason::kSufficientDecay;
  if (r <= cfg.beta_necessary * r_anchor && r > r_prev)
    return RestartReason::kNecessaryNoProgress;
  if (static_cast<double>(inner_k) >
      cfg.beta_artificial * static_cast<double>(total_k))
    return RestartReason::kArtificial;
  return std::nullopt;
}

// Exponential smoothing w <- exp(theta log d + (1-theta) log w) of the
// anchor displacement ratio d = ||dy|| / ||dx||. This is the ratio that
// balances the two diagonal blocks of the residual metric, (w/eta)||dx||^2
// against ||dy||^2/(eta w): with tau = eta/w, a small primal displacement
// must raise w to shrink the primal step. No-op unless d is finite and
// positive. Each update moves log w by at most log 4: an iterate pinned at a
// bound displaces by rounding noise only, and an uncapped update then swings
// the weight by orders of magnitude and freezes one side of the iteration.
inline double smoothed_primal_weight(double w, double dx_norm, double dy_norm,
                                     double theta) {
  if (!(dx_norm > 0.0) || !(dy_norm > 0.0) || !std::isfinite(dx_norm) ||
      !std::isfinite(dy_norm))
    return w;
  const double d = dy_norm / dx_norm;
  if (!std::isfinite(d) || d <= 0.0) return w;
  const double log_w = std::log(w);
  const double proposed = theta * std::log(d) + (1.0 - theta) * log_w;
  const double step_cap = std::log(4.0);
  if (proposed > log_w + step_cap) return std::exp(log_w + step_cap);
  if (proposed < log_w - step_cap) return std::exp(log_w - step_cap);
  return std::exp(proposed);
}

// Optimality conditions evaluated at a candidate triple (x, y, r):
//   |c'x + phi_vb(r) + phi_rb(y)| <= eps (1 + |c'x| + |phi_vb(r) + phi_rb(y)|)
//   ||Ax - proj(Ax)||             <= eps (1 + ||Ax||)
//   ||c + A'y + r||               <= eps_dual (1 + ||c||)
struct OptimalityReport {
  double objective = 0.0;
  double bound_support = 0.0;  // phi over variable bounds of the reduced costs
  double row_support = 0.0;    // phi over row bounds of y
  double gap = kInf;
  double primal_residual = kInf;
  double dual_residual = kInf;
  bool gap_ok = false;
  bool primal_ok = false;
  bool dual_ok = false;
  double score = kInf;  // worst relative violation; lower is better

  bool optimal() const { return gap_ok && primal_ok && dual_ok; }
  double dual_objective() const { return -(bound_support + row_support); }
};

// Writes the reduced costs r = proj_barrier(-c - A'y) into reduced_out and
// evaluates the three conditions. at_yt must hold A'y of the candidate.
inline OptimalityReport evaluate_optimality(
    const ColumnView& col, std::span<const double> xt,
    std::span<const double> yt, std::span<const double> axt,
    std::span<const double> at_yt, std::span<double> reduced_out, double eps,
    double eps_dual, bool robust_bound_contribution) {
  const LpProblem& p = col.problem();
  const int n = p.num_cols();
  const int m = p.num_rows();
  OptimalityReport rep;

  double obj = 0.0, c_sq = 0.0, dres_sq = 0.0, sup_r = 0.0;
  for (int i = 0; i < n; ++i) {
    const double c = col.cost(i);
    obj += c * xt[i];
    c_sq += c * c;
    const double lo = col.lower(i);
    const double hi = col.upper(i);
    const double g = -c - at_yt[i];
    const double r = project_barrier_cone(g, lo, hi);
    reduced_out[i] = r;
    const double viol = c + at_yt[i] + r;
    dres_sq += viol * viol;
    if (robust_bound_contribution) {
      if (g > 0.0 && hi != kInf) sup_r += hi * g;
      else if (g < 0.0 && lo != -kInf) sup_r += lo * g;
    } else {
      sup_r += support_term(r, lo, hi);
    }
  }
  double sup_y = 0.0;
  double pres_sq = 0.0, ax_sq = 0.0;
  for (int i = 0; i < m; ++i) {
    const double lo = p.row_bounds.lower[i];
    const double hi = p.row_bounds.upper[i];
    sup_y += support_term(yt[i], lo, hi);
    const double viol = axt[i] - project_box(axt[i], lo, hi);
    pres_sq += viol * viol;
    ax_sq += axt[i] * axt[i];
  }

  rep.objective = obj;
  rep.bound_support = sup_r;
  rep.row_support = sup_y;
  rep.primal_residual = std::sqrt(pres_sq);
  rep.dual_residual = std::sqrt(dres_sq);

  const double supports = sup_r + sup_y;
  const double gap = obj + supports;
  const double gap_scale = 1.0 + std::abs(obj) + std::abs(supports);
  rep.gap = std::isfinite(gap) ? std::abs(gap) : kInf;
  rep.gap_ok = std::isfinite(gap) && std::abs(gap) <= eps * gap_scale;
  const double primal_scale = 1.0 + std::sqrt(ax_sq);
  rep.primal_ok = rep.primal_residual <= eps * primal_scale;
  const double dual_scale = 1.0 + std::sqrt(c_sq);
  rep.dual_ok = rep.dual_residual <= eps_dual * dual_scale;
  rep.score = std::max({rep.gap / gap_scale, rep.primal_residual / primal_scale,
                        rep.dual_residual / dual_scale});
  return rep;
}

enum class CertificateKind { kNone, kPrimal, kDual };

// Scratch buffers for the displacement-vector test; sized lazily.
struct CertificateWorkspace {
  std::vector<double> reduced_current, delta_r, delta_y, at_delta_y;
};

// Infeasibility conditions from the displacement between the iterate (x, y)
// and its image (xt, yt):
//   primal: phi(dy) + phi(dr) < 0 and ||A'dy + dr|| <= eps |phi(dy) + phi(dr)|
//   dual:   c'dx < 0, ||dx - proj_rec(dx)|| <= eps |c'dx|,
//           ||A dx - proj_rec(A dx)|| <= eps |c'dx|
// with dy and dr projected onto the barrier cones of their boxes. The primal
// test is tried first. aty is A'y of the iterate (already computed by the
// operator); reduced_candidate is the candidate's reduced cost vector.
inline CertificateKind check_infeasibility_probe(
    const ColumnView& col, const CsrView& at, std::span<const double> x,
    std::span<const double> y, std::span<const double> xt,
    std::span<const double> yt, std::span<const double> aty,
    std::span<const double> ax, std::span<const double> axt,
    std::span<const double> reduced_candidate, double eps,
    CertificateWorkspace& ws, InfeasibilityProbe* out,
    std::int64_t* product_count) {
  const LpProblem& p = col.problem();
  const int n = p.num_cols();
  const int m = p.num_rows();
  ws.reduced_current.resize(n);
  ws.delta_r.resize(n);
  ws.delta_y.resize(m);

  for (int i = 0; i < m; ++i)
    ws.delta_y[i] = project_barrier_cone(yt[i] - y[i], p.row_bounds.lower[i],
                                         p.row_bounds.upper[i]);
  for (int i = 0; i < n; ++i) {
    const double lo = col.lower(i);
    const double hi = col.upper(i);
    ws.reduced_current[i] = project_barrier_cone(-col.cost(i) - aty[i], lo, hi);
    ws.delta_r[i] =
        project_barrier_cone(reduced_candidate[i] - ws.reduced_current[i], lo, hi);
  }

  // The support sum must be negative beyond cancellation noise: on fully
  // two-sided problems the cone projections are identities and the priced
  // residual below is structurally zero, so a raw float sign test would turn
  // rounding noise of the sum into a certificate.
  double displ_support = 0.0, displ_scale = 0.0;
  for (int i = 0; i < m; ++i) {
    const double term =
        support_term(ws.delta_y[i], p.row_bounds.lower[i], p.row_bounds.upper[i]);
    displ_support += term;
    displ_scale += std::abs(term);
  }
  for (int i = 0; i < n; ++i) {
    const double term = support_term(ws.delta_r[i], col.lower(i), col.upper(i));
    displ_support += term;
    displ_scale += std::abs(term);
  }
  if (displ_support < -1e-9 * std::max(1.0, displ_scale)) {
    ws.at_delta_y.resize(n);
    csr_apply(at, ws.delta_y.data(), ws.at_delta_y.data());
    if (product_count != nullptr) ++*product_count;
    double res_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v = ws.at_delta_y[i] + ws.delta_r[i];
      res_sq += v * v;
    }
    if (std::sqrt(res_sq) <= eps * std::abs(displ_support)) {
      if (out != nullptr) {
        out->delta_x.assign(n, 0.0);
        for (int i = 0; i < n; ++i) out->delta_x[i] = xt[i] - x[i];
        out->delta_y = ws.delta_y;
        out->delta_r = ws.delta_r;
      }
      return CertificateKind::kPrimal;
    }
  }

  double descent = 0.0, descent_scale = 0.0;
  for (int i = 0; i < n; ++i) {
    const double term = col.cost(i) * (xt[i] - x[i]);
    descent += term;
    descent_scale += std::abs(term);
  }
  if (descent < -1e-9 * std::max(1.0, descent_scale)) {
    double var_sq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double dx = xt[i] - x[i];
      const double v = dx - project_recession_cone(dx, col.lower(i), col.upper(i));
      var_sq += v * v;
    }
    double row_sq = 0.0;
    for (int i = 0; i < m; ++i) {
      const double adx = axt[i] - ax[i];
      const double v = adx - project_recession_cone(adx, p.row_bounds.lower[i],
                                                    p.row_bounds.upper[i]);
      row_sq += v * v;
    }
    const double budget = eps * std::abs(descent);
    if (std::sqrt(var_sq) <= budget && std::sqrt(row_sq) <= budget) {
      if (out != nullptr) {
        out->delta_x.assign(n, 0.0);
        for (int i = 0; i < n; ++i) out->delta_x[i] = xt[i] - x[i];
        out->delta_y.clear();
        out->delta_r.clear();
      }
      return CertificateKind::kDual;
    }
  }
  return CertificateKind::kNone;
}

struct WarmStart {
  std::vector<double> x, y;
};

namespace detail {

// Snapshot of the strongest candidate seen so far, returned when the
// iteration limit is reached.
struct BestCandidate {
  double score = kInf;
  std::vector<double> x, y, reduced;
  OptimalityReport report;
  double fixed_point = kInf;

  void offer(const OptimalityReport& rep, double fixed_point_residual,
             std::span<const double> xt, std::span<const double> yt,
             std::span<const double> r) {
    if (rep.score >= score) return;
    score = rep.score;
    report = rep;
    fixed_point = fixed_point_residual;
    x.assign(xt.begin(), xt.end());
    y.assign(yt.begin(), yt.end());
    reduced.assign(r.begin(), r.end());
  }
};

inline Residuals residuals_of(const OptimalityReport& rep, double fixed_point) {
  Residuals r;
  r.gap = rep.gap;
  r.primal = rep.primal_residual;
  r.dual = rep.dual_residual;
  r.fixed_point = fixed_point;
  return r;
}

}  // namespace detail

// Solves one LP. The default start is (proj_box(0), 0); a warm start is
// projected onto the variable box before use.
inline SolveResult solve(const LpProblem& p, const SolverConfig& cfg = {},
                         const WarmStart* warm = nullptr) {
  cfg.check();
  const int n = p.num_cols();
  const int m = p.num_rows();
  if (static_cast<int>(p.objective.size()) != n ||
      static_cast<int>(p.row_bounds.size()) != m ||
      static_cast<int>(p.var_bounds.size()) != n)
    throw std::invalid_argument("solve: inconsistent problem dimensions");

  const CsrView a = p.A.view();
  const CsrView at = p.A.transpose_view();
  const ColumnView col(p);

  SolveResult result;
  const double eta = step_size_for(p.A);
  StepParams sp(eta, cfg.w_init);

  std::vector<double> x(n), y(m, 0.0);
  for (int i = 0; i < n; ++i)
    x[i] = project_box(0.0, p.var_bounds.lower[i], p.var_bounds.upper[i]);
  if (warm != nullptr) {
    if (static_cast<int>(warm->x.size()) != n ||
        static_cast<int>(warm->y.size()) != m)
      throw std::invalid_argument("solve: warm start dimension mismatch");
    for (int i = 0; i < n; ++i)
      x[i] = project_box(warm->x[i], p.var_bounds.lower[i], p.var_bounds.upper[i]);
    y = warm->y;
  }
  std::vector<double> ax(m);
  spmv(p.A, x, ax);
  ++result.sparse_products;

  std::vector<double> anchor_x = x, anchor_y = y, anchor_ax = ax;
  std::vector<double> aty(n), xt(n), axt(m), yt(m);
  std::vector<double> at_yt(n), reduced(n);
  CertificateWorkspace cert_ws;
  detail::BestCandidate best;

  const double eps_dual = cfg.effective_eps_dual();
  double r_anchor = 0.0, r_prev = 0.0;
  std::int64_t inner_k = 0, total_k = 0;
  // The displacement ratio only reflects the problem's geometry when the
  // inner loop made progress; without progress it measures the step sizes
  // themselves and feeds back explosively. Gate the weight update on the
  // residual having decayed since the anchor.

  for (;;) {
    apply_operator(col, a, at, sp, x.data(), y.data(), ax.data(), aty.data(),
                   xt.data(), axt.data(), yt.data());
    result.sparse_products += 2;
    const double residual =
        m_norm_residual(x, y, xt, yt, ax, axt, sp.eta, sp.w);
    if (inner_k == 0) r_anchor = residual;

    const bool at_cap = total_k >= cfg.max_iterations;
    if (total_k % cfg.termination_check_period == 0 || at_cap) {
      csr_apply(at, yt.data(), at_yt.data());
      ++result.sparse_products;
      const OptimalityReport rep =
          evaluate_optimality(col, xt, yt, axt, at_yt, reduced, cfg.eps_opt,
                              eps_dual, cfg.robust_bound_contribution);
      if (rep.optimal()) {
        result.status = SolveStatus::kOptimal;
        result.objective = rep.objective;
        result.x = xt;
        result.y = yt;
        result.reduced_costs = reduced;
        result.residuals = detail::residuals_of(rep, residual);
        result.iterations = total_k;
        return result;
      }
      const CertificateKind cert = check_infeasibility_probe(
          col, at, x, y, xt, yt, aty, ax, axt, reduced, cfg.eps_infeas,
          cert_ws, &result.certificate, &result.sparse_products);
      if (cert != CertificateKind::kNone) {
        result.status = cert == CertificateKind::kPrimal
                            ? SolveStatus::kPrimalInfeasible
                            : SolveStatus::kDualInfeasible;
        result.objective = rep.objective;
        result.x = xt;
        result.y = yt;
        result.reduced_costs = reduced;
        result.residuals = detail::residuals_of(rep, residual);
        result.iterations = total_k;
        return result;
      }
      best.offer(rep, residual, xt, yt, reduced);
    }
    if (at_cap) {
      result.status = SolveStatus::kIterationLimit;
      result.objective = best.report.objective;
      result.x = std::move(best.x);
      result.y = std::move(best.y);
      result.reduced_costs = std::move(best.reduced);
      result.residuals = detail::residuals_of(best.report, best.fixed_point);
      result.iterations = total_k;
      return result;
    }

    if (inner_k >= 1) {
      const std::optional<RestartReason> reason =
          restart_reason(residual, r_anchor, r_prev, inner_k, total_k, cfg);
      if (reason.has_value()) {
        result.restart_log.push_back(
            {total_k, *reason, residual, r_anchor});
        if (residual <= r_anchor) {
          const double dx_norm = detail::distance(x, anchor_x);
          const double dy_norm = detail::distance(y, anchor_y);
          sp = StepParams(
              eta, smoothed_primal_weight(sp.w, dx_norm, dy_norm, cfg.theta));
        }
        anchor_x = x;
        anchor_y = y;
        anchor_ax = ax;
        inner_k = 0;
        ++result.restarts;
        continue;
      }
    }

    const double alpha = static_cast<double>(inner_k + 1) /
                         static_cast<double>(inner_k + 2);
    halpern_combine(alpha, xt, anchor_x, x);
    halpern_combine(alpha, yt, anchor_y, y);
    halpern_combine(alpha, axt, anchor_ax, ax);
    r_prev = residual;
    ++inner_k;
    ++total_k;
    if (cfg.trace_iterates) {
      result.trajectory_hash = detail::fold_hash(result.trajectory_hash, x);
      result.trajectory_hash = detail::fold_hash(result.trajectory_hash, y);
    }
  }
}

}  // namespace batchlp

#endif  // BATCHLP_SOLVER_HPP_
