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
// Exhaustive ground-truth LP solver for tiny instances. Enumerates every
// basic solution (n-subsets of active constraint hyperplanes), classifies
// feasibility in extended precision, and decides unboundedness by vertex
// enumeration over the recession cone intersected with the unit box. A test
// instrument: correctness over speed, usable up to n + m = 14.

#ifndef BATCHLP_ORACLE_HPP_
#define BATCHLP_ORACLE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "batchlp/bounds.hpp"
#include "batchlp/problem.hpp"

namespace batchlp {

struct OracleResult {
  enum class Status { kOptimal, kInfeasible, kUnbounded };
  Status status = Status::kInfeasible;
  double objective = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> vertex;    // optimal point, original variable space
  std::vector<int> active_rows;  // rows tight at the vertex
  std::vector<int> active_bounds;  // variables at a bound at the vertex
};

namespace oracle_detail {

using Real = long double;

constexpr Real kRealInf = std::numeric_limits<Real>::infinity();
constexpr Real kFeasTol = 1e-9L;

// Dense constraint set: lo <= normal'z <= hi per entry. Row constraints come
// first, then one unit row per variable bound pair.
struct Geometry {
  int dim = 0;
  std::vector<std::vector<Real>> normals;
  std::vector<Real> lo, hi;

  void add(std::vector<Real> normal, Real l, Real h) {
    normals.push_back(std::move(normal));
    lo.push_back(l);
    hi.push_back(h);
  }
};

inline Real dot(const std::vector<Real>& a, const std::vector<Real>& b) {
  Real s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Gaussian elimination with partial pivoting; returns false when the system
// is (numerically) singular.
inline bool solve_square(std::vector<std::vector<Real>> w, std::vector<Real> b,
                         std::vector<Real>& out) {
  const int n = static_cast<int>(b.size());
  Real scale = 1;
  for (const auto& row : w)
    for (Real v : row) scale = std::max(scale, std::abs(v));
  const Real tiny = 1e-11L * scale;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(w[r][col]) > std::abs(w[pivot][col])) pivot = r;
    if (std::abs(w[pivot][col]) <= tiny) return false;
    std::swap(w[pivot], w[col]);
    std::swap(b[pivot], b[col]);
    for (int r = col + 1; r < n; ++r) {
      const Real f = w[r][col] / w[col][col];
      if (f == 0) continue;
      for (int c = col; c < n; ++c) w[r][c] -= f * w[col][c];
      b[r] -= f * b[col];
    }
  }
  out.assign(n, 0);
  for (int r = n - 1; r >= 0; --r) {
    Real s = b[r];
    for (int c = r + 1; c < n; ++c) s -= w[r][c] * out[c];
    out[r] = s / w[r][r];
  }
  return true;
}

inline bool feasible_point(const Geometry& g, const std::vector<Real>& z) {
  for (std::size_t c = 0; c < g.normals.size(); ++c) {
    const Real v = dot(g.normals[c], z);
    const Real tol = kFeasTol * (1 + std::abs(v));
    if (v < g.lo[c] - tol || v > g.hi[c] + tol) return false;
  }
  return true;
}

// All feasible basic solutions of the geometry. Throws when the number of
// candidate bases exceeds the enumeration budget.
inline std::vector<std::vector<Real>> enumerate_vertices(const Geometry& g) {
  struct Hyperplane {
    int constraint;
    Real rhs;
  };
  std::vector<Hyperplane> planes;
  for (std::size_t c = 0; c < g.normals.size(); ++c) {
    if (g.lo[c] != -kRealInf) planes.push_back({static_cast<int>(c), g.lo[c]});
    if (g.hi[c] != kRealInf && g.hi[c] != g.lo[c])
      planes.push_back({static_cast<int>(c), g.hi[c]});
  }
  const int n = g.dim;
  const int h = static_cast<int>(planes.size());
  std::vector<std::vector<Real>> vertices;
  if (h < n) return vertices;

  double bases = 1.0;
  for (int i = 0; i < n; ++i) bases *= static_cast<double>(h - i) / (i + 1);
  if (bases > 5e6) throw std::invalid_argument("oracle: instance too large");

  std::vector<int> pick(n);
  for (int i = 0; i < n; ++i) pick[i] = i;
  std::vector<std::vector<Real>> w(n);
  std::vector<Real> b(n), z;
  for (;;) {
    for (int i = 0; i < n; ++i) {
      w[i] = g.normals[planes[pick[i]].constraint];
      b[i] = planes[pick[i]].rhs;
    }
    if (solve_square(w, b, z) && feasible_point(g, z)) vertices.push_back(z);

    int i = n - 1;
    while (i >= 0 && pick[i] == h - n + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < n; ++j) pick[j] = pick[j - 1] + 1;
  }
  return vertices;
}

inline bool lex_less(const std::vector<Real>& a, const std::vector<Real>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i] - kFeasTol) return true;
    if (a[i] > b[i] + kFeasTol) return false;
  }
  return false;
}

}  // namespace oracle_detail

inline OracleResult oracle_solve(const LpProblem& input) {
  using oracle_detail::Geometry;
  using oracle_detail::Real;
  using oracle_detail::kRealInf;

  const int n0 = input.num_cols();
  const int m = input.num_rows();
  if (n0 + m > 16)
    throw std::invalid_argument("oracle: instance exceeds the n + m <= 16 budget");

  // Split free variables x = p - q so the feasible set contains no lines and
  // every nonempty feasible region has a vertex.
  std::vector<int> split_of(n0, -1);
  int n = n0;
  for (int j = 0; j < n0; ++j)
    if (input.var_bounds.at(j).is_free()) split_of[j] = n++;

  std::vector<std::vector<Real>> columns(n, std::vector<Real>(m, 0));
  {
    const CsrView a = input.A.view();
    for (int r = 0; r < m; ++r)
      for (int q = a.offsets[r]; q < a.offsets[r + 1]; ++q) {
        columns[a.cols[q]][r] = a.values[q];
        if (split_of[a.cols[q]] >= 0)
          columns[split_of[a.cols[q]]][r] = -static_cast<Real>(a.values[q]);
      }
  }
  std::vector<Real> cost(n, 0);
  std::vector<Real> var_lo(n), var_hi(n);
  for (int j = 0; j < n0; ++j) {
    cost[j] = input.objective[j];
    if (split_of[j] >= 0) {
      cost[split_of[j]] = -static_cast<Real>(input.objective[j]);
      var_lo[j] = 0;
      var_hi[j] = kRealInf;
      var_lo[split_of[j]] = 0;
      var_hi[split_of[j]] = kRealInf;
    } else {
      var_lo[j] = input.var_bounds.lower[j];
      var_hi[j] = input.var_bounds.upper[j];
    }
  }

  Geometry geom;
  geom.dim = n;
  for (int r = 0; r < m; ++r) {
    std::vector<Real> normal(n, 0);
    for (int j = 0; j < n; ++j) normal[j] = columns[j][r];
    geom.add(std::move(normal), input.row_bounds.lower[r],
             input.row_bounds.upper[r]);
  }
  for (int j = 0; j < n; ++j) {
    std::vector<Real> normal(n, 0);
    normal[j] = 1;
    geom.add(std::move(normal), var_lo[j], var_hi[j]);
  }

  const std::vector<std::vector<Real>> vertices =
      oracle_detail::enumerate_vertices(geom);

  OracleResult result;
  if (vertices.empty()) {
    result.status = OracleResult::Status::kInfeasible;
    return result;
  }

  // Recession directions: the cone of the feasible set clipped to the unit
  // box is a polytope whose vertices include a direction of unbounded
  // descent whenever one exists.
  {
    Geometry cone;
    cone.dim = n;
    for (int r = 0; r < m; ++r) {
      std::vector<Real> normal(n, 0);
      for (int j = 0; j < n; ++j) normal[j] = columns[j][r];
      const Real lo = input.row_bounds.lower[r] == -kInf ? -kRealInf : 0;
      const Real hi = input.row_bounds.upper[r] == kInf ? kRealInf : 0;
      cone.add(std::move(normal), lo, hi);
    }
    for (int j = 0; j < n; ++j) {
      std::vector<Real> normal(n, 0);
      normal[j] = 1;
      const Real lo = var_lo[j] == -kRealInf ? -1 : 0;
      const Real hi = var_hi[j] == kRealInf ? 1 : 0;
      cone.add(std::move(normal), lo, hi);
    }
    Real cost_scale = 1;
    for (Real c : cost) cost_scale += std::abs(c);
    for (const std::vector<Real>& d : oracle_detail::enumerate_vertices(cone)) {
      if (oracle_detail::dot(cost, d) < -oracle_detail::kFeasTol * cost_scale) {
        result.status = OracleResult::Status::kUnbounded;
        return result;
      }
    }
  }

  const std::vector<Real>* pick = &vertices.front();
  Real best = oracle_detail::dot(cost, *pick);
  for (const std::vector<Real>& v : vertices) {
    const Real obj = oracle_detail::dot(cost, v);
    const Real tol = oracle_detail::kFeasTol * (1 + std::abs(best));
    if (obj < best - tol ||
        (std::abs(obj - best) <= tol && oracle_detail::lex_less(v, *pick))) {
      best = std::min(best, obj);
      pick = &v;
    }
  }

  result.status = OracleResult::Status::kOptimal;
  result.vertex.resize(n0);
  for (int j = 0; j < n0; ++j) {
    Real v = (*pick)[j];
    if (split_of[j] >= 0) v -= (*pick)[split_of[j]];
    result.vertex[j] = static_cast<double>(v);
  }
  result.objective = 0.0;
  for (int j = 0; j < n0; ++j)
    result.objective += input.objective[j] * result.vertex[j];

  // Active set reported in the original space.
  {
    std::vector<double> ax(m, 0.0);
    spmv(input.A, result.vertex, ax);
    for (int r = 0; r < m; ++r) {
      const double tol = 1e-7 * (1 + std::abs(ax[r]));
      if ((input.row_bounds.lower[r] != -kInf &&
           std::abs(ax[r] - input.row_bounds.lower[r]) <= tol) ||
          (input.row_bounds.upper[r] != kInf &&
           std::abs(ax[r] - input.row_bounds.upper[r]) <= tol))
        result.active_rows.push_back(r);
    }
    for (int j = 0; j < n0; ++j) {
      const double v = result.vertex[j];
      const double tol = 1e-7 * (1 + std::abs(v));
      if ((input.var_bounds.lower[j] != -kInf &&
           std::abs(v - input.var_bounds.lower[j]) <= tol) ||
          (input.var_bounds.upper[j] != kInf &&
           std::abs(v - input.var_bounds.upper[j]) <= tol))
        result.active_bounds.push_back(j);
    }
  }
  return result;
}

}  // namespace batchlp

#endif  // BATCHLP_ORACLE_HPP_
