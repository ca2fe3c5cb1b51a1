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

#ifndef BATCHLP_BOUNDS_HPP_
#define BATCHLP_BOUNDS_HPP_

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace batchlp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// One component of a hyperrectangle. lower may be -inf, upper may be +inf;
// lower == upper encodes a fixed component (equality when used as a row
// bound, a variable fixing when used as a variable bound).
struct Interval {
  double lower = -kInf;
  double upper = kInf;

  bool valid() const {
    return !std::isnan(lower) && !std::isnan(upper) && lower < kInf &&
           upper > -kInf && lower <= upper;
  }
  bool is_fixed() const { return lower == upper; }
  bool is_free() const { return lower == -kInf && upper == kInf; }
};

// Hyperrectangle bounds for a whole vector, stored as parallel arrays so the
// solver kernels can walk them contiguously.
struct Bounds {
  std::vector<double> lower;
  std::vector<double> upper;

  Bounds() = default;
  explicit Bounds(std::size_t n, Interval fill = Interval{})
      : lower(n, fill.lower), upper(n, fill.upper) {}

  std::size_t size() const { return lower.size(); }
  Interval at(std::size_t i) const { return {lower[i], upper[i]}; }
  void set(std::size_t i, Interval v) {
    lower[i] = v.lower;
    upper[i] = v.upper;
  }
  void push_back(Interval v) {
    lower.push_back(v.lower);
    upper.push_back(v.upper);
  }
};

// Euclidean projection onto [lo, hi]. Infinite bounds are no-ops on that
// side; total in v.
inline double project_box(double v, double lo, double hi) {
  return std::max(std::min(v, hi), lo);
}

// Projection onto the barrier cone of [lo, hi]: the domain of the box's
// support function. Sign-constrained where a bound is infinite, {0} on free
// components, unconstrained when both bounds are finite.
inline double project_barrier_cone(double v, double lo, double hi) {
  const bool lo_inf = lo == -kInf;
  const bool hi_inf = hi == kInf;
  if (lo_inf && hi_inf) return 0.0;
  if (lo_inf) return std::max(v, 0.0);
  if (hi_inf) return std::min(v, 0.0);
  return v;
}

// Projection onto the recession cone of [lo, hi]: {0} for bounded
// components, a half line where exactly one bound is infinite, everything
// for free components.
inline double project_recession_cone(double v, double lo, double hi) {
  const bool lo_inf = lo == -kInf;
  const bool hi_inf = hi == kInf;
  if (lo_inf && hi_inf) return v;
  if (hi_inf) return std::max(v, 0.0);
  if (lo_inf) return std::min(v, 0.0);
  return 0.0;
}

// One term of the box support function hi*max(v,0) + lo*min(v,0) with the
// explicit 0*inf = 0 convention. Never produces NaN: an infinite bound paired
// with mass of the wrong sign yields +inf.
inline double support_term(double v, double lo, double hi) {
  if (v > 0.0) return hi * v;
  if (v < 0.0) return lo * v;
  return 0.0;
}

inline void project_box(std::span<const double> v, const Bounds& b,
                        std::span<double> out) {
  for (std::size_t i = 0; i < v.size(); ++i)
    out[i] = project_box(v[i], b.lower[i], b.upper[i]);
}

inline void project_barrier_cone(std::span<const double> v, const Bounds& b,
                                 std::span<double> out) {
  for (std::size_t i = 0; i < v.size(); ++i)
    out[i] = project_barrier_cone(v[i], b.lower[i], b.upper[i]);
}

inline void project_recession_cone(std::span<const double> v, const Bounds& b,
                                   std::span<double> out) {
  for (std::size_t i = 0; i < v.size(); ++i)
    out[i] = project_recession_cone(v[i], b.lower[i], b.upper[i]);
}

// sup of v'z over the box; +inf when v has positive mass on an unbounded-above
// component or negative mass on an unbounded-below one.
inline double support_function(std::span<const double> v, const Bounds& b) {
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    total += support_term(v[i], b.lower[i], b.upper[i]);
  return total;
}

}  // namespace batchlp

#endif  // BATCHLP_BOUNDS_HPP_
