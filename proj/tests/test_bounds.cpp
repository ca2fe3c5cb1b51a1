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

#include "batchlp/bounds.hpp"
#include "doctest.h"

using namespace batchlp;

TEST_CASE("box projection clamps and respects open sides") {
  CHECK(project_box(2.0, 0.0, 1.0) == 1.0);
  CHECK(project_box(-3.0, -kInf, 5.0) == -3.0);
  CHECK(project_box(0.5, 0.5, 0.5) == 0.5);
}

TEST_CASE("support function on finite and half-infinite boxes") {
  Bounds unit(2, {0.0, 1.0});
  std::vector<double> v{2.0, -3.0};
  CHECK(support_function(v, unit) == 2.0);

  Bounds ray(1, {0.0, kInf});
  std::vector<double> neg{-1.0};
  CHECK(support_function(neg, ray) == 0.0);
  std::vector<double> pos{1.0};
  CHECK(support_function(pos, ray) == kInf);
}

TEST_CASE("support of zero is zero on any bounds") {
  Bounds mixed(3);
  mixed.set(0, {-kInf, kInf});
  mixed.set(1, {0.0, kInf});
  mixed.set(2, {-2.0, 7.0});
  std::vector<double> zero(3, 0.0);
  CHECK(support_function(zero, mixed) == 0.0);
}

TEST_CASE("barrier cone projection cases") {
  CHECK(project_barrier_cone(-2.0, 0.0, kInf) == -2.0);   // already in cone
  CHECK(project_barrier_cone(-2.0, -kInf, 1.0) == 0.0);   // clamp to v >= 0
  CHECK(project_barrier_cone(7.0, -kInf, kInf) == 0.0);   // free: cone is {0}
}

TEST_CASE("recession cone projection cases") {
  CHECK(project_recession_cone(5.0, 0.0, 1.0) == 0.0);
  CHECK(project_recession_cone(-5.0, 0.0, kInf) == 0.0);
  CHECK(project_recession_cone(-5.0, -kInf, kInf) == -5.0);
}

namespace {

Bounds random_bounds(std::mt19937_64& rng, int n) {
  Bounds b(n);
  std::uniform_real_distribution<double> unif(-5.0, 5.0);
  for (int i = 0; i < n; ++i) {
    const int kind = static_cast<int>(rng() % 4);
    double lo = unif(rng), hi = unif(rng);
    if (lo > hi) std::swap(lo, hi);
    switch (kind) {
      case 0: b.set(i, {lo, hi}); break;
      case 1: b.set(i, {lo, kInf}); break;
      case 2: b.set(i, {-kInf, hi}); break;
      default: b.set(i, {-kInf, kInf}); break;
    }
  }
  return b;
}

std::vector<double> random_vector(std::mt19937_64& rng, int n, double scale) {
  std::uniform_real_distribution<double> unif(-scale, scale);
  std::vector<double> v(n);
  for (double& e : v) e = unif(rng);
  return v;
}

}  // namespace

TEST_CASE("box projection is idempotent and 1-Lipschitz") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const Bounds b = random_bounds(rng, n);
    const std::vector<double> u = random_vector(rng, n, 10.0);
    const std::vector<double> v = random_vector(rng, n, 10.0);
    std::vector<double> pu(n), pv(n), ppu(n);
    project_box(u, b, pu);
    project_box(v, b, pv);
    project_box(pu, b, ppu);
    double d_proj = 0.0, d_orig = 0.0, d_idem = 0.0;
    for (int i = 0; i < n; ++i) {
      d_proj += (pu[i] - pv[i]) * (pu[i] - pv[i]);
      d_orig += (u[i] - v[i]) * (u[i] - v[i]);
      d_idem = std::max(d_idem, std::abs(ppu[i] - pu[i]));
    }
    CHECK(std::sqrt(d_proj) <= std::sqrt(d_orig) + 1e-12);
    CHECK(d_idem <= 1e-12);
  }
}

TEST_CASE("barrier projection lands in the cone and is idempotent") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const Bounds b = random_bounds(rng, n);
    const std::vector<double> v = random_vector(rng, n, 10.0);
    std::vector<double> pv(n), ppv(n);
    project_barrier_cone(v, b, pv);
    project_barrier_cone(pv, b, ppv);
    // Membership: the support function of the box is finite at cone points.
    CHECK(std::isfinite(support_function(pv, b)));
    for (int i = 0; i < n; ++i) CHECK(ppv[i] == pv[i]);
  }
}

TEST_CASE("projection residual lies in the normal cone on finite boxes") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 6);
    Bounds b(n);
    for (int i = 0; i < n; ++i) {
      double lo = -5.0 + 10.0 * unif(rng);
      double hi = -5.0 + 10.0 * unif(rng);
      if (lo > hi) std::swap(lo, hi);
      b.set(i, {lo, hi});
    }
    const std::vector<double> v = random_vector(rng, n, 12.0);
    std::vector<double> pv(n);
    project_box(v, b, pv);
    std::vector<double> z(n);
    for (int i = 0; i < n; ++i)
      z[i] = b.lower[i] + (b.upper[i] - b.lower[i]) * unif(rng);
    double inner = 0.0;
    for (int i = 0; i < n; ++i) inner += (v[i] - pv[i]) * (z[i] - pv[i]);
    CHECK(inner <= 1e-10);
  }
}
