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
// Seeded generators for four instance families: set covering, combinatorial
// auctions, maximum independent set and capacitated facility location. The
// family shapes match the usual benchmark constructions; a fixed seed gives
// identical instances on every run.

#ifndef BATCHLP_GENERATORS_HPP_
#define BATCHLP_GENERATORS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "batchlp/problem.hpp"

namespace batchlp {

struct GeneratedInstance {
  std::string name;
  LpProblem problem;
  std::vector<int> integer_columns;
};

enum class InstanceFamily {
  kSetCover,
  kCombAuction,
  kMaxIndSet,
  kFacilityLocation,
};

namespace gen_detail {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}

  int uniform_int(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(g_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  double uniform() { return (g_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }

  std::vector<int> sample(int k, int n) {  // k distinct values in [0, n)
    std::set<int> picked;
    while (static_cast<int>(picked.size()) < k) picked.insert(uniform_int(0, n - 1));
    return {picked.begin(), picked.end()};
  }

 private:
  std::mt19937_64 g_;
};

}  // namespace gen_detail

// min c'x, A x >= 1, x in [0,1]^n, all variables integral. Every element is
// coverable and every set covers something.
inline GeneratedInstance generate_set_cover(int rows, int cols, double density,
                                            std::uint64_t seed) {
  if (rows < 1 || cols < 1 || density <= 0.0 || density > 1.0)
    throw std::invalid_argument("set cover: degenerate sizes");
  gen_detail::Rng rng(seed);
  std::vector<Triplet> triplets;
  std::vector<bool> row_hit(rows, false), col_hit(cols, false);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (rng.bernoulli(density)) {
        triplets.push_back({i, j, 1.0});
        row_hit[i] = col_hit[j] = true;
      }
  for (int i = 0; i < rows; ++i)
    if (!row_hit[i]) {
      const int j = rng.uniform_int(0, cols - 1);
      triplets.push_back({i, j, 1.0});
      col_hit[j] = true;
    }
  for (int j = 0; j < cols; ++j)
    if (!col_hit[j]) triplets.push_back({rng.uniform_int(0, rows - 1), j, 1.0});

  GeneratedInstance out;
  out.name = "set_cover_" + std::to_string(rows) + "r_" + std::to_string(cols) +
             "c_s" + std::to_string(seed);
  out.problem.A = SparseMatrix::from_triplets(std::move(triplets), rows, cols);
  out.problem.objective.resize(cols);
  for (int j = 0; j < cols; ++j)
    out.problem.objective[j] = rng.uniform_int(1, 100);
  out.problem.row_bounds = Bounds(rows, {1.0, kInf});
  out.problem.var_bounds = Bounds(cols, {0.0, 1.0});
  for (int j = 0; j < cols; ++j) out.integer_columns.push_back(j);
  return out;
}

// Packing: max sum of accepted bid prices subject to one-winner-per-item,
// written as min of the negated prices. x in [0,1], integral.
inline GeneratedInstance generate_comb_auction(int items, int bids,
                                               std::uint64_t seed) {
  if (items < 1 || bids < 1)
    throw std::invalid_argument("comb auction: degenerate sizes");
  gen_detail::Rng rng(seed);
  std::vector<Triplet> triplets;
  std::vector<double> price(bids);
  std::vector<bool> item_hit(items, false);
  for (int b = 0; b < bids; ++b) {
    const int k = rng.uniform_int(1, std::min(4, items));
    for (const int item : rng.sample(k, items)) {
      triplets.push_back({item, b, 1.0});
      item_hit[item] = true;
    }
    price[b] = k * (0.5 + rng.uniform());
  }
  for (int item = 0; item < items; ++item)
    if (!item_hit[item]) triplets.push_back({item, rng.uniform_int(0, bids - 1), 1.0});

  GeneratedInstance out;
  out.name = "comb_auction_" + std::to_string(items) + "_" +
             std::to_string(bids) + "_s" + std::to_string(seed);
  out.problem.A = SparseMatrix::from_triplets(std::move(triplets), items, bids);
  out.problem.objective.resize(bids);
  for (int b = 0; b < bids; ++b) out.problem.objective[b] = -price[b];
  out.problem.row_bounds = Bounds(items, {-kInf, 1.0});
  out.problem.var_bounds = Bounds(bids, {0.0, 1.0});
  for (int b = 0; b < bids; ++b) out.integer_columns.push_back(b);
  return out;
}

// max sum x over vertices with x_u + x_v <= 1 per edge, as a minimization of
// the negated objective. The graph attaches each new node to min(affinity,
// existing) earlier nodes.
inline GeneratedInstance generate_max_ind_set(int nodes, int affinity,
                                              std::uint64_t seed) {
  if (nodes < 2 || affinity < 1)
    throw std::invalid_argument("max ind set: degenerate sizes");
  gen_detail::Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v < nodes; ++v) {
    const int k = std::min(affinity, v);
    for (const int u : rng.sample(k, v)) edges.emplace_back(u, v);
  }
  std::vector<Triplet> triplets;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    triplets.push_back({static_cast<int>(e), edges[e].first, 1.0});
    triplets.push_back({static_cast<int>(e), edges[e].second, 1.0});
  }

  GeneratedInstance out;
  out.name = "max_ind_set_" + std::to_string(nodes) + "_" +
             std::to_string(affinity) + "_s" + std::to_string(seed);
  out.problem.A = SparseMatrix::from_triplets(
      std::move(triplets), static_cast<int>(edges.size()), nodes);
  out.problem.objective.assign(nodes, -1.0);
  out.problem.row_bounds = Bounds(static_cast<int>(edges.size()), {-kInf, 1.0});
  out.problem.var_bounds = Bounds(nodes, {0.0, 1.0});
  for (int v = 0; v < nodes; ++v) out.integer_columns.push_back(v);
  return out;
}

// Capacitated facility location. Variables: assignments x_{ij} for facility
// i and customer j (continuous), then open flags y_i (integral). Rows: one
// demand row per customer, one linking row per assignment, one capacity row
// per facility, one aggregate capacity row.
inline GeneratedInstance generate_facility_location(int customers,
                                                    int facilities, int ratio,
                                                    std::uint64_t seed) {
  if (customers < 1 || facilities < 1 || ratio < 1)
    throw std::invalid_argument("facility location: degenerate sizes");
  gen_detail::Rng rng(seed);
  const int nx = customers * facilities;
  const int n = nx + facilities;
  auto x_var = [&](int i, int j) { return i * customers + j; };
  auto y_var = [&](int i) { return nx + i; };

  std::vector<double> demand(customers);
  double total_demand = 0.0;
  for (int j = 0; j < customers; ++j) {
    demand[j] = rng.uniform_int(1, 10);
    total_demand += demand[j];
  }
  std::vector<double> capacity(facilities);
  for (int i = 0; i < facilities; ++i)
    capacity[i] = std::ceil(ratio * total_demand / facilities *
                            (0.75 + 0.5 * rng.uniform()));

  std::vector<Triplet> triplets;
  int row = 0;
  for (int j = 0; j < customers; ++j, ++row)
    for (int i = 0; i < facilities; ++i)
      triplets.push_back({row, x_var(i, j), 1.0});
  const int link_base = row;
  for (int i = 0; i < facilities; ++i)
    for (int j = 0; j < customers; ++j, ++row) {
      triplets.push_back({row, x_var(i, j), 1.0});
      triplets.push_back({row, y_var(i), -1.0});
    }
  const int cap_base = row;
  for (int i = 0; i < facilities; ++i, ++row) {
    for (int j = 0; j < customers; ++j)
      triplets.push_back({row, x_var(i, j), demand[j]});
    triplets.push_back({row, y_var(i), -capacity[i]});
  }
  const int total_row = row++;
  for (int i = 0; i < facilities; ++i)
    triplets.push_back({total_row, y_var(i), capacity[i]});

  GeneratedInstance out;
  out.name = "facility_loc_" + std::to_string(customers) + "_" +
             std::to_string(facilities) + "_" + std::to_string(ratio) + "_s" +
             std::to_string(seed);
  out.problem.A = SparseMatrix::from_triplets(std::move(triplets), row, n);
  out.problem.objective.resize(n);
  for (int i = 0; i < facilities; ++i) {
    for (int j = 0; j < customers; ++j)
      out.problem.objective[x_var(i, j)] = rng.uniform_int(1, 50);
    out.problem.objective[y_var(i)] = rng.uniform_int(50, 200);
  }
  out.problem.row_bounds = Bounds(row);
  for (int j = 0; j < customers; ++j)
    out.problem.row_bounds.set(j, {1.0, 1.0});
  for (int r = link_base; r < cap_base + facilities; ++r)
    out.problem.row_bounds.set(r, {-kInf, 0.0});
  out.problem.row_bounds.set(total_row, {total_demand, kInf});
  out.problem.var_bounds = Bounds(n, {0.0, 1.0});
  for (int i = 0; i < facilities; ++i) out.integer_columns.push_back(y_var(i));
  return out;
}

// Family dispatcher used by the command line; `params` carries the family's
// size parameters in the order documented for each generator.
inline GeneratedInstance generate_instance(InstanceFamily family,
                                           std::span<const double> params,
                                           std::uint64_t seed) {
  auto need = [&](std::size_t count, const char* what) {
    if (params.size() != count)
      throw std::invalid_argument(std::string("generator expects parameters ") +
                                  what);
  };
  switch (family) {
    case InstanceFamily::kSetCover:
      need(3, "rows,cols,density");
      return generate_set_cover(static_cast<int>(params[0]),
                                static_cast<int>(params[1]), params[2], seed);
    case InstanceFamily::kCombAuction:
      need(2, "items,bids");
      return generate_comb_auction(static_cast<int>(params[0]),
                                   static_cast<int>(params[1]), seed);
    case InstanceFamily::kMaxIndSet:
      need(2, "nodes,affinity");
      return generate_max_ind_set(static_cast<int>(params[0]),
                                  static_cast<int>(params[1]), seed);
    case InstanceFamily::kFacilityLocation:
      need(3, "customers,facilities,ratio");
      return generate_facility_location(static_cast<int>(params[0]),
                                        static_cast<int>(params[1]),
                                        static_cast<int>(params[2]), seed);
  }
  throw std::invalid_argument("unknown instance family");
}

inline const char* family_name(InstanceFamily family) {
  switch (family) {
    case InstanceFamily::kSetCover: return "set-cover";
    case InstanceFamily::kCombAuction: return "comb-auction";
    case InstanceFamily::kMaxIndSet: return "max-ind-set";
    case InstanceFamily::kFacilityLocation: return "facility-loc";
  }
  return "unknown";
}

inline std::optional<InstanceFamily> family_from_name(const std::string& name) {
  if (name == "set-cover") return InstanceFamily::kSetCover;
  if (name == "comb-auction") return InstanceFamily::kCombAuction;
  if (name == "max-ind-set") return InstanceFamily::kMaxIndSet;
  if (name == "facility-loc") return InstanceFamily::kFacilityLocation;
  return std::nullopt;
}

}  // namespace batchlp

#endif  // BATCHLP_GENERATORS_HPP_
