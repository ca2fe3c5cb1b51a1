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
// Batch width tuning: time a few sparse-dense products per candidate width
// and pick the width with the lowest time per column. Measurements are
// hardware facts and are reported, not asserted; the only hard guarantee is
// that the report is internally consistent. Run with exclusive use of the
// machine if the numbers are to mean anything.

#ifndef BATCHLP_TUNER_HPP_
#define BATCHLP_TUNER_HPP_

#include <chrono>
#include <ostream>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "batchlp/sparse.hpp"

namespace batchlp {

struct TuneEntry {
  int width = 0;
  double total_s = 0.0;       // R products A X plus R products A'Y
  double per_column_s = 0.0;  // total_s / width
};

// Lowest time per column wins; exact ties go to the larger width (fewer
// solver rounds for the same work).
inline int choose_width(std::span<const TuneEntry> entries) {
  if (entries.empty()) throw std::invalid_argument("tuner: no candidates");
  const TuneEntry* best = &entries.front();
  for (const TuneEntry& e : entries) {
    if (e.per_column_s < best->per_column_s ||
        (e.per_column_s == best->per_column_s && e.width > best->width))
      best = &e;
  }
  return best->width;
}

struct TuneReport {
  std::vector<TuneEntry> entries;
  int chosen_width = 0;
  int repetitions = 10;
  bool overhead_clamped = false;

  void validate() const {
    if (chosen_width != choose_width(entries))
      throw std::logic_error("tuner: chosen width inconsistent with entries");
    for (const TuneEntry& e : entries)
      if (e.total_s < 0.0 || e.per_column_s < 0.0)
        throw std::logic_error("tuner: negative measured time");
  }
};

// Times R products A X and R products A'Y on fixed seeded dense blocks after
// two untimed warm-up rounds. Loop overhead measured with an empty body is
// subtracted; a clamp to zero is flagged through `clamped`.
inline std::pair<double, double> measure_spmm(const SparseMatrix& a, int width,
                                              int repetitions = 10,
                                              bool* clamped = nullptr) {
  if (width < 1) throw std::invalid_argument("tuner: width must be >= 1");
  if (repetitions < 3) throw std::invalid_argument("tuner: need >= 3 repetitions");
  using Clock = std::chrono::steady_clock;

  std::mt19937_64 rng(0x5eedu);
  DenseColumnBlock x(a.n_cols(), width), y(a.n_rows(), width);
  for (double& v : x.data()) v = (rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
  for (double& v : y.data()) v = (rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
  DenseColumnBlock ax(a.n_rows(), width), aty(a.n_cols(), width);

  for (int warm = 0; warm < 2; ++warm) {
    spmm(a, x, ax);
    spmm(a, y, aty, /*transpose_a=*/true);
  }

  const auto t0 = Clock::now();
  for (int r = 0; r < repetitions; ++r) spmm(a, x, ax);
  for (int r = 0; r < repetitions; ++r) spmm(a, y, aty, /*transpose_a=*/true);
  const auto t1 = Clock::now();

  volatile int sink = 0;
  const auto o0 = Clock::now();
  for (int r = 0; r < 2 * repetitions; ++r) sink = sink + 1;
  const auto o1 = Clock::now();

  const double measured = std::chrono::duration<double>(t1 - t0).count();
  const double overhead = std::chrono::duration<double>(o1 - o0).count();
  double total = measured - overhead;
  if (total < 0.0) {
    total = 0.0;
    if (clamped != nullptr) *clamped = true;
  }
  return {total, total / width};
}

inline TuneReport tune_batch_width(const SparseMatrix& a,
                                   std::span<const int> candidates,
                                   int repetitions = 10) {
  if (candidates.empty()) throw std::invalid_argument("tuner: no candidates");
  TuneReport report;
  report.repetitions = repetitions;
  for (const int width : candidates) {
    bool clamped = false;
    const auto [total, per_column] =
        measure_spmm(a, width, repetitions, &clamped);
    report.overhead_clamped = report.overhead_clamped || clamped;
    report.entries.push_back({width, total, per_column});
  }
  report.chosen_width = choose_width(report.entries);
  report.validate();
  return report;
}

inline std::vector<int> default_tune_widths() {
  return {32, 64, 128, 256, 512, 1024, 2048};
}

inline void write_tune_csv(std::ostream& os, const TuneReport& report) {
  os << "width,total_s,per_column_s,chosen\n";
  for (const TuneEntry& e : report.entries) {
    os << e.width << ',' << e.total_s << ',' << e.per_column_s << ','
       << (e.width == report.chosen_width ? 1 : 0) << '\n';
  }
}

}  // namespace batchlp

#endif  // BATCHLP_TUNER_HPP_
