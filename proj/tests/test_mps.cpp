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
#include <fstream>
#include <sstream>
#include <string>

#include "batchlp/generators.hpp"
#include "batchlp/mps.hpp"
#include "doctest.h"

using namespace batchlp;

namespace {

std::string fixture_path(const std::string& name) {
  return std::string(BATCHLP_FIXTURE_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Counts matrix entries in the COLUMNS section without using the parser:
// the independent check that header counts match the loaded matrix.
std::int64_t count_column_entries(const std::string& text,
                                  const std::string& objective_row) {
  std::istringstream in(text);
  std::string line;
  bool in_columns = false;
  std::int64_t nnz = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '*') continue;
    if (!std::isspace(static_cast<unsigned char>(line[0]))) {
      in_columns = line.rfind("COLUMNS", 0) == 0;
      continue;
    }
    if (!in_columns) continue;
    std::istringstream fields(line);
    std::string col, row, value;
    fields >> col;
    if (col.find("MARKER") != std::string::npos) continue;
    while (fields >> row >> value)
      if (row != objective_row) ++nnz;
  }
  return nnz;
}

}  // namespace

TEST_CASE("a minimal L row maps to an upper-bounded interval") {
  const MpsModel model = parse_mps_string(
      "NAME T\nROWS\n N obj\n L r0\nCOLUMNS\n x obj 1 r0 1\nRHS\n rhs r0 "
      "1\nENDATA\n");
  REQUIRE(model.problem.num_rows() == 1);
  CHECK(model.problem.row_bounds.lower[0] == -kInf);
  CHECK(model.problem.row_bounds.upper[0] == 1.0);
  CHECK(model.objective_name == "obj");
}

TEST_CASE("the tiny fixture parses to the expected LP") {
  const MpsModel model = read_mps_file(fixture_path("tiny.mps"));
  CHECK(model.name == "TINY");
  CHECK(model.problem.num_rows() == 1);
  CHECK(model.problem.num_cols() == 2);
  CHECK(model.problem.objective[0] == -1.0);
  CHECK(model.problem.row_bounds.upper[0] == 1.0);
  CHECK(model.problem.var_bounds.upper[0] == 1.0);
  CHECK(model.problem.var_bounds.lower[0] == 0.0);

  // Loaded nonzero count matches an independent scan of the file text.
  const std::int64_t counted =
      count_column_entries(slurp(fixture_path("tiny.mps")), "COST");
  CHECK(model.problem.A.nnz() == counted);
}

TEST_CASE("ranges fixture follows the standard semantics") {
  const MpsModel model = read_mps_file(fixture_path("ranges.mps"));
  REQUIRE(model.problem.num_rows() == 3);
  // E row rhs 2 with range 3: [2, 5].
  CHECK(model.problem.row_bounds.lower[0] == 2.0);
  CHECK(model.problem.row_bounds.upper[0] == 5.0);
  // L row rhs 4 with range 2: [2, 4].
  CHECK(model.problem.row_bounds.lower[1] == 2.0);
  CHECK(model.problem.row_bounds.upper[1] == 4.0);
  // G row rhs 1 with range 3: [1, 4].
  CHECK(model.problem.row_bounds.lower[2] == 1.0);
  CHECK(model.problem.row_bounds.upper[2] == 4.0);

  const std::int64_t counted =
      count_column_entries(slurp(fixture_path("ranges.mps")), "COST");
  CHECK(model.problem.A.nnz() == counted);
}

TEST_CASE("bounds fixture covers every key") {
  const MpsModel model = read_mps_file(fixture_path("bounds.mps"));
  REQUIRE(model.problem.num_cols() == 6);
  CHECK(model.problem.var_bounds.at(0).is_free());                // FR
  CHECK(model.problem.var_bounds.lower[1] == 0.0);                // default
  CHECK(model.problem.var_bounds.upper[1] == kInf);
  CHECK(model.problem.var_bounds.lower[2] == 0.0);                // BV
  CHECK(model.problem.var_bounds.upper[2] == 1.0);
  CHECK(model.problem.var_bounds.at(3).is_fixed());               // FX
  CHECK(model.problem.var_bounds.lower[3] == 2.5);
  CHECK(model.problem.var_bounds.lower[4] == -kInf);              // MI + UP
  CHECK(model.problem.var_bounds.upper[4] == 3.0);
  CHECK(model.problem.var_bounds.lower[5] == -1.0);               // LO + UP
  CHECK(model.problem.var_bounds.upper[5] == 7.0);
  // INTORG block plus the BV column.
  CHECK(model.integer_columns == std::vector<int>{1, 2});
}

TEST_CASE("a negative range on an E row extends downward") {
  const MpsModel model = parse_mps_string(
      "NAME T\nROWS\n N obj\n E r0\nCOLUMNS\n x obj 1 r0 1\nRHS\n rhs r0 "
      "2\nRANGES\n rng r0 -3\nENDATA\n");
  CHECK(model.problem.row_bounds.lower[0] == -1.0);
  CHECK(model.problem.row_bounds.upper[0] == 2.0);
}

TEST_CASE("parse errors carry line numbers") {
  CHECK_THROWS_WITH_AS(parse_mps_string("GARBAGE\n"),
                       doctest::Contains("unknown section"), MpsParseError);
  CHECK_THROWS_WITH_AS(
      parse_mps_string("ROWS\n N obj\n N obj\nENDATA\n"),
      doctest::Contains("duplicate row"), MpsParseError);
  CHECK_THROWS_WITH_AS(
      parse_mps_string("ROWS\n N obj\nBOUNDS\n UP BND ghost 1\nENDATA\n"),
      doctest::Contains("undeclared column"), MpsParseError);
  CHECK_THROWS_WITH_AS(
      parse_mps_string(
          "ROWS\n N obj\n L r\nCOLUMNS\n x r zzz\nENDATA\n"),
      doctest::Contains("cannot parse number"), MpsParseError);
  try {
    parse_mps_string("ROWS\n N obj\n N obj\nENDATA\n");
    FAIL("expected a parse error");
  } catch (const MpsParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("rhs entries on the objective row warn and are ignored") {
  const MpsModel model = parse_mps_string(
      "NAME T\nROWS\n N obj\n L r0\nCOLUMNS\n x obj 1 r0 1\nRHS\n rhs obj 5 "
      "r0 1\nENDATA\n");
  CHECK_FALSE(model.warnings.empty());
  CHECK(model.problem.row_bounds.upper[0] == 1.0);
}

TEST_CASE("generated instances round-trip through MPS exactly") {
  const GeneratedInstance instances[] = {
      generate_set_cover(12, 15, 0.2, 3),
      generate_comb_auction(8, 12, 4),
      generate_max_ind_set(8, 2, 5),
      generate_facility_location(3, 2, 2, 6),
  };
  for (const GeneratedInstance& inst : instances) {
    std::ostringstream mps;
    write_mps(mps, inst.problem, inst.integer_columns, inst.name);
    const MpsModel model = parse_mps_string(mps.str());

    REQUIRE(model.problem.num_rows() == inst.problem.num_rows());
    REQUIRE(model.problem.num_cols() == inst.problem.num_cols());
    REQUIRE(model.problem.A.nnz() == inst.problem.A.nnz());
    CHECK(model.integer_columns == inst.integer_columns);

    const CsrView a = inst.problem.A.view(), b = model.problem.A.view();
    for (std::int64_t q = 0; q < inst.problem.A.nnz(); ++q) {
      CHECK(a.cols[q] == b.cols[q]);
      CHECK(std::abs(a.values[q] - b.values[q]) <=
            1e-12 * std::max(1.0, std::abs(a.values[q])));
    }
    for (int j = 0; j < inst.problem.num_cols(); ++j) {
      CHECK(model.problem.objective[j] == doctest::Approx(
                inst.problem.objective[j]).epsilon(1e-12));
      CHECK(model.problem.var_bounds.lower[j] == inst.problem.var_bounds.lower[j]);
      CHECK(model.problem.var_bounds.upper[j] == inst.problem.var_bounds.upper[j]);
    }
    for (int r = 0; r < inst.problem.num_rows(); ++r) {
      const Interval got = model.problem.row_bounds.at(r);
      const Interval want = inst.problem.row_bounds.at(r);
      if (want.lower == -kInf) CHECK(got.lower == -kInf);
      else CHECK(got.lower == doctest::Approx(want.lower).epsilon(1e-12));
      if (want.upper == kInf) CHECK(got.upper == kInf);
      else CHECK(got.upper == doctest::Approx(want.upper).epsilon(1e-12));
    }
  }
}

TEST_CASE("two-sided rows survive a write/parse cycle via ranges") {
  LpProblem p;
  p.A = SparseMatrix::from_triplets({{0, 0, 1.25}}, 1, 1);
  p.objective = {1.0};
  p.row_bounds = Bounds(1, {-2.5, 7.75});
  p.var_bounds = Bounds(1, {0.0, kInf});
  std::ostringstream mps;
  write_mps(mps, p);
  const MpsModel model = parse_mps_string(mps.str());
  CHECK(model.problem.row_bounds.lower[0] ==
        doctest::Approx(-2.5).epsilon(1e-12));
  CHECK(model.problem.row_bounds.upper[0] ==
        doctest::Approx(7.75).epsilon(1e-12));
}
