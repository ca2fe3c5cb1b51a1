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
// Free-format MPS reader and writer.
//
// Sections: NAME, ROWS, COLUMNS, RHS, RANGES, BOUNDS, ENDATA. The first N row
// is the objective; further N rows are kept as free rows. RANGES follow the
// standard table: an L row with rhs b and range r becomes [b - |r|, b], a G
// row [b, b + |r|], an E row [b, b + r] for positive r and [b + r, b]
// otherwise. Supported bound keys: LO, UP, FX, FR, MI, PL, BV (BV maps to
// [0, 1] and marks the column integral). UP keeps the default lower bound of
// zero, with no special case for negative values. INTORG/INTEND markers
// collect an integrality set; they do not change the LP itself.

#ifndef BATCHLP_MPS_HPP_
#define BATCHLP_MPS_HPP_

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "batchlp/problem.hpp"

namespace batchlp {

class MpsParseError : public std::runtime_error {
 public:
  MpsParseError(int line, const std::string& what)
      : std::runtime_error("mps:" + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct MpsModel {
  std::string name;
  LpProblem problem;
  std::vector<int> integer_columns;
  std::vector<std::string> row_names;  // excludes the objective row
  std::vector<std::string> column_names;
  std::string objective_name;
  std::vector<std::string> warnings;
};

namespace mps_detail {

inline std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

inline double parse_number(const std::string& token, int line) {
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == nullptr || *end != '\0')
    throw MpsParseError(line, "cannot parse number '" + token + "'");
  return v;
}

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace mps_detail

inline MpsModel parse_mps(std::istream& in) {
  enum class Section { kNone, kRows, kColumns, kRhs, kRanges, kBounds, kDone };
  Section section = Section::kNone;

  MpsModel model;
  struct RowInfo {
    char type = 'N';
    double rhs = 0.0;
    std::optional<double> range;
  };
  std::vector<RowInfo> rows;  // constraint rows (objective excluded)
  std::map<std::string, int> row_index;  // -1 marks the objective row
  std::map<std::string, int> col_index;
  std::vector<Triplet> triplets;
  std::vector<double> objective;
  Bounds var_bounds;
  std::vector<bool> integral;
  bool in_integer_block = false;
  bool seen_objective = false;

  auto ensure_column = [&](const std::string& name, int line,
                           bool must_exist) -> int {
    auto it = col_index.find(name);
    if (it != col_index.end()) return it->second;
    if (must_exist)
      throw MpsParseError(line, "bound on undeclared column '" + name + "'");
    const int id = static_cast<int>(model.column_names.size());
    col_index.emplace(name, id);
    model.column_names.push_back(name);
    objective.push_back(0.0);
    var_bounds.push_back({0.0, kInf});
    integral.push_back(in_integer_block);
    return id;
  };

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '*') continue;

    const bool is_header = !std::isspace(static_cast<unsigned char>(line[0]));
    std::vector<std::string> tok = mps_detail::tokenize(line);
    if (tok.empty()) continue;

    if (is_header) {
      const std::string& key = tok[0];
      if (key == "NAME") {
        model.name = tok.size() > 1 ? tok[1] : "";
      } else if (key == "ROWS") {
        section = Section::kRows;
      } else if (key == "COLUMNS") {
        section = Section::kColumns;
      } else if (key == "RHS") {
        section = Section::kRhs;
      } else if (key == "RANGES") {
        section = Section::kRanges;
      } else if (key == "BOUNDS") {
        section = Section::kBounds;
      } else if (key == "ENDATA") {
        section = Section::kDone;
        break;
      } else {
        throw MpsParseError(line_no, "unknown section '" + key + "'");
      }
      continue;
    }

    switch (section) {
      case Section::kRows: {
        if (tok.size() != 2)
          throw MpsParseError(line_no, "malformed ROWS entry");
        const char type = static_cast<char>(
            std::toupper(static_cast<unsigned char>(tok[0][0])));
        if (tok[0].size() != 1 ||
            (type != 'N' && type != 'L' && type != 'G' && type != 'E'))
          throw MpsParseError(line_no, "unknown row type '" + tok[0] + "'");
        if (row_index.count(tok[1]) != 0)
          throw MpsParseError(line_no, "duplicate row name '" + tok[1] + "'");
        if (type == 'N' && !seen_objective) {
          seen_objective = true;
          model.objective_name = tok[1];
          row_index.emplace(tok[1], -1);
        } else {
          row_index.emplace(tok[1], static_cast<int>(rows.size()));
          rows.push_back({type, 0.0, std::nullopt});
          model.row_names.push_back(tok[1]);
        }
        break;
      }
      case Section::kColumns: {
        if (tok.size() >= 3 && (tok[1] == "'MARKER'" || tok[2] == "'MARKER'")) {
          bool org = false, end = false;
          for (const std::string& t : tok) {
            if (t == "'INTORG'") org = true;
            if (t == "'INTEND'") end = true;
          }
          if (!org && !end)
            throw MpsParseError(line_no, "unrecognized marker line");
          in_integer_block = org;
          break;
        }
        if (tok.size() != 3 && tok.size() != 5)
          throw MpsParseError(line_no, "malformed COLUMNS entry");
        const int col = ensure_column(tok[0], line_no, /*must_exist=*/false);
        for (std::size_t f = 1; f + 1 < tok.size(); f += 2) {
          auto row_it = row_index.find(tok[f]);
          if (row_it == row_index.end())
            throw MpsParseError(line_no, "unknown row '" + tok[f] + "'");
          const double value = mps_detail::parse_number(tok[f + 1], line_no);
          if (row_it->second < 0)
            objective[col] += value;
          else
            triplets.push_back({row_it->second, col, value});
        }
        break;
      }
      case Section::kRhs: {
        if (tok.size() != 3 && tok.size() != 5)
          throw MpsParseError(line_no, "malformed RHS entry");
        for (std::size_t f = 1; f + 1 < tok.size(); f += 2) {
          auto row_it = row_index.find(tok[f]);
          if (row_it == row_index.end())
            throw MpsParseError(line_no, "unknown row '" + tok[f] + "'");
          const double value = mps_detail::parse_number(tok[f + 1], line_no);
          if (row_it->second < 0) {
            model.warnings.push_back("line " + std::to_string(line_no) +
                                     ": rhs on the objective row ignored");
          } else {
            rows[row_it->second].rhs = value;
          }
        }
        break;
      }
      case Section::kRanges: {
        if (tok.size() != 3 && tok.size() != 5)
          throw MpsParseError(line_no, "malformed RANGES entry");
        for (std::size_t f = 1; f + 1 < tok.size(); f += 2) {
          auto row_it = row_index.find(tok[f]);
          if (row_it == row_index.end())
            throw MpsParseError(line_no, "unknown row '" + tok[f] + "'");
          const double value = mps_detail::parse_number(tok[f + 1], line_no);
          if (row_it->second < 0) {
            model.warnings.push_back("line " + std::to_string(line_no) +
                                     ": range on the objective row ignored");
          } else {
            rows[row_it->second].range = value;
          }
        }
        break;
      }
      case Section::kBounds: {
        if (tok.size() != 3 && tok.size() != 4)
          throw MpsParseError(line_no, "malformed BOUNDS entry");
        const std::string key = tok[0];
        const int col = ensure_column(tok[2], line_no, /*must_exist=*/true);
        const bool needs_value = key == "LO" || key == "UP" || key == "FX";
        if (needs_value && tok.size() != 4)
          throw MpsParseError(line_no, key + " bound requires a value");
        const double value =
            needs_value ? mps_detail::parse_number(tok[3], line_no) : 0.0;
        if (key == "LO") {
          var_bounds.lower[col] = value;
        } else if (key == "UP") {
          var_bounds.upper[col] = value;
        } else if (key == "FX") {
          var_bounds.lower[col] = value;
          var_bounds.upper[col] = value;
        } else if (key == "FR") {
          var_bounds.lower[col] = -kInf;
          var_bounds.upper[col] = kInf;
        } else if (key == "MI") {
          var_bounds.lower[col] = -kInf;
        } else if (key == "PL") {
          var_bounds.upper[col] = kInf;
        } else if (key == "BV") {
          var_bounds.lower[col] = 0.0;
          var_bounds.upper[col] = 1.0;
          integral[col] = true;
        } else {
          throw MpsParseError(line_no, "unknown bound key '" + key + "'");
        }
        break;
      }
      case Section::kNone:
        throw MpsParseError(line_no, "data before any section header");
      case Section::kDone:
        break;
    }
  }
  if (!seen_objective)
    throw MpsParseError(line_no, "no objective (N) row declared");

  const int m = static_cast<int>(rows.size());
  const int n = static_cast<int>(model.column_names.size());
  Bounds row_bounds(m);
  for (int r = 0; r < m; ++r) {
    const RowInfo& info = rows[r];
    double lo = -kInf, hi = kInf;
    switch (info.type) {
      case 'L': hi = info.rhs; break;
      case 'G': lo = info.rhs; break;
      case 'E': lo = hi = info.rhs; break;
      case 'N': break;
    }
    if (info.range.has_value() && info.type != 'N') {
      const double r_abs = std::abs(*info.range);
      switch (info.type) {
        case 'L': lo = hi - r_abs; break;
        case 'G': hi = lo + r_abs; break;
        case 'E':
          if (*info.range >= 0.0) hi = lo + *info.range;
          else lo = hi + *info.range;
          break;
      }
    }
    row_bounds.set(r, {lo, hi});
  }

  model.problem.A = SparseMatrix::from_triplets(std::move(triplets), m, n);
  model.problem.objective = std::move(objective);
  model.problem.row_bounds = std::move(row_bounds);
  model.problem.var_bounds = std::move(var_bounds);
  for (int c = 0; c < n; ++c)
    if (integral[c]) model.integer_columns.push_back(c);
  return model;
}

inline MpsModel parse_mps_string(const std::string& text) {
  std::istringstream in(text);
  return parse_mps(in);
}

inline MpsModel read_mps_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return parse_mps(in);
}

inline void write_mps(std::ostream& os, const LpProblem& p,
                      const std::vector<int>& integer_columns = {},
                      const std::string& name = "BATCHLP") {
  using mps_detail::format_number;
  const int m = p.num_rows();
  const int n = p.num_cols();

  std::vector<bool> integral(n, false);
  for (int c : integer_columns)
    if (c >= 0 && c < n) integral[c] = true;

  os << "NAME          " << name << "\n";
  os << "ROWS\n N  OBJ\n";
  // Two-sided rows with distinct bounds go out as L plus a range.
  std::vector<char> row_type(m);
  for (int r = 0; r < m; ++r) {
    const Interval b = p.row_bounds.at(r);
    char t;
    if (b.is_free()) t = 'N';
    else if (b.is_fixed()) t = 'E';
    else if (b.upper != kInf && b.lower != -kInf) t = 'R';  // ranged, emitted as L
    else if (b.upper != kInf) t = 'L';
    else t = 'G';
    row_type[r] = t;
    os << ' ' << (t == 'R' ? 'L' : t) << "  R" << r << "\n";
  }

  os << "COLUMNS\n";
  const CsrView at = p.A.transpose_view();  // column-ordered walk
  int marker = 0;
  bool in_block = false;
  for (int c = 0; c < n; ++c) {
    if (integral[c] != in_block) {
      os << "    MARKER" << marker++ << "  'MARKER'  "
         << (integral[c] ? "'INTORG'" : "'INTEND'") << "\n";
      in_block = integral[c];
    }
    bool wrote_any = false;
    if (p.objective[c] != 0.0) {
      os << "    C" << c << "  OBJ  " << format_number(p.objective[c]) << "\n";
      wrote_any = true;
    }
    for (int q = at.offsets[c]; q < at.offsets[c + 1]; ++q) {
      os << "    C" << c << "  R" << at.cols[q] << "  "
         << format_number(at.values[q]) << "\n";
      wrote_any = true;
    }
    if (!wrote_any) os << "    C" << c << "  OBJ  0\n";
  }
  if (in_block) os << "    MARKER" << marker++ << "  'MARKER'  'INTEND'\n";

  os << "RHS\n";
  for (int r = 0; r < m; ++r) {
    const Interval b = p.row_bounds.at(r);
    double rhs = 0.0;
    switch (row_type[r]) {
      case 'N': continue;
      case 'E': rhs = b.lower; break;
      case 'G': rhs = b.lower; break;
      case 'L': rhs = b.upper; break;
      case 'R': rhs = b.upper; break;
    }
    if (rhs != 0.0)
      os << "    RHS  R" << r << "  " << format_number(rhs) << "\n";
  }

  bool any_range = false;
  for (int r = 0; r < m; ++r) any_range = any_range || row_type[r] == 'R';
  if (any_range) {
    os << "RANGES\n";
    for (int r = 0; r < m; ++r) {
      if (row_type[r] != 'R') continue;
      const Interval b = p.row_bounds.at(r);
      os << "    RNG  R" << r << "  " << format_number(b.upper - b.lower)
         << "\n";
    }
  }

  os << "BOUNDS\n";
  for (int c = 0; c < n; ++c) {
    const Interval b = p.var_bounds.at(c);
    if (b.is_free()) {
      os << " FR BND  C" << c << "\n";
    } else if (b.is_fixed()) {
      os << " FX BND  C" << c << "  " << format_number(b.lower) << "\n";
    } else {
      if (b.lower == -kInf)
        os << " MI BND  C" << c << "\n";
      else if (b.lower != 0.0)
        os << " LO BND  C" << c << "  " << format_number(b.lower) << "\n";
      if (b.upper != kInf)
        os << " UP BND  C" << c << "  " << format_number(b.upper) << "\n";
    }
  }
  os << "ENDATA\n";
}

}  // namespace batchlp

#endif  // BATCHLP_MPS_HPP_
