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
// Command line front end. Subcommands: solve, fsb, obbt, tune, bench, gen.
// Exit codes: 0 success, 1 usage error, 2 input error, 3 iteration limit
// reached without a certified result.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "batchlp/batchlp.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitIterationLimit = 3;

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

// "-" writes to stdout, anything else to the named file.
void emit(const std::string& destination, const std::string& payload) {
  if (destination == "-") {
    std::cout << payload;
    if (!payload.empty() && payload.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(destination);
  if (!out) throw std::runtime_error("cannot write '" + destination + "'");
  out << payload;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> values;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    values.push_back(std::stod(item));
  }
  return values;
}

std::vector<double> read_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::vector<double> values;
  double v;
  while (in >> v) values.push_back(v);
  return values;
}

std::vector<int> fractional_candidates(const std::vector<double>& x_rel,
                                       const std::vector<int>& integer_columns,
                                       double tol) {
  std::vector<int> fractional;
  for (const int c : integer_columns) {
    const double v = x_rel[c];
    if (std::abs(v - std::round(v)) > tol) fractional.push_back(c);
  }
  return fractional;
}

struct CommonOptions {
  std::string file;
  double eps = 1e-4;
  std::int64_t max_iter = 100000;
  std::string json_out;
};

int run_solve(const CommonOptions& opt) {
  batchlp::PhaseTimes times;
  double t = now_seconds();
  const batchlp::MpsModel model = batchlp::read_mps_file(opt.file);
  times.load_s = now_seconds() - t;

  const batchlp::Diagnostics diags = batchlp::validate(model.problem);
  for (const batchlp::Diagnostic& d : diags.items)
    std::cerr << (d.severity == batchlp::Diagnostic::Severity::kError
                      ? "error: "
                      : "warning: ")
              << d.message << "\n";
  if (!diags.ok()) return kExitInput;

  t = now_seconds();
  if (model.problem.A.nnz() > 0) batchlp::spectral_norm(model.problem.A);
  times.norm_s = now_seconds() - t;

  batchlp::SolverConfig cfg;
  cfg.eps_opt = opt.eps;
  cfg.max_iterations = opt.max_iter;
  t = now_seconds();
  const batchlp::SolveResult result = batchlp::solve(model.problem, cfg);
  times.solve_s = now_seconds() - t;

  if (!opt.json_out.empty()) {
    nlohmann::json report =
        batchlp::report_header("solve", model.problem, cfg, times);
    report["instance"] = model.name;
    report["result"] = batchlp::result_to_json(result);
    emit(opt.json_out, report.dump(2));
  } else {
    std::cout << "status      " << batchlp::status_name(result.status) << "\n"
              << "objective   " << result.objective << "\n"
              << "iterations  " << result.iterations << "\n"
              << "restarts    " << result.restarts << "\n";
  }
  return result.status == batchlp::SolveStatus::kIterationLimit
             ? kExitIterationLimit
             : kExitOk;
}

int run_fsb(const CommonOptions& opt, const std::string& xrel_path,
            bool from_root_oracle) {
  batchlp::PhaseTimes times;
  double t = now_seconds();
  const batchlp::MpsModel model = batchlp::read_mps_file(opt.file);
  times.load_s = now_seconds() - t;

  std::vector<double> x_rel;
  if (from_root_oracle) {
    const batchlp::OracleResult root = batchlp::oracle_solve(model.problem);
    if (root.status != batchlp::OracleResult::Status::kOptimal)
      throw std::runtime_error("root relaxation is not optimal");
    x_rel = root.vertex;
  } else if (!xrel_path.empty()) {
    x_rel = read_vector_file(xrel_path);
    if (static_cast<int>(x_rel.size()) != model.problem.num_cols())
      throw std::runtime_error("relaxation point has wrong dimension");
  } else {
    std::cerr << "fsb: need --xrel FILE or --from-root-oracle\n";
    return kExitUsage;
  }

  batchlp::FsbRequest request;
  request.problem = model.problem;
  request.x_rel = x_rel;
  request.fractional_indices =
      fractional_candidates(x_rel, model.integer_columns, 1e-6);

  batchlp::SolverConfig cfg;
  cfg.eps_opt = opt.eps;
  cfg.max_iterations = opt.max_iter;
  t = now_seconds();
  const batchlp::FsbOutcome outcome = batchlp::run_fsb(request, cfg);
  times.solve_s = now_seconds() - t;

  if (!opt.json_out.empty()) {
    nlohmann::json report =
        batchlp::report_header("fsb", model.problem, cfg, times);
    report["instance"] = model.name;
    report["fsb"] = batchlp::fsb_to_json(outcome);
    emit(opt.json_out, report.dump(2));
  } else {
    std::cout << "root objective " << outcome.root_objective << ", "
              << outcome.branches.size() << " fractional variables, "
              << outcome.iterations << " iterations\n";
    for (const int var : batchlp::score_branching(outcome))
      std::cout << "  x" << var << "\n";
  }
  return kExitOk;
}

int run_obbt(const CommonOptions& opt, double eps_dual,
             std::optional<double> cutoff, bool lenient) {
  batchlp::PhaseTimes times;
  double t = now_seconds();
  const batchlp::MpsModel model = batchlp::read_mps_file(opt.file);
  times.load_s = now_seconds() - t;

  batchlp::ObbtConfig cfg;
  cfg.eps_opt = opt.eps;
  cfg.eps_dual = eps_dual;
  cfg.max_iterations = opt.max_iter;
  cfg.cutoff = cutoff;
  cfg.lenient_iteration_limit = lenient;

  t = now_seconds();
  const batchlp::ObbtOutcome outcome = batchlp::run_obbt(model.problem, cfg);
  times.solve_s = now_seconds() - t;

  if (!opt.json_out.empty()) {
    nlohmann::json report = batchlp::report_header(
        "obbt", model.problem, cfg.solver_config(), times);
    report["instance"] = model.name;
    report["obbt"] = batchlp::obbt_to_json(outcome);
    emit(opt.json_out, report.dump(2));
  } else {
    std::cout << outcome.changed_count << " variables changed, mean reduction "
              << outcome.mean_reduction_pct << "%, solved "
              << outcome.solved_count << "/"
              << (outcome.solved_count + outcome.limit_count) << "\n";
  }
  return kExitOk;
}

int run_tune(const std::string& file, const std::string& widths_text, int reps,
             const std::string& csv_out) {
  const batchlp::MpsModel model = batchlp::read_mps_file(file);
  std::vector<int> widths;
  for (const double w : parse_number_list(widths_text))
    widths.push_back(static_cast<int>(w));
  if (widths.empty()) widths = batchlp::default_tune_widths();

  const batchlp::TuneReport report =
      batchlp::tune_batch_width(model.problem.A, widths, reps);
  std::ostringstream csv;
  batchlp::write_tune_csv(csv, report);
  emit(csv_out.empty() ? "-" : csv_out, csv.str());
  std::cerr << "chosen width " << report.chosen_width << "\n";
  return kExitOk;
}

int run_bench(const std::string& family_name, const std::string& sizes_text,
              std::uint64_t seed, double eps, std::int64_t max_iter,
              const std::string& csv_out) {
  const std::optional<batchlp::InstanceFamily> family =
      batchlp::family_from_name(family_name);
  if (!family.has_value()) {
    std::cerr << "unknown family '" << family_name << "'\n";
    return kExitUsage;
  }
  std::ostringstream csv;
  csv << "family,instance,m,n,nnz,S,runtime_s,iters\n";

  std::stringstream tuples(sizes_text);
  std::string tuple;
  while (std::getline(tuples, tuple, ';')) {
    if (tuple.empty()) continue;
    const std::vector<double> params = parse_number_list(tuple);
    const batchlp::GeneratedInstance inst =
        batchlp::generate_instance(*family, params, seed);

    batchlp::SolverConfig cfg;
    cfg.eps_opt = eps;
    cfg.max_iterations = max_iter;

    const double t0 = now_seconds();
    const batchlp::SolveResult root = batchlp::solve(inst.problem, cfg);
    std::int64_t iters = root.iterations;
    int subproblems = 0;
    if (root.status == batchlp::SolveStatus::kOptimal) {
      batchlp::FsbRequest request;
      request.problem = inst.problem;
      request.x_rel = root.x;
      request.fractional_indices =
          fractional_candidates(root.x, inst.integer_columns, 1e-6);
      subproblems = 2 * static_cast<int>(request.fractional_indices.size());
      const batchlp::FsbOutcome outcome = batchlp::run_fsb(request, cfg);
      iters += outcome.iterations;
    }
    const double runtime = now_seconds() - t0;
    csv << family_name << ',' << inst.name << ',' << inst.problem.num_rows()
        << ',' << inst.problem.num_cols() << ',' << inst.problem.A.nnz() << ','
        << subproblems << ',' << runtime << ',' << iters << '\n';
  }
  emit(csv_out.empty() ? "-" : csv_out, csv.str());
  return kExitOk;
}

int run_gen(const std::string& family_name, const std::string& params_text,
            std::uint64_t seed, const std::string& out_path) {
  const std::optional<batchlp::InstanceFamily> family =
      batchlp::family_from_name(family_name);
  if (!family.has_value()) {
    std::cerr << "unknown family '" << family_name << "'\n";
    return kExitUsage;
  }
  const std::vector<double> params = parse_number_list(params_text);
  const batchlp::GeneratedInstance inst =
      batchlp::generate_instance(*family, params, seed);
  std::ostringstream mps;
  batchlp::write_mps(mps, inst.problem, inst.integer_columns, inst.name);
  emit(out_path.empty() ? "-" : out_path, mps.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Batched first-order LP solving with branching and bound "
               "tightening drivers"};
  app.require_subcommand(1);

  CommonOptions solve_opt;
  CLI::App* solve_cmd = app.add_subcommand("solve", "solve one LP from MPS");
  solve_cmd->add_option("file", solve_opt.file, "MPS file")->required();
  solve_cmd->add_option("--eps", solve_opt.eps, "relative tolerance");
  solve_cmd->add_option("--max-iter", solve_opt.max_iter, "iteration cap");
  solve_cmd->add_option("--json", solve_opt.json_out, "JSON report ('-' = stdout)");

  CommonOptions fsb_opt;
  std::string fsb_xrel;
  bool fsb_oracle = false;
  CLI::App* fsb_cmd =
      app.add_subcommand("fsb", "full strong branching on a relaxation point");
  fsb_cmd->add_option("file", fsb_opt.file, "MPS file")->required();
  fsb_cmd->add_option("--xrel", fsb_xrel, "relaxation point file (whitespace doubles)");
  fsb_cmd->add_flag("--from-root-oracle", fsb_oracle,
                    "tiny instances: relaxation point from the reference oracle");
  fsb_cmd->add_option("--eps", fsb_opt.eps, "relative tolerance");
  fsb_cmd->add_option("--max-iter", fsb_opt.max_iter, "iteration cap");
  fsb_cmd->add_option("--json", fsb_opt.json_out, "JSON report ('-' = stdout)");

  CommonOptions obbt_opt;
  double obbt_eps_dual = 1e-8;
  double obbt_cutoff = 0.0;
  bool obbt_lenient = false;
  CLI::App* obbt_cmd = app.add_subcommand("obbt", "optimization-based bound tightening");
  obbt_cmd->add_option("file", obbt_opt.file, "MPS file")->required();
  obbt_cmd->add_option("--eps", obbt_opt.eps, "relative tolerance");
  obbt_cmd->add_option("--eps-dual", obbt_eps_dual, "dual feasibility tolerance");
  CLI::Option* cutoff_opt =
      obbt_cmd->add_option("--cutoff", obbt_cutoff, "objective cutoff row c'x <= A");
  obbt_cmd->add_flag("--lenient", obbt_lenient,
                     "accept dual-feasible partial iterates at the cap");
  obbt_cmd->add_option("--max-iter", obbt_opt.max_iter, "iteration cap");
  obbt_cmd->add_option("--json", obbt_opt.json_out, "JSON report ('-' = stdout)");

  std::string tune_file, tune_widths, tune_csv;
  int tune_reps = 10;
  CLI::App* tune_cmd = app.add_subcommand("tune", "measure spmm time per batch width");
  tune_cmd->add_option("file", tune_file, "MPS file")->required();
  tune_cmd->add_option("--widths", tune_widths, "comma separated candidate widths");
  tune_cmd->add_option("--reps", tune_reps, "repetitions per width");
  tune_cmd->add_option("--csv", tune_csv, "CSV output ('-' = stdout)");

  std::string bench_family, bench_sizes, bench_csv;
  std::uint64_t bench_seed = 1;
  double bench_eps = 1e-4;
  std::int64_t bench_max_iter = 100000;
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "generate instances and run a branching round");
  bench_cmd->add_option("--family", bench_family, "instance family")->required();
  bench_cmd->add_option("--sizes", bench_sizes,
                        "semicolon separated parameter tuples, e.g. '40,60,0.1;80,120,0.05'")
      ->required();
  bench_cmd->add_option("--seed", bench_seed, "generator seed");
  bench_cmd->add_option("--eps", bench_eps, "relative tolerance");
  bench_cmd->add_option("--max-iter", bench_max_iter, "iteration cap");
  bench_cmd->add_option("--csv", bench_csv, "CSV output ('-' = stdout)");

  std::string gen_family, gen_params, gen_out;
  std::uint64_t gen_seed = 1;
  CLI::App* gen_cmd = app.add_subcommand("gen", "write a generated instance as MPS");
  gen_cmd->add_option("--family", gen_family, "instance family")->required();
  gen_cmd->add_option("--params", gen_params, "comma separated family parameters")
      ->required();
  gen_cmd->add_option("--seed", gen_seed, "generator seed");
  gen_cmd->add_option("--out", gen_out, "output path ('-' = stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (solve_cmd->parsed()) return run_solve(solve_opt);
    if (fsb_cmd->parsed()) return run_fsb(fsb_opt, fsb_xrel, fsb_oracle);
    if (obbt_cmd->parsed())
      return run_obbt(obbt_opt, obbt_eps_dual,
                      cutoff_opt->count() > 0
                          ? std::optional<double>(obbt_cutoff)
                          : std::nullopt,
                      obbt_lenient);
    if (tune_cmd->parsed())
      return run_tune(tune_file, tune_widths, tune_reps, tune_csv);
    if (bench_cmd->parsed())
      return run_bench(bench_family, bench_sizes, bench_seed, bench_eps,
                       bench_max_iter, bench_csv);
    if (gen_cmd->parsed())
      return run_gen(gen_family, gen_params, gen_seed, gen_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitUsage;
}
