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
// Versioned JSON run reports. Schema: every report carries
// format_version, the subcommand, problem sizes, phase wall times and a
// config snapshot that round-trips through from_json(to_json(cfg)).

#ifndef BATCHLP_REPORT_HPP_
#define BATCHLP_REPORT_HPP_

#include <string>

#include "batchlp/obbt.hpp"
#include "batchlp/problem.hpp"
#include "batchlp/solver.hpp"
#include "batchlp/strong_branching.hpp"
#include "json.hpp"

namespace batchlp {

inline constexpr const char* kReportFormatVersion = "1";

inline const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kPrimalInfeasible: return "primal_infeasible";
    case SolveStatus::kDualInfeasible: return "dual_infeasible";
    case SolveStatus::kIterationLimit: return "iteration_limit";
  }
  return "unknown";
}

struct PhaseTimes {
  double load_s = 0.0;
  double norm_s = 0.0;
  double solve_s = 0.0;
};

inline nlohmann::json config_to_json(const SolverConfig& cfg) {
  return nlohmann::json{
      {"eps_opt", cfg.eps_opt},
      {"eps_infeas", cfg.eps_infeas},
      {"eps_dual", cfg.eps_dual},
      {"theta", cfg.theta},
      {"beta_sufficient", cfg.beta_sufficient},
      {"beta_necessary", cfg.beta_necessary},
      {"beta_artificial", cfg.beta_artificial},
      {"max_iterations", cfg.max_iterations},
      {"termination_check_period", cfg.termination_check_period},
      {"w_init", cfg.w_init},
      {"robust_bound_contribution", cfg.robust_bound_contribution},
      {"average_over_all_columns", cfg.average_over_all_columns},
  };
}

inline SolverConfig config_from_json(const nlohmann::json& j) {
  SolverConfig cfg;
  cfg.eps_opt = j.at("eps_opt").get<double>();
  cfg.eps_infeas = j.at("eps_infeas").get<double>();
  cfg.eps_dual = j.at("eps_dual").get<double>();
  cfg.theta = j.at("theta").get<double>();
  cfg.beta_sufficient = j.at("beta_sufficient").get<double>();
  cfg.beta_necessary = j.at("beta_necessary").get<double>();
  cfg.beta_artificial = j.at("beta_artificial").get<double>();
  cfg.max_iterations = j.at("max_iterations").get<std::int64_t>();
  cfg.termination_check_period =
      j.at("termination_check_period").get<std::int64_t>();
  cfg.w_init = j.at("w_init").get<double>();
  cfg.robust_bound_contribution = j.at("robust_bound_contribution").get<bool>();
  cfg.average_over_all_columns = j.at("average_over_all_columns").get<bool>();
  return cfg;
}

inline nlohmann::json report_header(const std::string& command,
                                    const LpProblem& p,
                                    const SolverConfig& cfg,
                                    const PhaseTimes& times) {
  return nlohmann::json{
      {"format_version", kReportFormatVersion},
      {"command", command},
      {"m", p.num_rows()},
      {"n", p.num_cols()},
      {"nnz", p.A.nnz()},
      {"times", {{"load_s", times.load_s},
                 {"norm_s", times.norm_s},
                 {"solve_s", times.solve_s}}},
      {"config", config_to_json(cfg)},
  };
}

inline nlohmann::json result_to_json(const SolveResult& r) {
  return nlohmann::json{
      {"status", status_name(r.status)},
      {"objective", r.objective},
      {"iterations", r.iterations},
      {"restarts", r.restarts},
      {"residuals", {{"gap", r.residuals.gap},
                     {"primal", r.residuals.primal},
                     {"dual", r.residuals.dual},
                     {"fixed_point", r.residuals.fixed_point}}},
  };
}

inline nlohmann::json fsb_to_json(const FsbOutcome& outcome) {
  nlohmann::json branches = nlohmann::json::array();
  for (const FsbBranch& br : outcome.branches) {
    branches.push_back({
        {"variable", br.variable},
        {"up", {{"status", status_name(br.up_status)},
                {"objective", br.up_objective},
                {"iterations", br.up_iterations},
                {"flagged_infeasible", br.up_flagged}}},
        {"down", {{"status", status_name(br.down_status)},
                  {"objective", br.down_objective},
                  {"iterations", br.down_iterations},
                  {"flagged_infeasible", br.down_flagged}}},
        {"delta_up", br.delta_up},
        {"delta_down", br.delta_down},
        {"score", br.score},
    });
  }
  return nlohmann::json{
      {"root_objective", outcome.root_objective},
      {"iterations", outcome.iterations},
      {"branches", branches},
      {"ranking", score_branching(outcome)},
  };
}

inline nlohmann::json obbt_to_json(const ObbtOutcome& outcome) {
  nlohmann::json changed = nlohmann::json::array();
  for (const ObbtVariable& v : outcome.variables) {
    if (!v.changed()) continue;
    changed.push_back({
        {"variable", v.variable},
        {"old_lower", v.old_lower},
        {"new_lower", v.new_lower},
        {"old_upper", v.old_upper},
        {"new_upper", v.new_upper},
        {"lower_margin", v.lower_margin},
        {"upper_margin", v.upper_margin},
    });
  }
  return nlohmann::json{
      {"changed", changed},
      {"changed_count", outcome.changed_count},
      {"solved", outcome.solved_count},
      {"limit", outcome.limit_count},
      {"mean_reduction_pct", outcome.mean_reduction_pct},
      {"iterations", outcome.iterations},
  };
}

}  // namespace batchlp

#endif  // BATCHLP_REPORT_HPP_
