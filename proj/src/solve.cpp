#include "offload/solve.hpp"

#include "offload/error.hpp"

namespace offload {

const char* to_string(SolverKind kind) {
  return kind == SolverKind::kDynamics ? "dynamics" : "inductive";
}

SolverKind parse_solver_kind(const std::string& text) {
  if (text == "dynamics") return SolverKind::kDynamics;
  if (text == "inductive") return SolverKind::kInductive;
  throw OffloadError(ErrorCode::kConfigError, "unknown solver '" + text + "'");
}

InsertionOrder::Kind parse_ordering(const std::string& text) {
  if (text == "given") return InsertionOrder::Kind::kGiven;
  if (text == "random") return InsertionOrder::Kind::kRandom;
  if (text == "ratio") return InsertionOrder::Kind::kByRatioAscending;
  throw OffloadError(ErrorCode::kConfigError, "unknown ordering '" + text + "'");
}

SolverKind default_solver(const GameInstance& game) {
  return game.elastic() ? SolverKind::kDynamics : SolverKind::kInductive;
}

SolveResult solve(const GameInstance& game, const SolveOptions& options) {
  SolveResult result;
  result.solver = options.solver.value_or(default_solver(game));
  if (result.solver == SolverKind::kInductive) {
    InductiveOptions inductive;
    inductive.check_contracts = options.check_contracts;
    InductionReport report = solve_inductive(game, options.ordering, inductive);
    result.profile = report.final_profile;
    result.iterations = report.total_updates;
    result.terminal = to_string(PathTerminal::kEquilibrium);
    result.induction = std::move(report);
  } else {
    const StrategyProfile initial =
        options.initial.value_or(StrategyProfile::all_local(game.num_users()));
    const long cap =
        options.step_cap > 0 ? options.step_cap : default_step_cap(game);
    PathResult path = run_improvement_path(game, initial, options.policy, cap);
    result.profile = std::move(path.final_profile);
    result.iterations = static_cast<long>(path.trace.steps.size());
    result.terminal = to_string(path.trace.terminal);
    result.trace = std::move(path.trace);
  }
  result.verdict = is_nash(game, result.profile);
  return result;
}

}  // namespace offload
