#pragma once

// One entry point over both equilibrium solvers, with verification.

#include <optional>
#include <string>

#include "offload/dynamics.hpp"
#include "offload/game.hpp"
#include "offload/inductive.hpp"

namespace offload {

enum class SolverKind { kDynamics, kInductive };

const char* to_string(SolverKind kind);
SolverKind parse_solver_kind(const std::string& text);
InsertionOrder::Kind parse_ordering(const std::string& text);

// Dynamics for the elastic cloud, inductive construction otherwise.
SolverKind default_solver(const GameInstance& game);

struct SolveOptions {
  std::optional<SolverKind> solver;  // default_solver when empty
  InsertionOrder ordering;           // inductive only
  MoverPolicy policy;                // dynamics only
  long step_cap = 0;                 // dynamics only; 0 means default_step_cap
  std::optional<StrategyProfile> initial;  // dynamics only; all-local when empty
  bool check_contracts = false;      // inductive only
};

struct SolveResult {
  SolverKind solver = SolverKind::kDynamics;
  StrategyProfile profile;
  // Accepted improvement steps (dynamics) or total update steps (inductive).
  long iterations = 0;
  std::string terminal;  // path terminal, or "equilibrium" for inductive
  NashVerdict verdict;
  std::optional<InductionReport> induction;
  std::optional<ImprovementTrace> trace;
};

// Throws kWrongModel for the inductive solver on an elastic game.
SolveResult solve(const GameInstance& game, const SolveOptions& options = {});

}  // namespace offload
