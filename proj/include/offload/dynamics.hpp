#pragma once

// Best replies, the elastic-cloud threshold and potential, and improvement
// path execution with exact cycle detection.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "offload/game.hpp"

namespace offload {

// Offloading threshold T_i of the elastic model: user i prefers AP a over
// local execution iff n_a(a, d_-i) / B_a < T_i. Throws kWrongModel under the
// non-elastic model.
double threshold(const GameInstance& game, int i);

// A cost-minimizing strategy for user i against profile's other entries.
// Ties prefer the current strategy, then local, then the lowest AP index.
// The elastic model decides in threshold form; the non-elastic model compares
// all A + 1 candidate costs.
Strategy best_reply(const GameInstance& game, int i,
                    const StrategyProfile& profile);

// Generalized ordinal potential of the elastic model. Throws kWrongModel
// under the non-elastic model.
double potential(const GameInstance& game, const StrategyProfile& profile);

// Offloaders' costs in decreasing order.
std::vector<double> sorted_offloader_costs(const GameInstance& game,
                                           const StrategyProfile& profile);

struct ScheduledMove {
  int user = 0;
  Strategy target = kLocal;

  bool operator==(const ScheduledMove&) const = default;
};

struct MoverPolicy {
  enum class Kind {
    kRoundRobinFirstImprovement,  // cyclic scan, first improvable user plays its best reply
    kBestReply,                   // user with the largest relative gain plays its best reply
    kRandomOrder,                 // random improvable user, random improving strategy
    kScheduled,                   // replay a fixed (cyclic) list of moves
  };

  Kind kind = Kind::kRoundRobinFirstImprovement;
  std::uint64_t seed = 0;
  std::vector<ScheduledMove> schedule;

  static MoverPolicy round_robin() { return {}; }
  static MoverPolicy best_reply() { return {Kind::kBestReply, 0, {}}; }
  static MoverPolicy random_order(std::uint64_t seed) {
    return {Kind::kRandomOrder, seed, {}};
  }
  static MoverPolicy scheduled(std::vector<ScheduledMove> moves) {
    return {Kind::kScheduled, 0, std::move(moves)};
  }
};

struct ImprovementStep {
  int user = 0;
  Strategy from = kLocal;
  Strategy to = kLocal;
  double old_cost = 0.0;
  double new_cost = 0.0;
  std::optional<double> potential_before;  // elastic only
  std::optional<double> potential_after;
};

enum class PathTerminal {
  kEquilibrium,
  kCycleDetected,
  kStepCapExceeded,
  kScheduleViolation,  // a scheduled move was not an improvement step
};

const char* to_string(PathTerminal terminal);

struct ImprovementTrace {
  std::vector<ImprovementStep> steps;
  PathTerminal terminal = PathTerminal::kEquilibrium;
  long period = 0;  // set for kCycleDetected
};

struct PathResult {
  StrategyProfile final_profile;
  ImprovementTrace trace;
};

inline constexpr std::size_t kDefaultVisitedCap = std::size_t{1} << 20;

// 50 * N * (A + 1).
long default_step_cap(const GameInstance& game);

// Runs one-user-at-a-time improvement steps from `initial`. Visited profiles
// are remembered (up to `visited_cap`) so a revisit ends the run with
// kCycleDetected. Throws kInvalidArgument if step_cap <= 0.
PathResult run_improvement_path(const GameInstance& game,
                                const StrategyProfile& initial,
                                const MoverPolicy& policy, long step_cap,
                                std::size_t visited_cap = kDefaultVisitedCap);

// Five users (a..e -> 0..4), three APs, non-elastic cloud, with parameters
// that make the nine-step improvement cycle starting at (1,2,1,0,0) valid.
struct CycleFixture {
  GameInstance game;
  StrategyProfile initial;
  std::vector<ScheduledMove> schedule;
  std::vector<StrategyProfile> expected_profiles;  // x(0) .. x(9)
};

CycleFixture build_cycle_instance();

}  // namespace offload
