#pragma once

// Equilibrium construction for the non-elastic cloud by adding users one at
// a time. After each arrival (or departure) a prescribed sequence of update
// moves restores equilibrium:
//
//   * a user on the newcomer's AP who now prefers local execution leaves it
//     (the most reluctant one), which restores the previous congestion;
//   * otherwise, while some AP hosts a user who wants to stop offloading, the
//     most reluctant such user leaves, and the local user with the highest
//     local cost who wants that AP takes its place; if nobody wants it, users
//     cascade from more loaded APs into the vacated one.
//
// Reluctance is a user's offload cost divided by its local cost.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "offload/game.hpp"

namespace offload {

struct InsertionOrder {
  enum class Kind { kGiven, kRandom, kByRatioAscending };

  Kind kind = Kind::kGiven;
  std::uint64_t seed = 0;

  static InsertionOrder given() { return {}; }
  static InsertionOrder random(std::uint64_t seed) { return {Kind::kRandom, seed}; }
  static InsertionOrder by_ratio() { return {Kind::kByRatioAscending, 0}; }
};

const char* to_string(InsertionOrder::Kind kind);

// Users in the order they enter. kByRatioAscending sorts by
// d_i / (L_i c_i), ties by index.
std::vector<int> insertion_order(const GameInstance& game,
                                 const InsertionOrder& order);

struct UpdateMove {
  enum class Kind { kExit, kJoin, kSwap };

  Kind kind = Kind::kExit;
  int user = 0;
  Strategy from = kLocal;
  Strategy to = kLocal;
  double old_cost = 0.0;
  double new_cost = 0.0;
};

// One exit to local followed by a local user joining the vacated AP.
struct ExitReplacement {
  int exiter = 0;
  double exiter_reluctance = 0.0;  // before leaving
  int replacer = 0;
  double replacer_reluctance = 0.0;  // after joining
};

struct InductiveOptions {
  // Verify the equilibrium precondition on every add/remove and that every
  // update move weakly improves its mover; violations throw
  // kContractViolation. Costs O((A + 1) N) per call.
  bool check_contracts = true;
  // Called after every update move with the profile before and after it.
  std::function<void(const UpdateMove&, const StrategyProfile& before,
                      const StrategyProfile& after)>
      on_move;
};

// Worst-case number of update moves when the t-th user
// enters with A APs. Throws kInvalidArgument for non-positive arguments.
long worst_case_update_bound(long users, long aps);

class InductiveSolver {
 public:
  // Starts with no active users. Throws kWrongModel for an elastic game.
  explicit InductiveSolver(GameInstance game, InductiveOptions options = {});
  // Starts from `profile` over the users flagged in `active`; inactive users
  // must play 0.
  InductiveSolver(GameInstance game, StrategyProfile profile,
                  std::vector<bool> active, InductiveOptions options = {});

  // Newcomer plays its best reply, then the update phase runs. Returns the
  // number of update moves (the newcomer's own entry is not counted).
  int add_player(int user);
  // Departure of an active user followed by the update phase.
  int remove_player(int user);

  const GameInstance& game() const { return game_; }
  // Full-length profile; inactive users hold 0.
  const StrategyProfile& profile() const { return profile_; }
  bool active(int user) const { return active_[user]; }
  int active_count() const;
  std::vector<int> active_users() const;

  // is_nash on the game restricted to active users.
  NashVerdict verify() const;

  const std::vector<ExitReplacement>& exit_replacements() const {
    return exit_replacements_;
  }

 private:
  double cost(int i) const;
  double join_cost(int i, Strategy a) const;
  bool wants_out(int i) const;
  std::optional<int> most_reluctant(Strategy a) const;
  std::vector<Strategy> aps_with_leavers() const;

  int apply(UpdateMove::Kind kind, int user, Strategy to);
  void place(int user, Strategy to);
  int case_two_loop();
  int refill_or_cascade(Strategy vacated);
  void check_equilibrium(const char* when) const;

  GameInstance game_;
  InductiveOptions options_;
  StrategyProfile profile_;
  std::vector<bool> active_;
  std::vector<double> local_;
  std::vector<int> on_ap_;
  int offloaders_ = 0;
  std::vector<ExitReplacement> exit_replacements_;
  std::optional<ExitReplacement> pending_exit_;
};

struct InductionStep {
  int entering_user = 0;
  int update_steps = 0;
  long bound = 0;
  StrategyProfile profile_after;  // full length, not-yet-entered users at 0
};

struct InductionReport {
  std::vector<int> order;
  std::vector<InductionStep> per_step;
  long total_updates = 0;
  int bound_violations = 0;
  StrategyProfile final_profile;
};

InductionReport solve_inductive(const GameInstance& game,
                                const InsertionOrder& order,
                                InductiveOptions options = {});

struct PlayerChange {
  GameInstance game;
  StrategyProfile profile;
  int update_steps = 0;
};

// `profile` must be an equilibrium of `game_so_far`; the newcomer is appended
// as the last user.
PlayerChange add_player(const GameInstance& game_so_far,
                        const StrategyProfile& profile,
                        const MobileUser& newcomer,
                        InductiveOptions options = {});

// `profile` must be an equilibrium of `game`; the result drops `departing`.
PlayerChange remove_player(const GameInstance& game,
                           const StrategyProfile& profile, int departing,
                           InductiveOptions options = {});

}  // namespace offload
