#include "offload/inductive.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "offload/error.hpp"

namespace offload {

namespace {

void require_non_elastic(const GameInstance& game) {
  if (game.elastic()) {
    throw OffloadError(ErrorCode::kWrongModel,
                       "inductive solver requires the non-elastic cloud");
  }
}

std::string user_label(int i) { return "user " + std::to_string(i); }

}  // namespace

const char* to_string(InsertionOrder::Kind kind) {
  switch (kind) {
    case InsertionOrder::Kind::kGiven: return "given";
    case InsertionOrder::Kind::kRandom: return "random";
    case InsertionOrder::Kind::kByRatioAscending: return "ratio";
  }
  return "unknown";
}

std::vector<int> insertion_order(const GameInstance& game,
                                 const InsertionOrder& order) {
  std::vector<int> users(game.num_users());
  std::iota(users.begin(), users.end(), 0);
  switch (order.kind) {
    case InsertionOrder::Kind::kGiven:
      break;
    case InsertionOrder::Kind::kRandom: {
      std::mt19937_64 rng(order.seed);
      std::shuffle(users.begin(), users.end(), rng);
      break;
    }
    case InsertionOrder::Kind::kByRatioAscending: {
      std::vector<double> key(game.num_users());
      for (int i = 0; i < game.num_users(); ++i) {
        const MobileUser& u = game.user(i);
        key[i] = u.data_bits() / (local_cost(u) * u.cycles());
      }
      std::stable_sort(users.begin(), users.end(),
                       [&](int x, int y) { return key[x] < key[y]; });
      break;
    }
  }
  return users;
}

long worst_case_update_bound(long users, long aps) {
  if (users <= 0 || aps <= 0) {
    throw OffloadError(ErrorCode::kInvalidArgument,
                       "update bound needs positive user and AP counts");
  }
  if (users == 1) return 0;
  const long half = (users - 1) / 2;
  if (users % 2 == 0) return 2 * half + 1 + (aps - 1);
  return 2 * (half - 1) + 1 + (aps - 1);
}

InductiveSolver::InductiveSolver(GameInstance game, InductiveOptions options)
    : InductiveSolver(game, StrategyProfile::all_local(game.num_users()),
                      std::vector<bool>(game.num_users(), false),
                      std::move(options)) {}

InductiveSolver::InductiveSolver(GameInstance game, StrategyProfile profile,
                                 std::vector<bool> active,
                                 InductiveOptions options)
    : game_(std::move(game)),
      options_(std::move(options)),
      profile_(std::move(profile)),
      active_(std::move(active)) {
  require_non_elastic(game_);
  game_.validate(profile_);
  if (active_.size() != profile_.size()) {
    throw OffloadError(ErrorCode::kInvalidArgument,
                       "active mask length does not match the profile");
  }
  on_ap_.assign(game_.num_aps() + 1, 0);
  local_.resize(game_.num_users());
  for (int i = 0; i < game_.num_users(); ++i) {
    local_[i] = local_cost(game_, i);
    const Strategy s = profile_[i];
    if (!active_[i] && s != kLocal) {
      throw OffloadError(ErrorCode::kInvalidProfile,
                         "inactive " + user_label(i) + " must play 0");
    }
    if (s != kLocal) {
      ++on_ap_[s];
      ++offloaders_;
    }
  }
}

int InductiveSolver::active_count() const {
  return static_cast<int>(std::count(active_.begin(), active_.end(), true));
}

std::vector<int> InductiveSolver::active_users() const {
  std::vector<int> out;
  for (int i = 0; i < game_.num_users(); ++i) {
    if (active_[i]) out.push_back(i);
  }
  return out;
}

NashVerdict InductiveSolver::verify() const {
  const std::vector<int> users = active_users();
  if (users.empty()) return NashVerdict{};
  std::vector<Strategy> decisions;
  decisions.reserve(users.size());
  for (int i : users) decisions.push_back(profile_[i]);
  NashVerdict verdict =
      is_nash(game_.restricted(users), StrategyProfile(std::move(decisions)));
  if (verdict.witness) verdict.witness->user = users[verdict.witness->user];
  return verdict;
}

double InductiveSolver::cost(int i) const {
  const Strategy s = profile_[i];
  if (s == kLocal) return local_[i];
  return offload_cost_at(game_, i, s, on_ap_[s], offloaders_);
}

double InductiveSolver::join_cost(int i, Strategy a) const {
  return offload_cost_at(game_, i, a, on_ap_[a] + 1, offloaders_ + 1);
}

bool InductiveSolver::wants_out(int i) const {
  return profile_[i] != kLocal && improves(local_[i], cost(i));
}

std::optional<int> InductiveSolver::most_reluctant(Strategy a) const {
  std::optional<int> best;
  double best_ratio = 0.0;
  for (int i = 0; i < game_.num_users(); ++i) {
    if (profile_[i] != a) continue;
    const double ratio = cost(i) / local_[i];
    if (!best || ratio > best_ratio) {
      best = i;
      best_ratio = ratio;
    }
  }
  return best;
}

std::vector<Strategy> InductiveSolver::aps_with_leavers() const {
  std::vector<Strategy> out;
  for (Strategy a = 1; a <= game_.num_aps(); ++a) {
    const auto top = most_reluctant(a);
    if (top && wants_out(*top)) out.push_back(a);
  }
  return out;
}

void InductiveSolver::place(int user, Strategy to) {
  const Strategy from = profile_[user];
  if (from != kLocal) {
    --on_ap_[from];
    --offloaders_;
  }
  if (to != kLocal) {
    ++on_ap_[to];
    ++offloaders_;
  }
  profile_.set(user, to);
}

int InductiveSolver::apply(UpdateMove::Kind kind, int user, Strategy to) {
  UpdateMove move{kind, user, profile_[user], to, cost(user), 0.0};
  std::optional<StrategyProfile> before;
  if (options_.on_move) before = profile_;
  place(user, to);
  move.new_cost = cost(user);
  if (options_.check_contracts &&
      move.new_cost > move.old_cost + improvement_margin(move.old_cost)) {
    throw OffloadError(ErrorCode::kContractViolation,
                       "update move of " + user_label(user) +
                           " raised its cost");
  }
  if (options_.on_move) options_.on_move(move, *before, profile_);
  return 1;
}

void InductiveSolver::check_equilibrium(const char* when) const {
  if (!options_.check_contracts) return;
  const NashVerdict verdict = verify();
  if (!verdict.is_nash) {
    throw OffloadError(ErrorCode::kContractViolation,
                       std::string("profile is not an equilibrium ") + when +
                           " (" + user_label(verdict.witness->user) +
                           " deviates to " +
                           std::to_string(verdict.witness->strategy) + ")");
  }
}

int InductiveSolver::add_player(int user) {
  if (user < 0 || user >= game_.num_users() || active_[user]) {
    throw OffloadError(ErrorCode::kInvalidArgument,
                       user_label(user) + " cannot enter");
  }
  check_equilibrium("before an arrival");
  active_[user] = true;

  Strategy choice = kLocal;
  double best = local_[user];
  for (Strategy a = 1; a <= game_.num_aps(); ++a) {
    const double c = join_cost(user, a);
    if (improves(c, local_[user]) && c < best) {
      best = c;
      choice = a;
    }
  }
  if (choice == kLocal) return 0;
  place(user, choice);

  int steps = 0;
  const std::vector<Strategy> leavers = aps_with_leavers();
  if (std::find(leavers.begin(), leavers.end(), choice) != leavers.end()) {
    steps += apply(UpdateMove::Kind::kExit, *most_reluctant(choice), kLocal);
  }
  steps += case_two_loop();
  check_equilibrium("after an arrival");
  return steps;
}

int InductiveSolver::remove_player(int user) {
  if (user < 0 || user >= game_.num_users() || !active_[user]) {
    throw OffloadError(ErrorCode::kInvalidArgument,
                       user_label(user) + " is not present");
  }
  check_equilibrium("before a departure");
  const Strategy vacated = profile_[user];
  place(user, kLocal);
  active_[user] = false;
  if (vacated == kLocal) return 0;

  int steps = refill_or_cascade(vacated);
  steps += case_two_loop();
  check_equilibrium("after a departure");
  return steps;
}

int InductiveSolver::case_two_loop() {
  int steps = 0;
  for (std::vector<Strategy> leavers = aps_with_leavers(); !leavers.empty();
       leavers = aps_with_leavers()) {
    Strategy pick = leavers.front();
    int exiter = *most_reluctant(pick);
    double top = cost(exiter) / local_[exiter];
    for (Strategy a : leavers) {
      const int i = *most_reluctant(a);
      const double r = cost(i) / local_[i];
      if (r > top) {
        pick = a;
        exiter = i;
        top = r;
      }
    }
    pending_exit_ = ExitReplacement{exiter, top, -1, 0.0};
    steps += apply(UpdateMove::Kind::kExit, exiter, kLocal);
    steps += refill_or_cascade(pick);
  }
  return steps;
}

int InductiveSolver::refill_or_cascade(Strategy vacated) {
  std::optional<int> joiner;
  for (int i = 0; i < game_.num_users(); ++i) {
    if (!active_[i] || profile_[i] != kLocal) continue;
    if (!improves(join_cost(i, vacated), local_[i])) continue;
    if (!joiner || local_[i] > local_[*joiner]) joiner = i;
  }
  if (joiner) {
    const int steps = apply(UpdateMove::Kind::kJoin, *joiner, vacated);
    if (pending_exit_) {
      pending_exit_->replacer = *joiner;
      pending_exit_->replacer_reluctance = cost(*joiner) / local_[*joiner];
      exit_replacements_.push_back(*pending_exit_);
    }
    pending_exit_.reset();
    return steps;
  }
  pending_exit_.reset();

  int steps = 0;
  Strategy target = vacated;
  for (;;) {
    // (n_target + 1) / B_target < n_a / B_a, compared without division.
    const double target_bandwidth = game_.ap(target).bandwidth();
    std::optional<int> mover;
    Strategy source = kLocal;
    double top = 0.0;
    for (Strategy a = 1; a <= game_.num_aps(); ++a) {
      if (a == target || on_ap_[a] == 0) continue;
      if ((on_ap_[target] + 1) * game_.ap(a).bandwidth() >=
          on_ap_[a] * target_bandwidth) {
        continue;
      }
      const int i = *most_reluctant(a);
      const double r = cost(i) / local_[i];
      if (!mover || r > top) {
        mover = i;
        source = a;
        top = r;
      }
    }
    if (!mover) return steps;
    steps += apply(UpdateMove::Kind::kSwap, *mover, target);
    target = source;
  }
}

InductionReport solve_inductive(const GameInstance& game,
                                const InsertionOrder& order,
                                InductiveOptions options) {
  InductiveSolver solver(game, std::move(options));
  InductionReport report;
  report.order = insertion_order(game, order);
  report.per_step.reserve(report.order.size());
  long entered = 0;
  for (int user : report.order) {
    ++entered;
    InductionStep step;
    step.entering_user = user;
    step.update_steps = solver.add_player(user);
    step.bound = worst_case_update_bound(entered, game.num_aps());
    step.profile_after = solver.profile();
    report.total_updates += step.update_steps;
    if (step.update_steps > step.bound) ++report.bound_violations;
    report.per_step.push_back(std::move(step));
  }
  report.final_profile = solver.profile();
  return report;
}

PlayerChange add_player(const GameInstance& game_so_far,
                        const StrategyProfile& profile,
                        const MobileUser& newcomer,
                        InductiveOptions options) {
  game_so_far.validate(profile);
  std::vector<MobileUser> users = game_so_far.users();
  users.push_back(newcomer);
  GameInstance game(std::move(users), game_so_far.aps(), game_so_far.cloud());

  std::vector<Strategy> decisions(profile.decisions().begin(),
                                  profile.decisions().end());
  decisions.push_back(kLocal);
  std::vector<bool> active(decisions.size(), true);
  active.back() = false;

  InductiveSolver solver(game, StrategyProfile(std::move(decisions)),
                         std::move(active), std::move(options));
  const int steps = solver.add_player(game.num_users() - 1);
  return PlayerChange{std::move(game), solver.profile(), steps};
}

PlayerChange remove_player(const GameInstance& game,
                           const StrategyProfile& profile, int departing,
                           InductiveOptions options) {
  if (game.num_users() < 2) {
    throw OffloadError(ErrorCode::kInvalidArgument,
                       "cannot remove the only user");
  }
  InductiveSolver solver(game, profile,
                         std::vector<bool>(game.num_users(), true),
                         std::move(options));
  const int steps = solver.remove_player(departing);

  std::vector<Strategy> rest;
  for (int i = 0; i < game.num_users(); ++i) {
    if (i != departing) rest.push_back(solver.profile()[i]);
  }
  return PlayerChange{game.without_user(departing),
                      StrategyProfile(std::move(rest)), steps};
}

}  // namespace offload
