#include "offload/dynamics.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <unordered_map>

#include "offload/error.hpp"

namespace offload {

namespace {

void require_elastic(const GameInstance& game, const char* what) {
  if (!game.elastic()) {
    throw OffloadError(ErrorCode::kWrongModel,
                       std::string(what) + " is defined for the elastic cloud only");
  }
}

// n_a(a, d_-i) / B_a: load ratio user i would see on AP a.
double load_ratio(const GameInstance& game, const Congestion& counts,
                  Strategy current, Strategy a) {
  const int n = counts.on(a) + (current == a ? 0 : 1);
  return static_cast<double>(n) / game.ap(a).bandwidth();
}

Strategy elastic_best_reply(const GameInstance& game, int i,
                            const StrategyProfile& profile) {
  const Congestion counts = congestion_counts(game, profile);
  const Strategy current = profile[i];
  const double t = threshold(game, i);
  if (t <= 0.0) return kLocal;

  Strategy best_ap = 1;
  double best_ratio = load_ratio(game, counts, current, 1);
  for (Strategy a = 2; a <= game.num_aps(); ++a) {
    const double r = load_ratio(game, counts, current, a);
    if (r < best_ratio) {
      best_ratio = r;
      best_ap = a;
    }
  }
  const Strategy candidate = t <= best_ratio ? kLocal : best_ap;
  if (candidate == current) return current;

  // Cost differences in threshold form: L_i - C_{i,a} = K_i (T_i - r_a).
  const double k = game.user(i).transmit_weight();
  const double local = local_cost(game, i);
  double incumbent = local;
  double gain = 0.0;
  if (current == kLocal) {
    gain = k * (t - best_ratio);
  } else {
    const double r_current = load_ratio(game, counts, current, current);
    incumbent = local - k * (t - r_current);
    gain = candidate == kLocal ? k * (r_current - t)
                               : k * (r_current - best_ratio);
  }
  return gain > improvement_margin(incumbent) ? candidate : current;
}

Strategy exhaustive_best_reply(const GameInstance& game, int i,
                               const StrategyProfile& profile) {
  const Congestion counts = congestion_counts(game, profile);
  const Strategy current = profile[i];
  Strategy best = kLocal;
  double best_cost = deviation_cost(game, profile, counts, i, kLocal);
  for (Strategy s = 1; s <= game.num_aps(); ++s) {
    const double c = deviation_cost(game, profile, counts, i, s);
    if (c < best_cost) {
      best_cost = c;
      best = s;
    }
  }
  if (best == current) return current;
  const double incumbent = deviation_cost(game, profile, counts, i, current);
  return improves(best_cost, incumbent) ? best : current;
}

}  // namespace

double threshold(const GameInstance& game, int i) {
  require_elastic(game, "threshold");
  const MobileUser& u = game.user(i);
  const double numerator =
      u.weight_energy() * u.energy_per_cycle() +
      u.weight_time() * (1.0 / u.local_speed() - 1.0 / game.cloud().capability);
  const double denominator = u.weight_time() + u.weight_energy() * u.tx_power();
  return numerator / denominator * (u.cycles() / u.data_bits());
}

Strategy best_reply(const GameInstance& game, int i,
                    const StrategyProfile& profile) {
  return game.elastic() ? elastic_best_reply(game, i, profile)
                        : exhaustive_best_reply(game, i, profile);
}

double potential(const GameInstance& game, const StrategyProfile& profile) {
  require_elastic(game, "potential");
  const Congestion counts = congestion_counts(game, profile);
  double phi = 0.0;
  for (Strategy a = 1; a <= game.num_aps(); ++a) {
    const double n = counts.on(a);
    phi += n * (n + 1.0) / (2.0 * game.ap(a).bandwidth());
  }
  for (int i = 0; i < game.num_users(); ++i) {
    if (profile[i] == kLocal) phi += threshold(game, i);
  }
  return phi;
}

std::vector<double> sorted_offloader_costs(const GameInstance& game,
                                           const StrategyProfile& profile) {
  const Congestion counts = congestion_counts(game, profile);
  std::vector<double> costs;
  for (int i = 0; i < game.num_users(); ++i) {
    const Strategy s = profile[i];
    if (s != kLocal) {
      costs.push_back(offload_cost_at(game, i, s, counts.on(s), counts.total));
    }
  }
  std::sort(costs.begin(), costs.end(), std::greater<>());
  return costs;
}

const char* to_string(PathTerminal terminal) {
  switch (terminal) {
    case PathTerminal::kEquilibrium: return "equilibrium";
    case PathTerminal::kCycleDetected: return "cycle-detected";
    case PathTerminal::kStepCapExceeded: return "step-cap-exceeded";
    case PathTerminal::kScheduleViolation: return "schedule-violation";
  }
  return "unknown";
}

long default_step_cap(const GameInstance& game) {
  return 50L * game.num_users() * (game.num_aps() + 1);
}

PathResult run_improvement_path(const GameInstance& game,
                                const StrategyProfile& initial,
                                const MoverPolicy& policy, long step_cap,
                                std::size_t visited_cap) {
  if (step_cap <= 0) {
    throw OffloadError(ErrorCode::kInvalidArgument, "step cap must be positive");
  }
  if (policy.kind == MoverPolicy::Kind::kScheduled && policy.schedule.empty()) {
    throw OffloadError(ErrorCode::kInvalidArgument, "empty move schedule");
  }
  game.validate(initial);

  const int n_users = game.num_users();
  PathResult result{initial, {}};
  StrategyProfile& d = result.final_profile;
  ImprovementTrace& trace = result.trace;

  std::unordered_map<StrategyProfile, long, StrategyProfileHash> visited;
  if (visited_cap > 0) visited.emplace(d, 0);

  std::mt19937_64 rng(policy.seed);
  int next_user = 0;
  std::size_t schedule_pos = 0;

  for (;;) {
    std::optional<Deviation> move;
    switch (policy.kind) {
      case MoverPolicy::Kind::kRoundRobinFirstImprovement:
        for (int k = 0; k < n_users && !move; ++k) {
          const int i = (next_user + k) % n_users;
          const Strategy b = best_reply(game, i, d);
          if (b != d[i]) {
            move = Deviation{i, b};
            next_user = (i + 1) % n_users;
          }
        }
        break;
      case MoverPolicy::Kind::kBestReply: {
        const Congestion counts = congestion_counts(game, d);
        double best_gain = 0.0;
        for (int i = 0; i < n_users; ++i) {
          const Strategy b = best_reply(game, i, d);
          if (b == d[i]) continue;
          const double c0 = deviation_cost(game, d, counts, i, d[i]);
          const double gain = (c0 - deviation_cost(game, d, counts, i, b)) / c0;
          if (!move || gain > best_gain) {
            move = Deviation{i, b};
            best_gain = gain;
          }
        }
        break;
      }
      case MoverPolicy::Kind::kRandomOrder: {
        std::vector<std::pair<int, std::vector<Strategy>>> options;
        for (int i = 0; i < n_users; ++i) {
          auto devs = improving_deviations(game, i, d);
          if (!devs.empty()) options.emplace_back(i, std::move(devs));
        }
        if (!options.empty()) {
          std::uniform_int_distribution<std::size_t> pick_user(0, options.size() - 1);
          const auto& [i, devs] = options[pick_user(rng)];
          std::uniform_int_distribution<std::size_t> pick_dev(0, devs.size() - 1);
          move = Deviation{i, devs[pick_dev(rng)]};
        }
        break;
      }
      case MoverPolicy::Kind::kScheduled: {
        if (is_nash(game, d)) break;
        const ScheduledMove& m =
            policy.schedule[schedule_pos % policy.schedule.size()];
        if (m.user < 0 || m.user >= n_users) {
          throw OffloadError(ErrorCode::kInvalidArgument,
                             "scheduled mover out of range");
        }
        const auto devs = improving_deviations(game, m.user, d);
        if (std::find(devs.begin(), devs.end(), m.target) == devs.end()) {
          trace.terminal = PathTerminal::kScheduleViolation;
          return result;
        }
        move = Deviation{m.user, m.target};
        ++schedule_pos;
        break;
      }
    }

    if (!move) {
      trace.terminal = PathTerminal::kEquilibrium;
      return result;
    }
    if (static_cast<long>(trace.steps.size()) >= step_cap) {
      trace.terminal = PathTerminal::kStepCapExceeded;
      return result;
    }

    ImprovementStep step;
    step.user = move->user;
    step.from = d[move->user];
    step.to = move->strategy;
    step.old_cost = user_cost(game, move->user, d).total;
    if (game.elastic()) step.potential_before = potential(game, d);
    d.set(move->user, move->strategy);
    step.new_cost = user_cost(game, move->user, d).total;
    if (game.elastic()) step.potential_after = potential(game, d);
    trace.steps.push_back(step);

    const long now = static_cast<long>(trace.steps.size());
    if (auto it = visited.find(d); it != visited.end()) {
      trace.terminal = PathTerminal::kCycleDetected;
      trace.period = now - it->second;
      return result;
    }
    if (visited.size() < visited_cap) visited.emplace(d, now);
  }
}

CycleFixture build_cycle_instance() {
  // gamma^E = 0 so L = c / f, K = d and H = c / f_c. Bandwidths satisfy
  // B2 > B1 > 2/3 B2 and B2 > B3 > 1/2 B2; user b needs H < K (2/B2 - 1/B3) / 2,
  // users d and e need H > K / B2, and each local cost sits inside the window
  // its two inequalities leave open.
  auto user = [](double data_bits, double cycles, double local_speed) {
    const double ghz = local_speed / 1e9;
    return MobileUser(UserParams{
        .data_bits = data_bits,
        .cycles = cycles,
        .local_speed = local_speed,
        .energy_per_cycle = 1e-11 * ghz * ghz,
        .tx_power = 0.4,
        .weight_time = 1.0,
        .weight_energy = 0.0,
    });
  };
  std::vector<MobileUser> users = {
      user(1e6, 0.5e9, 0.1e9),    // a: L = 5
      user(2e6, 0.1e9, 0.128e9),  // b: L = 0.78125 in (0.75, 0.8167)
      user(1e6, 0.5e9, 0.1e9),    // c: L = 5
      user(1e6, 0.5e9, 0.45e9),   // d: L = 1.1111 in (1.0833, 1.1667)
      user(1e6, 0.6e9, 0.34e9),   // e: L = 1.7647 in (1.7, 1.8333)
  };
  std::vector<AccessPoint> aps = {AccessPoint(5e6), AccessPoint(6e6),
                                  AccessPoint(4e6)};
  GameInstance game(std::move(users), std::move(aps),
                    CloudModel{CloudKind::kNonElastic, 2e9});

  constexpr int b = 1, c = 2, d = 3, e = 4;  // a = 0 never moves
  std::vector<ScheduledMove> schedule = {
      {c, 2}, {b, 0}, {d, 2}, {e, 2}, {c, 1}, {b, 3}, {e, 0}, {d, 0}, {b, 2},
  };
  std::vector<StrategyProfile> expected = {
      StrategyProfile({1, 2, 1, 0, 0}), StrategyProfile({1, 2, 2, 0, 0}),
      StrategyProfile({1, 0, 2, 0, 0}), StrategyProfile({1, 0, 2, 2, 0}),
      StrategyProfile({1, 0, 2, 2, 2}), StrategyProfile({1, 0, 1, 2, 2}),
      StrategyProfile({1, 3, 1, 2, 2}), StrategyProfile({1, 3, 1, 2, 0}),
      StrategyProfile({1, 3, 1, 0, 0}), StrategyProfile({1, 2, 1, 0, 0}),
  };
  return CycleFixture{std::move(game), expected.front(), std::move(schedule),
                      std::move(expected)};
}

}  // namespace offload
