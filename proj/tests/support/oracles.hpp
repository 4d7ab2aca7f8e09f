#pragma once

// Reference implementations for tests. Everything here is recomputed from raw
// user and AP parameters through the rate / cloud-share formulation and never
// calls the library's cost, deviation or enumeration code.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "offload/game.hpp"
#include "offload/scenario.hpp"

namespace offload::oracle {

using Decisions = std::vector<int>;

inline Decisions decisions_of(const StrategyProfile& p) {
  return Decisions(p.decisions().begin(), p.decisions().end());
}

inline double local(const GameInstance& g, int i) {
  const UserParams& u = g.user(i).params();
  const double time = u.cycles / u.local_speed;
  const double energy = u.energy_per_cycle * u.cycles;
  return u.weight_time * time + u.weight_energy * energy;
}

// Rate B_a / n_a, cloud share f_c (elastic) or f_c / n (non-elastic).
inline double cost(const GameInstance& g, const Decisions& d, int i) {
  if (d[i] == 0) return local(g, i);
  int sharing = 0;
  int offloading = 0;
  for (int s : d) {
    sharing += s == d[i];
    offloading += s != 0;
  }
  const UserParams& u = g.user(i).params();
  const double rate = g.aps()[d[i] - 1].bandwidth() / sharing;
  const double upload = u.data_bits / rate;
  const double speed =
      g.elastic() ? g.cloud().capability : g.cloud().capability / offloading;
  const double execute = u.cycles / speed;
  return u.weight_time * (upload + execute) + u.weight_energy * u.tx_power * upload;
}

inline double total(const GameInstance& g, const Decisions& d) {
  double sum = 0.0;
  for (int i = 0; i < static_cast<int>(d.size()); ++i) sum += cost(g, d, i);
  return sum;
}

inline bool strictly_better(double candidate, double incumbent) {
  const double scale = incumbent > 1.0 ? incumbent : 1.0;
  return incumbent - candidate > 1e-9 * scale;
}

inline std::vector<int> better_moves(const GameInstance& g, const Decisions& d,
                                     int i) {
  std::vector<int> out;
  const double now = cost(g, d, i);
  for (int s = 0; s <= g.num_aps(); ++s) {
    if (s == d[i]) continue;
    Decisions e = d;
    e[i] = s;
    if (strictly_better(cost(g, e, i), now)) out.push_back(s);
  }
  return out;
}

inline bool is_equilibrium(const GameInstance& g, const Decisions& d) {
  for (int i = 0; i < static_cast<int>(d.size()); ++i) {
    if (!better_moves(g, d, i).empty()) return false;
  }
  return true;
}

// Incumbent if nothing beats it by the tolerance, otherwise the smallest
// strategy index attaining the minimum.
inline int best_reply(const GameInstance& g, const Decisions& d, int i) {
  std::vector<double> costs;
  for (int s = 0; s <= g.num_aps(); ++s) {
    Decisions e = d;
    e[i] = s;
    costs.push_back(cost(g, e, i));
  }
  int argmin = 0;
  for (int s = 1; s <= g.num_aps(); ++s) {
    if (costs[s] < costs[argmin]) argmin = s;
  }
  return strictly_better(costs[argmin], costs[d[i]]) ? argmin : d[i];
}

// Visits every profile in lexicographic order (user 0 most significant).
inline void for_each_profile(int n_users, int n_aps,
                             const std::function<void(const Decisions&)>& visit) {
  Decisions d(n_users, 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == n_users) {
      visit(d);
      return;
    }
    for (int s = 0; s <= n_aps; ++s) {
      d[i] = s;
      rec(i + 1);
    }
  };
  rec(0);
}

// n_a / B_a of every offloader's AP, in decreasing order. An AP-to-AP
// improvement step requires (n_new + 1) / B_new < n_old / B_old whoever moves,
// so this vector drops lexicographically on every such step.
inline std::vector<double> sorted_load_ratios(const GameInstance& g,
                                              const Decisions& d) {
  std::vector<int> on(g.num_aps() + 1, 0);
  for (int s : d) ++on[s];
  std::vector<double> out;
  for (int s : d) {
    if (s != 0) out.push_back(on[s] / g.aps()[s - 1].bandwidth());
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

inline bool lex_smaller(const std::vector<double>& a, const std::vector<double>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct Exhaustive {
  Decisions optimum;
  double optimal_cost = std::numeric_limits<double>::infinity();
  std::vector<Decisions> equilibria;
  double worst_ne = -std::numeric_limits<double>::infinity();
  double best_ne = std::numeric_limits<double>::infinity();
};

inline Exhaustive exhaustive(const GameInstance& g) {
  Exhaustive ex;
  for_each_profile(g.num_users(), g.num_aps(), [&](const Decisions& d) {
    const double c = total(g, d);
    if (c < ex.optimal_cost) {
      ex.optimal_cost = c;
      ex.optimum = d;
    }
    if (is_equilibrium(g, d)) {
      ex.equilibria.push_back(d);
      ex.worst_ne = std::max(ex.worst_ne, c);
      ex.best_ne = std::min(ex.best_ne, c);
    }
  });
  return ex;
}

// Worst-case update moves when the t-th user enters: t + A - 2 for even t,
// t + A - 3 for odd t >= 3, none for the first user.
inline long update_bound(long t, long aps) {
  if (t == 1) return 0;
  return t % 2 == 0 ? t + aps - 2 : t + aps - 3;
}

inline GameInstance random_game(std::uint64_t seed, int n_users, int n_aps,
                                CloudKind cloud) {
  ScenarioConfig c;
  c.n_users = n_users;
  c.n_aps = n_aps;
  c.cloud = cloud;
  c.seed = seed;
  return generate(c);
}

}  // namespace offload::oracle
