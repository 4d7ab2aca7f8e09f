#pragma once

// Exhaustive search over all (A + 1)^N profiles: the social optimum, every
// pure equilibrium, and the empirical price of anarchy next to its analytic
// upper bound.

#include <cstdint>
#include <vector>

#include "offload/game.hpp"

namespace offload {

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 24;

// (A + 1)^N, saturating at UINT64_MAX.
std::uint64_t profile_count(int n_users, int n_aps);
std::uint64_t profile_count(const GameInstance& game);

struct OptimalSolution {
  StrategyProfile profile;
  double cost = 0.0;
};

// Minimum total cost; ties go to the lexicographically smallest profile.
// Throws kInstanceTooLarge when (A + 1)^N exceeds `cap`.
OptimalSolution brute_force_optimal(const GameInstance& game,
                                    std::uint64_t cap = kDefaultEnumerationCap);

// Every profile passing is_nash, in lexicographic order.
std::vector<StrategyProfile> enumerate_equilibria(
    const GameInstance& game, std::uint64_t cap = kDefaultEnumerationCap);

// sum_i L_i / sum_i min(L_i, min_a Cbar_{i,a}), where Cbar_{i,a} is user i's
// cost when alone on AP a and alone in the cloud. Valid for both cloud
// models; always >= 1.
double poa_upper_bound(const GameInstance& game);

struct PoaReport {
  double optimal_cost = 0.0;
  StrategyProfile optimal_profile;
  double worst_ne_cost = 0.0;
  StrategyProfile worst_ne_profile;
  double best_ne_cost = 0.0;
  long ne_count = 0;
  double empirical_poa = 0.0;  // worst_ne_cost / optimal_cost
  double poa_upper_bound = 0.0;
};

// One enumeration pass. Throws kInstanceTooLarge like brute_force_optimal.
PoaReport poa_report(const GameInstance& game,
                     std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace offload
