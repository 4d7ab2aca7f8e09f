#include <doctest.h>

#include <algorithm>
#include <functional>
#include <optional>
#include <random>

#include "offload/dynamics.hpp"
#include "offload/error.hpp"
#include "support/oracles.hpp"

using namespace offload;

namespace {

GameInstance single_user(UserParams u, std::vector<double> bw, CloudKind kind) {
  std::vector<AccessPoint> aps;
  for (double b : bw) aps.emplace_back(b);
  return GameInstance({MobileUser(u)}, std::move(aps), CloudModel{kind, 100e9});
}

StrategyProfile random_profile(std::mt19937_64& rng, int n, int a) {
  std::uniform_int_distribution<int> pick(0, a);
  std::vector<Strategy> d(n);
  for (auto& s : d) s = pick(rng);
  return StrategyProfile(d);
}

}  // namespace

TEST_CASE("threshold") {
  const UserParams u{1e6, 0.5e9, 1e9, 1e-11, 0.4, 1.0, 0.0};
  const auto g = single_user(u, {5e6}, CloudKind::kElastic);
  CHECK(threshold(g, 0) == doctest::Approx((1.0 / 1e9 - 1.0 / 100e9) * 0.5e9 / 1e6));

  const UserParams same_speed{1e6, 0.5e9, 100e9, 0.0, 0.4, 1.0, 0.0};
  const auto h = single_user(same_speed, {5e6}, CloudKind::kElastic);
  CHECK(threshold(h, 0) == doctest::Approx(0.0));
  CHECK(best_reply(h, 0, StrategyProfile({0})) == kLocal);

  const UserParams mixed{1e6, 0.4e9, 0.8e9, 6.4e-12, 0.4, 0.8, 0.2};
  const auto m = single_user(mixed, {5e6}, CloudKind::kElastic);
  const double expected = (0.2 * 6.4e-12 + 0.8 * (1.0 / 0.8e9 - 1.0 / 100e9)) /
                          (0.8 + 0.2 * 0.4) * 0.4e9 / 1e6;
  CHECK(threshold(m, 0) == doctest::Approx(expected).epsilon(1e-12));

  const auto ne = g.with_cloud(CloudModel{CloudKind::kNonElastic, 100e9});
  CHECK_THROWS_AS(threshold(ne, 0), OffloadError);
}

TEST_CASE("best reply basics") {
  const UserParams u{1e6, 0.5e9, 1e9, 0.0, 0.4, 1.0, 0.0};
  const auto g = single_user(u, {5e6}, CloudKind::kElastic);
  REQUIRE(threshold(g, 0) > 1.0 / 5e6);
  CHECK(best_reply(g, 0, StrategyProfile({0})) == 1);
  CHECK(best_reply(g, 0, StrategyProfile({1})) == 1);

  const auto two = single_user(u, {5e6, 5e6}, CloudKind::kElastic);
  CHECK(best_reply(two, 0, StrategyProfile({0})) == 1);
  CHECK(best_reply(two, 0, StrategyProfile({2})) == 2);

  const UserParams slow_upload{50e6, 0.5e9, 1e9, 0.0, 0.4, 1.0, 0.0};
  const auto bad = single_user(slow_upload, {5e6}, CloudKind::kElastic);
  CHECK(best_reply(bad, 0, StrategyProfile({1})) == kLocal);
}

TEST_CASE("threshold best reply equals exhaustive argmin") {
  std::mt19937_64 rng(2024);
  long checked = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const int n = 1 + static_cast<int>(seed % 4);
    const int a = 1 + static_cast<int>((seed / 4) % 3);
    const auto g = oracle::random_game(seed, n, a, CloudKind::kElastic);
    for (int trial = 0; trial < 5; ++trial) {
      const StrategyProfile p = random_profile(rng, n, a);
      const auto d = oracle::decisions_of(p);
      for (int i = 0; i < n; ++i) {
        CHECK(best_reply(g, i, p) == oracle::best_reply(g, d, i));
        ++checked;
      }
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("non-elastic best reply equals exhaustive argmin") {
  std::mt19937_64 rng(99);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto g = oracle::random_game(seed, 4, 3, CloudKind::kNonElastic);
    const StrategyProfile p = random_profile(rng, 4, 3);
    const auto d = oracle::decisions_of(p);
    for (int i = 0; i < 4; ++i) {
      CHECK(best_reply(g, i, p) == oracle::best_reply(g, d, i));
    }
  }
}

TEST_CASE("potential") {
  const UserParams u{1e6, 0.5e9, 1e9, 0.0, 0.4, 1.0, 0.0};
  const auto g = GameInstance({MobileUser(u), MobileUser(u)}, {AccessPoint(1.0)},
                              CloudModel{CloudKind::kElastic, 100e9});
  CHECK(potential(g, StrategyProfile({1, 1})) == doctest::Approx(3.0));

  const auto r = oracle::random_game(5, 6, 3, CloudKind::kElastic);
  double sum = 0.0;
  for (int i = 0; i < 6; ++i) sum += threshold(r, i);
  CHECK(potential(r, StrategyProfile::all_local(6)) == doctest::Approx(sum));

  CHECK_THROWS_AS(potential(r.with_cloud({CloudKind::kNonElastic, 100e9}),
                            StrategyProfile::all_local(6)),
                  OffloadError);
}

TEST_CASE("potential strictly decreases along elastic paths") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int n = 2 + static_cast<int>(seed % 9);
    const auto g = oracle::random_game(seed, n, 3, CloudKind::kElastic);
    for (const MoverPolicy& policy :
         {MoverPolicy::round_robin(), MoverPolicy::best_reply(),
          MoverPolicy::random_order(seed)}) {
      const PathResult r = run_improvement_path(g, StrategyProfile::all_local(n),
                                                policy, default_step_cap(g));
      CHECK(r.trace.terminal == PathTerminal::kEquilibrium);
      CHECK(oracle::is_equilibrium(g, oracle::decisions_of(r.final_profile)));
      for (const auto& step : r.trace.steps) {
        REQUIRE(step.potential_before.has_value());
        CHECK(*step.potential_after < *step.potential_before);
        CHECK(step.new_cost < step.old_cost);
      }
    }
  }
}

TEST_CASE("path from an equilibrium takes no steps") {
  const auto g = oracle::random_game(8, 5, 3, CloudKind::kElastic);
  const PathResult first = run_improvement_path(g, StrategyProfile::all_local(5),
                                                MoverPolicy::round_robin(), 1000);
  const PathResult again = run_improvement_path(g, first.final_profile,
                                                MoverPolicy::round_robin(), 1000);
  CHECK(again.trace.steps.empty());
  CHECK(again.trace.terminal == PathTerminal::kEquilibrium);
  CHECK(again.final_profile == first.final_profile);

  CHECK_THROWS_AS(run_improvement_path(g, first.final_profile,
                                       MoverPolicy::round_robin(), 0),
                  OffloadError);
}

TEST_CASE("sorted offloader costs") {
  const auto g = oracle::random_game(1, 3, 2, CloudKind::kNonElastic);
  CHECK(sorted_offloader_costs(g, StrategyProfile::all_local(3)).empty());

  // Two users alone on their own AP: costs computed independently.
  const StrategyProfile p({1, 0, 2});
  const auto d = oracle::decisions_of(p);
  const auto costs = sorted_offloader_costs(g, p);
  REQUIRE(costs.size() == 2);
  std::vector<double> expected{oracle::cost(g, d, 0), oracle::cost(g, d, 2)};
  std::sort(expected.rbegin(), expected.rend());
  CHECK(costs[0] == doctest::Approx(expected[0]));
  CHECK(costs[1] == doctest::Approx(expected[1]));
  CHECK(costs[0] >= costs[1]);
}

namespace {

// Applies AP-to-AP improvement steps (first improvable user, first improving
// AP) until none is left, calling `check` with the profiles around each step.
long swap_walk(const GameInstance& g, StrategyProfile p,
               const std::function<void(const StrategyProfile&,
                                        const StrategyProfile&)>& check) {
  long swaps = 0;
  for (int guard = 0; guard < 1000; ++guard) {
    std::optional<Deviation> move;
    for (int i = 0; i < g.num_users() && !move; ++i) {
      if (p[i] == kLocal) continue;
      for (Strategy s : improving_deviations(g, i, p)) {
        if (s != kLocal) {
          move = Deviation{i, s};
          break;
        }
      }
    }
    if (!move) break;
    StrategyProfile next = p;
    next.set(move->user, move->strategy);
    check(p, next);
    p = next;
    ++swaps;
  }
  return swaps;
}

}  // namespace

TEST_CASE("AP-to-AP swaps decrease the sorted load ratios") {
  std::mt19937_64 rng(17);
  long swaps = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const int n = 3 + static_cast<int>(seed % 6);
    const auto g = oracle::random_game(seed, n, 3, CloudKind::kNonElastic);
    std::uniform_int_distribution<int> pick(0, 3);
    std::vector<Strategy> start(n);
    for (auto& s : start) s = pick(rng);
    swaps += swap_walk(g, StrategyProfile(start),
                       [&](const StrategyProfile& before, const StrategyProfile& after) {
                         CHECK(offloader_count(after) == offloader_count(before));
                         CHECK(oracle::lex_smaller(
                             oracle::sorted_load_ratios(g, oracle::decisions_of(after)),
                             oracle::sorted_load_ratios(g, oracle::decisions_of(before))));
                       });
  }
  CHECK(swaps > 100);
}

TEST_CASE("with identical users AP-to-AP swaps decrease the sorted cost vector") {
  std::mt19937_64 rng(5);
  long swaps = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const int n = 3 + static_cast<int>(seed % 6);
    const auto r = oracle::random_game(seed, n, 3, CloudKind::kNonElastic);
    const GameInstance g(std::vector<MobileUser>(n, r.user(0)), r.aps(), r.cloud());
    std::uniform_int_distribution<int> pick(1, 3);
    std::vector<Strategy> start(n);
    for (auto& s : start) s = pick(rng);
    swaps += swap_walk(g, StrategyProfile(start),
                       [&](const StrategyProfile& before, const StrategyProfile& after) {
                         CHECK(oracle::lex_smaller(sorted_offloader_costs(g, after),
                                                   sorted_offloader_costs(g, before)));
                       });
  }
  CHECK(swaps > 100);
}

TEST_CASE("with unequal users a swap can raise the sorted cost vector") {
  // User 0 sends 4e6 bits alone on AP 1 (10 MHz). Users 1 and 2 send 0.5e6
  // bits and share AP 2 (5 MHz). User 1 moving to AP 1 is an improvement
  // step (load 2/10e6 < 2/5e6) but doubles user 0's upload time.
  const UserParams heavy{4e6, 0.5e9, 0.5e9, 0.0, 0.4, 1.0, 0.0};
  const UserParams light{0.5e6, 0.5e9, 0.5e9, 0.0, 0.4, 1.0, 0.0};
  const GameInstance g({MobileUser(heavy), MobileUser(light), MobileUser(light)},
                       {AccessPoint(10e6), AccessPoint(5e6)},
                       CloudModel{CloudKind::kNonElastic, 100e9});
  const oracle::Decisions before{1, 2, 2};
  const oracle::Decisions after{1, 1, 2};
  const auto better = oracle::better_moves(g, before, 1);
  CHECK(std::find(better.begin(), better.end(), 1) != better.end());

  const auto cb = sorted_offloader_costs(g, StrategyProfile(before));
  const auto ca = sorted_offloader_costs(g, StrategyProfile(after));
  CHECK(cb[0] == doctest::Approx(0.4 + 0.015));
  CHECK(ca[0] == doctest::Approx(0.8 + 0.015));
  CHECK_FALSE(oracle::lex_smaller(ca, cb));
  CHECK(oracle::lex_smaller(oracle::sorted_load_ratios(g, after),
                            oracle::sorted_load_ratios(g, before)));
}

TEST_CASE("cycle fixture replays the nine-step cycle") {
  const CycleFixture fx = build_cycle_instance();
  REQUIRE(fx.schedule.size() == 9);
  const std::vector<int> movers{2, 1, 3, 4, 2, 1, 4, 3, 1};
  for (std::size_t k = 0; k < 9; ++k) CHECK(fx.schedule[k].user == movers[k]);

  const std::vector<std::vector<int>> rows{
      {1, 2, 1, 0, 0}, {1, 2, 2, 0, 0}, {1, 0, 2, 0, 0}, {1, 0, 2, 2, 0},
      {1, 0, 2, 2, 2}, {1, 0, 1, 2, 2}, {1, 3, 1, 2, 2}, {1, 3, 1, 2, 0},
      {1, 3, 1, 0, 0}, {1, 2, 1, 0, 0}};
  REQUIRE(fx.expected_profiles.size() == rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(oracle::decisions_of(fx.expected_profiles[k]) == rows[k]);
  }
  CHECK(fx.expected_profiles.front() == fx.expected_profiles.back());
  CHECK(fx.initial == StrategyProfile({1, 2, 1, 0, 0}));

  // Each transition is an improving move confirmed by the independent oracle.
  for (std::size_t k = 0; k < 9; ++k) {
    const auto before = oracle::decisions_of(fx.expected_profiles[k]);
    const auto after = oracle::decisions_of(fx.expected_profiles[k + 1]);
    const int mover = fx.schedule[k].user;
    CHECK(after[mover] == fx.schedule[k].target);
    for (int i = 0; i < 5; ++i) {
      if (i != mover) CHECK(after[i] == before[i]);
    }
    const auto better = oracle::better_moves(fx.game, before, mover);
    CHECK(std::find(better.begin(), better.end(), after[mover]) != better.end());
  }

  const PathResult r = run_improvement_path(
      fx.game, fx.initial, MoverPolicy::scheduled(fx.schedule), 100);
  CHECK(r.trace.terminal == PathTerminal::kCycleDetected);
  CHECK(r.trace.period == 9);
  REQUIRE(r.trace.steps.size() == 9);
  StrategyProfile p = fx.initial;
  for (std::size_t k = 0; k < 9; ++k) {
    const auto& s = r.trace.steps[k];
    CHECK(s.user == movers[k]);
    CHECK(s.new_cost < s.old_cost);
    p.set(s.user, s.to);
    CHECK(p == fx.expected_profiles[k + 1]);
  }
  CHECK(p == fx.initial);
}
