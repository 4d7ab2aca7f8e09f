#include "offload/oracle.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "offload/error.hpp"

namespace offload {

namespace {

// Mixed-radix walk over all profiles in lexicographic order (user 0 is the
// most significant digit). Level k holds the congestion counts and cost sums
// of users 0..k-1, so a step rebuilds only the levels below the digit that
// changed and total() costs O(A).
class ProfileWalker {
 public:
  ProfileWalker(const GameInstance& game, std::uint64_t cap)
      : game_(game), n_(game.num_users()), width_(game.num_aps() + 1) {
    const std::uint64_t count = profile_count(game);
    if (count > cap) {
      throw OffloadError(ErrorCode::kInstanceTooLarge,
                         std::to_string(game.num_aps() + 1) + "^" +
                             std::to_string(game.num_users()) +
                             " profiles exceed the enumeration cap of " +
                             std::to_string(cap));
    }
    decisions_.assign(n_, kLocal);
    local_.resize(n_);
    transmit_.resize(n_);
    compute_.resize(n_);
    for (int i = 0; i < n_; ++i) {
      const MobileUser& u = game.user(i);
      local_[i] = local_cost(u);
      transmit_[i] = u.transmit_weight();
      compute_[i] = u.weight_time() * u.cycles() / game.cloud().capability;
    }
    inv_bandwidth_.assign(width_, 0.0);
    for (Strategy a = 1; a < width_; ++a) inv_bandwidth_[a] = 1.0 / game.ap(a).bandwidth();
    const std::size_t levels = static_cast<std::size_t>(n_) + 1;
    on_.assign(levels * width_, 0);
    weight_.assign(levels * width_, 0.0);
    offloaders_.assign(levels, 0);
    compute_sum_.assign(levels, 0.0);
    local_sum_.assign(levels, 0.0);
    rebuild_from(0);
  }

  bool next() {
    for (int i = n_ - 1; i >= 0; --i) {
      if (decisions_[i] < width_ - 1) {
        ++decisions_[i];
        std::fill(decisions_.begin() + i + 1, decisions_.end(), kLocal);
        rebuild_from(i);
        return true;
      }
    }
    return false;
  }

  double user_cost(int i) const {
    const Strategy s = decisions_[i];
    if (s == kLocal) return local_[i];
    return offload_cost_at(game_, i, s, on(s), offloaders());
  }

  double total() const {
    const std::size_t top = static_cast<std::size_t>(n_) * width_;
    double uplink = 0.0;
    for (Strategy a = 1; a < width_; ++a) {
      uplink += on_[top + a] * weight_[top + a] * inv_bandwidth_[a];
    }
    const double share = game_.elastic() ? 1.0 : static_cast<double>(offloaders());
    return local_sum_[n_] + uplink + compute_sum_[n_] * share;
  }

  bool equilibrium() const {
    const int total = offloaders();
    for (int i = 0; i < n_; ++i) {
      const Strategy s = decisions_[i];
      const double current = user_cost(i);
      if (s != kLocal && improves(local_[i], current)) return false;
      const int joined_total = total + (s == kLocal ? 1 : 0);
      for (Strategy a = 1; a < width_; ++a) {
        if (a == s) continue;
        const double c = offload_cost_at(game_, i, a, on(a) + 1, joined_total);
        if (improves(c, current)) return false;
      }
    }
    return true;
  }

  StrategyProfile profile() const { return StrategyProfile(decisions_); }

 private:
  int on(Strategy a) const { return on_[static_cast<std::size_t>(n_) * width_ + a]; }
  int offloaders() const { return offloaders_[n_]; }

  // Recomputes levels first + 1 .. N from level `first`.
  void rebuild_from(int first) {
    for (int k = first; k < n_; ++k) {
      const std::size_t lo = static_cast<std::size_t>(k) * width_;
      const std::size_t hi = lo + width_;
      std::copy_n(on_.begin() + lo, width_, on_.begin() + hi);
      std::copy_n(weight_.begin() + lo, width_, weight_.begin() + hi);
      offloaders_[k + 1] = offloaders_[k];
      compute_sum_[k + 1] = compute_sum_[k];
      local_sum_[k + 1] = local_sum_[k];
      const Strategy s = decisions_[k];
      if (s == kLocal) {
        local_sum_[k + 1] += local_[k];
      } else {
        ++on_[hi + s];
        weight_[hi + s] += transmit_[k];
        ++offloaders_[k + 1];
        compute_sum_[k + 1] += compute_[k];
      }
    }
  }

  const GameInstance& game_;
  int n_;
  int width_;
  std::vector<Strategy> decisions_;
  std::vector<double> local_;
  std::vector<double> transmit_;
  std::vector<double> compute_;
  std::vector<double> inv_bandwidth_;
  std::vector<int> on_;
  std::vector<double> weight_;
  std::vector<int> offloaders_;
  std::vector<double> compute_sum_;
  std::vector<double> local_sum_;
};

}  // namespace

std::uint64_t profile_count(int n_users, int n_aps) {
  const std::uint64_t base = static_cast<std::uint64_t>(n_aps) + 1;
  std::uint64_t count = 1;
  for (int i = 0; i < n_users; ++i) {
    if (count > std::numeric_limits<std::uint64_t>::max() / base) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    count *= base;
  }
  return count;
}

std::uint64_t profile_count(const GameInstance& game) {
  return profile_count(game.num_users(), game.num_aps());
}

OptimalSolution brute_force_optimal(const GameInstance& game,
                                    std::uint64_t cap) {
  ProfileWalker walk(game, cap);
  OptimalSolution best{walk.profile(), walk.total()};
  while (walk.next()) {
    const double c = walk.total();
    if (c < best.cost) best = OptimalSolution{walk.profile(), c};
  }
  best.cost = total_cost(game, best.profile);
  return best;
}

std::vector<StrategyProfile> enumerate_equilibria(const GameInstance& game,
                                                  std::uint64_t cap) {
  ProfileWalker walk(game, cap);
  std::vector<StrategyProfile> out;
  do {
    if (walk.equilibrium()) out.push_back(walk.profile());
  } while (walk.next());
  return out;
}

double poa_upper_bound(const GameInstance& game) {
  double numerator = 0.0;
  double denominator = 0.0;
  for (int i = 0; i < game.num_users(); ++i) {
    const MobileUser& u = game.user(i);
    const double local = local_cost(u);
    const double compute = u.weight_time() * u.cycles() / game.cloud().capability;
    double lowest = local;
    for (Strategy a = 1; a <= game.num_aps(); ++a) {
      lowest = std::min(
          lowest, u.transmit_weight() / game.ap(a).bandwidth() + compute);
    }
    numerator += local;
    denominator += lowest;
  }
  return numerator / denominator;
}

PoaReport poa_report(const GameInstance& game, std::uint64_t cap) {
  ProfileWalker walk(game, cap);
  PoaReport report;
  report.optimal_profile = walk.profile();
  report.optimal_cost = walk.total();
  do {
    const double c = walk.total();
    if (c < report.optimal_cost) {
      report.optimal_cost = c;
      report.optimal_profile = walk.profile();
    }
    if (!walk.equilibrium()) continue;
    if (report.ne_count == 0 || c > report.worst_ne_cost) {
      report.worst_ne_cost = c;
      report.worst_ne_profile = walk.profile();
    }
    if (report.ne_count == 0 || c < report.best_ne_cost) report.best_ne_cost = c;
    ++report.ne_count;
  } while (walk.next());

  if (report.ne_count == 0) {
    throw OffloadError(ErrorCode::kContractViolation,
                       "no pure equilibrium found by enumeration");
  }
  report.optimal_cost = total_cost(game, report.optimal_profile);
  report.worst_ne_cost = total_cost(game, report.worst_ne_profile);
  report.empirical_poa = report.worst_ne_cost / report.optimal_cost;
  report.poa_upper_bound = poa_upper_bound(game);
  return report;
}

}  // namespace offload
