#pragma once

// Domain model of the multi-access computation offloading game: users, access
// points, the cloud model, strategy profiles and every per-user cost.
//
// Strategies are integers: 0 is local execution, 1..A select an access point.
// Users are indexed 0..N-1.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace offload {

using Strategy = int;
inline constexpr Strategy kLocal = 0;

// Relative tolerance for "strictly better": a candidate improves on an
// incumbent cost only if it is lower by more than kRelativeTolerance *
// max(1, incumbent).
inline constexpr double kRelativeTolerance = 1e-9;

inline double improvement_margin(double incumbent) {
  return kRelativeTolerance * (incumbent > 1.0 ? incumbent : 1.0);
}

inline bool improves(double candidate, double incumbent) {
  return candidate < incumbent - improvement_margin(incumbent);
}

struct UserParams {
  double data_bits = 0.0;         // d_i, bits
  double cycles = 0.0;            // c_i, CPU cycles
  double local_speed = 0.0;       // f_i, cycles/second
  double energy_per_cycle = 0.0;  // v_i, joules/cycle
  double tx_power = 0.0;          // p_i, watts
  double weight_time = 1.0;       // gamma^T_i
  double weight_energy = 0.0;     // gamma^E_i

  bool operator==(const UserParams&) const = default;
};

class MobileUser {
 public:
  // Throws OffloadError(kInvalidArgument) unless d, c, f > 0, v, p >= 0 and
  // 0 <= gamma^E < gamma^T <= 1.
  explicit MobileUser(const UserParams& params);

  const UserParams& params() const { return params_; }
  double data_bits() const { return params_.data_bits; }
  double cycles() const { return params_.cycles; }
  double local_speed() const { return params_.local_speed; }
  double energy_per_cycle() const { return params_.energy_per_cycle; }
  double tx_power() const { return params_.tx_power; }
  double weight_time() const { return params_.weight_time; }
  double weight_energy() const { return params_.weight_energy; }

  // (gamma^T + gamma^E p) d: cost per unit of (n_a / B_a) on the uplink.
  double transmit_weight() const {
    return (params_.weight_time + params_.weight_energy * params_.tx_power) *
           params_.data_bits;
  }

  bool operator==(const MobileUser&) const = default;

 private:
  UserParams params_;
};

class AccessPoint {
 public:
  explicit AccessPoint(double bandwidth);

  double bandwidth() const { return bandwidth_; }

  bool operator==(const AccessPoint&) const = default;

 private:
  double bandwidth_;
};

enum class CloudKind { kElastic, kNonElastic };

const char* to_string(CloudKind kind);
CloudKind parse_cloud_kind(const std::string& text);

struct CloudModel {
  CloudKind kind = CloudKind::kElastic;
  double capability = 100e9;  // f_c, cycles/second

  bool operator==(const CloudModel&) const = default;
};

class StrategyProfile {
 public:
  StrategyProfile() = default;
  explicit StrategyProfile(std::vector<Strategy> decisions)
      : decisions_(std::move(decisions)) {}

  static StrategyProfile all_local(std::size_t num_users) {
    return StrategyProfile(std::vector<Strategy>(num_users, kLocal));
  }

  std::size_t size() const { return decisions_.size(); }
  Strategy operator[](std::size_t user) const { return decisions_[user]; }
  void set(std::size_t user, Strategy s) { decisions_[user] = s; }
  std::span<const Strategy> decisions() const { return decisions_; }

  std::string to_string() const;  // "(1,2,1,0,0)"

  auto operator<=>(const StrategyProfile&) const = default;

 private:
  std::vector<Strategy> decisions_;
};

struct StrategyProfileHash {
  std::size_t operator()(const StrategyProfile& profile) const noexcept;
};

class GameInstance {
 public:
  GameInstance(std::vector<MobileUser> users, std::vector<AccessPoint> aps,
               CloudModel cloud);

  int num_users() const { return static_cast<int>(users_.size()); }
  int num_aps() const { return static_cast<int>(aps_.size()); }
  const MobileUser& user(int i) const { return users_[i]; }
  // `a` is a strategy value in 1..A.
  const AccessPoint& ap(Strategy a) const { return aps_[a - 1]; }
  const std::vector<MobileUser>& users() const { return users_; }
  const std::vector<AccessPoint>& aps() const { return aps_; }
  const CloudModel& cloud() const { return cloud_; }
  bool elastic() const { return cloud_.kind == CloudKind::kElastic; }

  GameInstance with_cloud(CloudModel cloud) const;
  // Same game with users listed in `order` (subset or permutation).
  GameInstance restricted(std::span<const int> order) const;
  GameInstance without_user(int i) const;

  // Throws OffloadError(kInvalidProfile) on length or range mismatch.
  void validate(const StrategyProfile& profile) const;

  bool operator==(const GameInstance&) const = default;

 private:
  std::vector<MobileUser> users_;
  std::vector<AccessPoint> aps_;
  CloudModel cloud_;
};

struct Congestion {
  std::vector<int> per_ap;  // n_a, indexed by a - 1
  int total = 0;            // n

  int on(Strategy a) const { return per_ap[a - 1]; }
};

struct CostBreakdown {
  double total = 0.0;
  double time_component = 0.0;
  double energy_component = 0.0;
  Strategy decision = kLocal;
};

struct Deviation {
  int user = -1;
  Strategy strategy = kLocal;

  bool operator==(const Deviation&) const = default;
};

struct NashVerdict {
  bool is_nash = true;
  std::optional<Deviation> witness;

  explicit operator bool() const { return is_nash; }
};

Congestion congestion_counts(const GameInstance& game,
                             const StrategyProfile& profile);
int offloader_count(const StrategyProfile& profile);

double uplink_rate(const GameInstance& game, int i,
                   const StrategyProfile& profile);

CostBreakdown local_breakdown(const MobileUser& user);
double local_cost(const MobileUser& user);
inline double local_cost(const GameInstance& game, int i) {
  return local_cost(game.user(i));
}

// Offload cost of user i on AP a when the AP carries `on_ap` offloaders and
// the cloud serves `total` offloaders, both counts including user i.
CostBreakdown offload_breakdown(const GameInstance& game, int i, Strategy a,
                                int on_ap, int total);
inline double offload_cost_at(const GameInstance& game, int i, Strategy a,
                              int on_ap, int total) {
  return offload_breakdown(game, i, a, on_ap, total).total;
}

// Requires profile[i] == a.
double offload_cost(const GameInstance& game, int i, Strategy a,
                    const StrategyProfile& profile);

CostBreakdown user_cost(const GameInstance& game, int i,
                        const StrategyProfile& profile);
double total_cost(const GameInstance& game, const StrategyProfile& profile);

// C_{i,a}(d) / L_i for an offloading user.
double reluctance(const GameInstance& game, int i,
                  const StrategyProfile& profile);

// Cost of user i after unilaterally switching to `s`, given the congestion of
// `profile` (which must be the counts of that same profile).
double deviation_cost(const GameInstance& game, const StrategyProfile& profile,
                      const Congestion& counts, int i, Strategy s);

std::vector<Strategy> improving_deviations(const GameInstance& game, int i,
                                           const StrategyProfile& profile);

NashVerdict is_nash(const GameInstance& game, const StrategyProfile& profile);

}  // namespace offload
