#include "offload/game.hpp"

#include <cmath>
#include <sstream>

#include "offload/error.hpp"

namespace offload {

namespace {

bool positive(double x) { return std::isfinite(x) && x > 0.0; }
bool non_negative(double x) { return std::isfinite(x) && x >= 0.0; }

void require(bool ok, const std::string& what) {
  if (!ok) throw OffloadError(ErrorCode::kInvalidArgument, what);
}

}  // namespace

MobileUser::MobileUser(const UserParams& p) : params_(p) {
  require(positive(p.data_bits), "user data size must be positive");
  require(positive(p.cycles), "user cycle count must be positive");
  require(positive(p.local_speed), "user local speed must be positive");
  require(non_negative(p.energy_per_cycle),
          "user energy per cycle must be non-negative");
  require(non_negative(p.tx_power), "user transmit power must be non-negative");
  require(std::isfinite(p.weight_time) && std::isfinite(p.weight_energy) &&
              p.weight_energy >= 0.0 && p.weight_energy < p.weight_time &&
              p.weight_time <= 1.0,
          "user weights must satisfy 0 <= weight_energy < weight_time <= 1");
}

AccessPoint::AccessPoint(double bandwidth) : bandwidth_(bandwidth) {
  require(positive(bandwidth), "access point bandwidth must be positive");
}

const char* to_string(CloudKind kind) {
  return kind == CloudKind::kElastic ? "elastic" : "nonelastic";
}

CloudKind parse_cloud_kind(const std::string& text) {
  if (text == "elastic") return CloudKind::kElastic;
  if (text == "nonelastic" || text == "non-elastic") {
    return CloudKind::kNonElastic;
  }
  throw OffloadError(ErrorCode::kConfigError,
                     "unknown cloud model '" + text + "'");
}

std::string StrategyProfile::to_string() const {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < decisions_.size(); ++i) {
    if (i) out << ',';
    out << decisions_[i];
  }
  out << ')';
  return out.str();
}

std::size_t StrategyProfileHash::operator()(
    const StrategyProfile& profile) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Strategy s : profile.decisions()) {
    h ^= static_cast<std::uint64_t>(s) + 1;
    h *= 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(h);
}

GameInstance::GameInstance(std::vector<MobileUser> users,
                           std::vector<AccessPoint> aps, CloudModel cloud)
    : users_(std::move(users)), aps_(std::move(aps)), cloud_(cloud) {
  require(!users_.empty(), "game needs at least one user");
  require(!aps_.empty(), "game needs at least one access point");
  require(positive(cloud_.capability), "cloud capability must be positive");
}

GameInstance GameInstance::with_cloud(CloudModel cloud) const {
  return GameInstance(users_, aps_, cloud);
}

GameInstance GameInstance::restricted(std::span<const int> order) const {
  std::vector<MobileUser> picked;
  picked.reserve(order.size());
  for (int i : order) {
    require(i >= 0 && i < num_users(), "user index out of range");
    picked.push_back(users_[i]);
  }
  return GameInstance(std::move(picked), aps_, cloud_);
}

GameInstance GameInstance::without_user(int i) const {
  require(i >= 0 && i < num_users(), "user index out of range");
  std::vector<int> rest;
  for (int j = 0; j < num_users(); ++j) {
    if (j != i) rest.push_back(j);
  }
  return restricted(rest);
}

void GameInstance::validate(const StrategyProfile& profile) const {
  if (profile.size() != users_.size()) {
    throw OffloadError(ErrorCode::kInvalidProfile,
                       "profile length " + std::to_string(profile.size()) +
                           " does not match " + std::to_string(users_.size()) +
                           " users");
  }
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (profile[i] < 0 || profile[i] > num_aps()) {
      throw OffloadError(ErrorCode::kInvalidProfile,
                         "strategy " + std::to_string(profile[i]) +
                             " of user " + std::to_string(i) +
                             " is out of range");
    }
  }
}

Congestion congestion_counts(const GameInstance& game,
                             const StrategyProfile& profile) {
  game.validate(profile);
  Congestion counts;
  counts.per_ap.assign(game.num_aps(), 0);
  for (Strategy s : profile.decisions()) {
    if (s != kLocal) {
      ++counts.per_ap[s - 1];
      ++counts.total;
    }
  }
  return counts;
}

int offloader_count(const StrategyProfile& profile) {
  int n = 0;
  for (Strategy s : profile.decisions()) n += (s != kLocal);
  return n;
}

double uplink_rate(const GameInstance& game, int i,
                   const StrategyProfile& profile) {
  const Congestion counts = congestion_counts(game, profile);
  const Strategy a = profile[i];
  if (a == kLocal) {
    throw OffloadError(ErrorCode::kNotAnOffloader,
                       "user " + std::to_string(i) + " computes locally");
  }
  return game.ap(a).bandwidth() / counts.on(a);
}

CostBreakdown local_breakdown(const MobileUser& user) {
  CostBreakdown out;
  out.time_component = user.weight_time() * user.cycles() / user.local_speed();
  out.energy_component =
      user.weight_energy() * user.energy_per_cycle() * user.cycles();
  out.total = out.time_component + out.energy_component;
  out.decision = kLocal;
  return out;
}

double local_cost(const MobileUser& user) { return local_breakdown(user).total; }

CostBreakdown offload_breakdown(const GameInstance& game, int i, Strategy a,
                                int on_ap, int total) {
  const MobileUser& u = game.user(i);
  const double transmit_time =
      u.data_bits() * static_cast<double>(on_ap) / game.ap(a).bandwidth();
  const double share =
      game.elastic() ? 1.0 : static_cast<double>(total);
  const double compute_time = u.cycles() * share / game.cloud().capability;

  CostBreakdown out;
  out.time_component = u.weight_time() * (transmit_time + compute_time);
  out.energy_component = u.weight_energy() * u.tx_power() * transmit_time;
  out.total = out.time_component + out.energy_component;
  out.decision = a;
  return out;
}

double offload_cost(const GameInstance& game, int i, Strategy a,
                    const StrategyProfile& profile) {
  const Congestion counts = congestion_counts(game, profile);
  if (a < 1 || a > game.num_aps() || profile[i] != a) {
    throw OffloadError(ErrorCode::kInconsistentQuery,
                       "offload cost queried for AP " + std::to_string(a) +
                           " but user " + std::to_string(i) + " plays " +
                           std::to_string(profile[i]));
  }
  return offload_cost_at(game, i, a, counts.on(a), counts.total);
}

CostBreakdown user_cost(const GameInstance& game, int i,
                        const StrategyProfile& profile) {
  const Congestion counts = congestion_counts(game, profile);
  const Strategy s = profile[i];
  if (s == kLocal) return local_breakdown(game.user(i));
  return offload_breakdown(game, i, s, counts.on(s), counts.total);
}

double total_cost(const GameInstance& game, const StrategyProfile& profile) {
  const Congestion counts = congestion_counts(game, profile);
  double sum = 0.0;
  for (int i = 0; i < game.num_users(); ++i) {
    const Strategy s = profile[i];
    sum += s == kLocal ? local_cost(game, i)
                       : offload_cost_at(game, i, s, counts.on(s), counts.total);
  }
  return sum;
}

double reluctance(const GameInstance& game, int i,
                  const StrategyProfile& profile) {
  const Strategy a = profile[i];
  if (a == kLocal) {
    throw OffloadError(ErrorCode::kNotAnOffloader,
                       "user " + std::to_string(i) + " computes locally");
  }
  return offload_cost(game, i, a, profile) / local_cost(game, i);
}

double deviation_cost(const GameInstance& game, const StrategyProfile& profile,
                      const Congestion& counts, int i, Strategy s) {
  const Strategy current = profile[i];
  if (s == kLocal) return local_cost(game, i);
  if (s == current) return offload_cost_at(game, i, s, counts.on(s), counts.total);
  const int total = counts.total + (current == kLocal ? 1 : 0);
  return offload_cost_at(game, i, s, counts.on(s) + 1, total);
}

std::vector<Strategy> improving_deviations(const GameInstance& game, int i,
                                           const StrategyProfile& profile) {
  const Congestion counts = congestion_counts(game, profile);
  const double current = deviation_cost(game, profile, counts, i, profile[i]);
  std::vector<Strategy> out;
  for (Strategy s = 0; s <= game.num_aps(); ++s) {
    if (s == profile[i]) continue;
    if (improves(deviation_cost(game, profile, counts, i, s), current)) {
      out.push_back(s);
    }
  }
  return out;
}

NashVerdict is_nash(const GameInstance& game, const StrategyProfile& profile) {
  const Congestion counts = congestion_counts(game, profile);
  for (int i = 0; i < game.num_users(); ++i) {
    const double current =
        deviation_cost(game, profile, counts, i, profile[i]);
    std::optional<Strategy> best;
    double best_cost = current;
    for (Strategy s = 0; s <= game.num_aps(); ++s) {
      if (s == profile[i]) continue;
      const double c = deviation_cost(game, profile, counts, i, s);
      if (improves(c, current) && (!best || c < best_cost)) {
        best = s;
        best_cost = c;
      }
    }
    if (best) return NashVerdict{false, Deviation{i, *best}};
  }
  return NashVerdict{};
}

}  // namespace offload
