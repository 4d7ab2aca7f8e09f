#include "offload/scenario.hpp"

#include <cmath>
#include <random>

#include <fmt/format.h>

#include "offload/error.hpp"
#include "offload/parallel.hpp"

namespace offload {

namespace {

void config_check(bool ok, const std::string& what) {
  if (!ok) throw OffloadError(ErrorCode::kConfigError, what);
}

bool valid_range(const Range& r) {
  return std::isfinite(r.lo) && std::isfinite(r.hi) && r.lo > 0.0 && r.lo <= r.hi;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double draw(std::mt19937_64& rng, const Range& r) {
  if (r.lo == r.hi) return r.lo;
  return std::uniform_real_distribution<double>(r.lo, r.hi)(rng);
}

std::optional<double> metric_value(const RunRecord& r, const std::string& name) {
  if (name == "iterations") return static_cast<double>(r.iterations);
  if (name == "ne_cost") return r.ne_cost;
  if (name == "ne_offloaders") return r.ne_offloaders;
  if (name == "optimal_cost") return r.optimal_cost;
  if (name == "optimal_offloaders" && r.optimal_offloaders) {
    return static_cast<double>(*r.optimal_offloaders);
  }
  if (name == "cost_ratio") return r.cost_ratio;
  if (name == "offload_difference_ratio") return r.offload_difference_ratio;
  if (name == "poa_bound") return r.poa_bound;
  if (name == "iterations_random" && r.iterations_random) {
    return static_cast<double>(*r.iterations_random);
  }
  if (name == "iterations_ratio" && r.iterations_ratio) {
    return static_cast<double>(*r.iterations_ratio);
  }
  return std::nullopt;
}

struct Cell {
  CloudKind model;
  int n_aps;
  int n_users;
};

RunRecord execute_run(const BatchPlan& plan, const Cell& cell, int rep) {
  ScenarioConfig config = plan.base;
  config.n_users = cell.n_users;
  config.n_aps = cell.n_aps;
  config.cloud = cell.model;
  config.seed = derive_seed(plan.master_seed, cell.n_aps, cell.n_users, rep);
  const GameInstance game = generate(config);

  RunRecord rec;
  rec.model = cell.model;
  rec.n_aps = cell.n_aps;
  rec.n_users = cell.n_users;
  rec.run = rep;
  rec.seed = config.seed;

  const std::uint64_t order_seed = splitmix64(config.seed);
  SolveOptions options;
  options.solver = plan.solver;
  options.ordering = InsertionOrder{plan.ordering, order_seed};
  options.step_cap = plan.step_cap;
  const SolveResult solved = solve(game, options);
  rec.verified = solved.verdict.is_nash;
  rec.ne_cost = total_cost(game, solved.profile);
  rec.ne_offloaders = offloader_count(solved.profile);
  rec.iterations = solved.iterations;

  InductiveOptions unchecked;
  unchecked.check_contracts = false;
  switch (plan.preset) {
    case Preset::kCostRatio:
    case Preset::kOffloadRatio: {
      const OptimalSolution opt = brute_force_optimal(game, plan.enumeration_cap);
      rec.optimal_cost = opt.cost;
      rec.optimal_offloaders = offloader_count(opt.profile);
      rec.cost_ratio = cost_ratio(game, solved.profile, opt.profile);
      rec.offload_difference_ratio =
          offloading_difference_ratio(game, solved.profile, opt.profile);
      rec.poa_bound = poa_upper_bound(game);
      break;
    }
    case Preset::kIterations:
      if (!game.elastic()) {
        rec.iterations_random =
            solve_inductive(game, InsertionOrder::random(order_seed),
                            unchecked)
                .total_updates;
        rec.iterations_ratio =
            solve_inductive(game, InsertionOrder::by_ratio(),
                            unchecked)
                .total_updates;
      }
      break;
  }
  return rec;
}

std::string csv_number(std::optional<double> x) {
  return x ? fmt::format("{}", *x) : std::string();
}

}  // namespace

MetricSummary summarize_samples(const std::string& name,
                                const std::vector<double>& xs) {
  MetricSummary s;
  s.name = name;
  s.samples = static_cast<long>(xs.size());
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double sq = 0.0;
    for (double x : xs) sq += (x - s.mean) * (x - s.mean);
    const double sd = std::sqrt(sq / static_cast<double>(xs.size() - 1));
    s.ci95 = 1.96 * sd / std::sqrt(static_cast<double>(xs.size()));
  }
  return s;
}

const char* to_string(WeightSampling sampling) {
  return sampling == WeightSampling::kUniformOrdered ? "uniform-ordered"
                                                     : "time-only";
}

WeightSampling parse_weight_sampling(const std::string& text) {
  if (text == "uniform-ordered") return WeightSampling::kUniformOrdered;
  if (text == "time-only") return WeightSampling::kTimeOnly;
  throw OffloadError(ErrorCode::kConfigError,
                     "unknown weight sampling '" + text + "'");
}

void ScenarioConfig::validate() const {
  config_check(n_users > 0, "n_users must be positive");
  config_check(n_aps > 0, "n_aps must be positive");
  config_check(std::isfinite(bandwidth_mean_hz) && bandwidth_mean_hz > 0.0,
               "bandwidth_mean_hz must be positive");
  config_check(std::isfinite(bandwidth_sd_fraction) && bandwidth_sd_fraction >= 0.0,
               "bandwidth_sd_fraction must be non-negative");
  config_check(valid_range(data_bits_range), "data_bits_range must be positive and ordered");
  config_check(valid_range(cycles_range), "cycles_range must be positive and ordered");
  config_check(valid_range(local_speed_range),
               "local_speed_range must be positive and ordered");
  config_check(std::isfinite(energy_coefficient) && energy_coefficient >= 0.0,
               "energy_coefficient must be non-negative");
  config_check(std::isfinite(tx_power_w) && tx_power_w >= 0.0,
               "tx_power_w must be non-negative");
  config_check(std::isfinite(cloud_speed) && cloud_speed > 0.0,
               "cloud_speed must be positive");
}

GameInstance generate(const ScenarioConfig& config) {
  config.validate();
  std::mt19937_64 rng(config.seed);

  const double sd = config.bandwidth_sd_fraction * config.bandwidth_mean_hz;
  std::vector<AccessPoint> aps;
  aps.reserve(config.n_aps);
  if (sd > 0.0) {
    std::normal_distribution<double> bandwidth(config.bandwidth_mean_hz, sd);
    for (int a = 0; a < config.n_aps; ++a) {
      double b = bandwidth(rng);
      while (!(b > 0.0)) b = bandwidth(rng);
      aps.emplace_back(b);
    }
  } else {
    aps.assign(config.n_aps, AccessPoint(config.bandwidth_mean_hz));
  }

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<MobileUser> users;
  users.reserve(config.n_users);
  for (int i = 0; i < config.n_users; ++i) {
    UserParams p;
    p.data_bits = draw(rng, config.data_bits_range);
    p.cycles = draw(rng, config.cycles_range);
    p.local_speed = draw(rng, config.local_speed_range);
    const double ghz = p.local_speed / 1e9;
    p.energy_per_cycle = config.energy_coefficient * ghz * ghz;
    p.tx_power = config.tx_power_w;
    if (config.weight_sampling == WeightSampling::kUniformOrdered) {
      double t = unit(rng);
      double e = unit(rng);
      while (t == e) {
        t = unit(rng);
        e = unit(rng);
      }
      if (e > t) std::swap(t, e);
      p.weight_time = t;
      p.weight_energy = e;
    } else {
      p.weight_time = 1.0;
      p.weight_energy = 0.0;
    }
    users.emplace_back(p);
  }
  return GameInstance(std::move(users), std::move(aps),
                      CloudModel{config.cloud, config.cloud_speed});
}

double cost_ratio(const GameInstance& game, const StrategyProfile& ne,
                  const StrategyProfile& optimal) {
  return total_cost(game, ne) / total_cost(game, optimal);
}

double offloading_difference_ratio(const GameInstance& game,
                                   const StrategyProfile& ne,
                                   const StrategyProfile& optimal) {
  game.validate(ne);
  game.validate(optimal);
  return static_cast<double>(offloader_count(ne) - offloader_count(optimal)) /
         game.num_users();
}

std::uint64_t derive_seed(std::uint64_t master, int n_aps, int n_users,
                          int repetition) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ static_cast<std::uint64_t>(n_aps));
  h = splitmix64(h ^ static_cast<std::uint64_t>(n_users));
  return splitmix64(h ^ static_cast<std::uint64_t>(repetition));
}

const char* to_string(Preset preset) {
  switch (preset) {
    case Preset::kCostRatio: return "cost-ratio";
    case Preset::kOffloadRatio: return "offload-ratio";
    case Preset::kIterations: return "iterations";
  }
  return "unknown";
}

Preset parse_preset(const std::string& text) {
  if (text == "cost-ratio") return Preset::kCostRatio;
  if (text == "offload-ratio") return Preset::kOffloadRatio;
  if (text == "iterations") return Preset::kIterations;
  throw OffloadError(ErrorCode::kConfigError, "unknown preset '" + text + "'");
}

std::vector<std::string> metric_columns(Preset preset) {
  switch (preset) {
    case Preset::kCostRatio:
      return {"iterations", "ne_cost", "optimal_cost", "cost_ratio", "poa_bound"};
    case Preset::kOffloadRatio:
      return {"ne_offloaders", "optimal_offloaders", "offload_difference_ratio"};
    case Preset::kIterations:
      return {"iterations", "iterations_random", "iterations_ratio"};
  }
  return {};
}

const MetricSummary* AggregateRow::find(const std::string& name) const {
  for (const MetricSummary& m : metrics) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

const AggregateRow* BatchResult::find(CloudKind model, int n_aps,
                                      int n_users) const {
  for (const AggregateRow& row : aggregates) {
    if (row.model == model && row.n_aps == n_aps && row.n_users == n_users) {
      return &row;
    }
  }
  return nullptr;
}

BatchResult run_batch(const BatchPlan& plan) {
  config_check(!plan.users.empty(), "batch needs at least one user count");
  config_check(!plan.aps.empty(), "batch needs at least one AP count");
  config_check(!plan.models.empty(), "batch needs at least one cloud model");
  config_check(plan.repetitions > 0, "repetitions must be positive");
  config_check(plan.jobs > 0, "jobs must be positive");
  for (int n : plan.users) config_check(n > 0, "user counts must be positive");
  for (int a : plan.aps) config_check(a > 0, "AP counts must be positive");
  plan.base.validate();

  std::vector<Cell> cells;
  for (CloudKind model : plan.models) {
    for (int a : plan.aps) {
      for (int n : plan.users) cells.push_back(Cell{model, a, n});
    }
  }
  if (plan.preset != Preset::kIterations) {
    for (const Cell& cell : cells) {
      const std::uint64_t count = profile_count(cell.n_users, cell.n_aps);
      if (count > plan.enumeration_cap) {
        throw OffloadError(
            ErrorCode::kInstanceTooLarge,
            fmt::format("N={} A={} needs {} profiles, above the enumeration cap {}",
                        cell.n_users, cell.n_aps, count, plan.enumeration_cap));
      }
    }
  }

  const std::size_t total = cells.size() * static_cast<std::size_t>(plan.repetitions);
  BatchResult result;
  result.preset = plan.preset;
  result.runs.resize(total);
  parallel_for(total, plan.jobs, [&](std::size_t k) {
    result.runs[k] = execute_run(plan, cells[k / plan.repetitions],
                                 static_cast<int>(k % plan.repetitions));
  });

  const std::vector<std::string> columns = metric_columns(plan.preset);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    AggregateRow row;
    row.model = cells[c].model;
    row.n_aps = cells[c].n_aps;
    row.n_users = cells[c].n_users;
    row.samples = plan.repetitions;
    const std::size_t begin = c * plan.repetitions;
    for (std::size_t k = begin; k < begin + plan.repetitions; ++k) {
      row.unverified += result.runs[k].verified ? 0 : 1;
    }
    for (const std::string& name : columns) {
      std::vector<double> xs;
      for (std::size_t k = begin; k < begin + plan.repetitions; ++k) {
        if (auto v = metric_value(result.runs[k], name)) xs.push_back(*v);
      }
      row.metrics.push_back(summarize_samples(name, xs));
    }
    result.aggregates.push_back(std::move(row));
  }
  return result;
}

std::string to_csv(const BatchResult& result) {
  const std::vector<std::string> columns = metric_columns(result.preset);
  std::string out = "kind,model,n_aps,n_users,run,seed,samples,verified";
  for (const std::string& name : columns) out += "," + name;
  out += '\n';

  for (const RunRecord& r : result.runs) {
    out += fmt::format("run,{},{},{},{},{},,{}", to_string(r.model), r.n_aps,
                       r.n_users, r.run, r.seed, r.verified ? 1 : 0);
    for (const std::string& name : columns) {
      out += "," + csv_number(metric_value(r, name));
    }
    out += '\n';
  }
  for (const char* kind : {"mean", "ci95"}) {
    const bool mean = std::string_view(kind) == "mean";
    for (const AggregateRow& row : result.aggregates) {
      out += fmt::format("{},{},{},{},,,{},{}", kind, to_string(row.model),
                         row.n_aps, row.n_users, row.samples,
                         row.samples - row.unverified);
      for (const MetricSummary& m : row.metrics) {
        out += ",";
        if (m.samples > 0) out += csv_number(mean ? m.mean : m.ci95);
      }
      out += '\n';
    }
  }
  return out;
}

}  // namespace offload
