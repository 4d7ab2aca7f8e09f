#pragma once

// Random scenario generation, per-run metrics and seeded batch experiments.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "offload/game.hpp"
#include "offload/inductive.hpp"
#include "offload/oracle.hpp"
#include "offload/solve.hpp"

namespace offload {

struct Range {
  double lo = 0.0;
  double hi = 0.0;

  bool operator==(const Range&) const = default;
};

enum class WeightSampling {
  kUniformOrdered,  // gamma^T, gamma^E ~ U[0,1], swapped so gamma^E < gamma^T
  kTimeOnly,        // gamma^T = 1, gamma^E = 0
};

const char* to_string(WeightSampling sampling);
WeightSampling parse_weight_sampling(const std::string& text);

struct ScenarioConfig {
  int n_users = 10;
  int n_aps = 3;
  CloudKind cloud = CloudKind::kElastic;
  double bandwidth_mean_hz = 5e6;
  double bandwidth_sd_fraction = 0.2;
  Range data_bits_range{0.42e6, 2e6};
  Range cycles_range{0.1e9, 0.8e9};
  Range local_speed_range{0.5e9, 1e9};
  WeightSampling weight_sampling = WeightSampling::kUniformOrdered;
  double energy_coefficient = 1e-11;  // v_i = coefficient * (f_i in GHz)^2
  double tx_power_w = 0.4;
  double cloud_speed = 100e9;
  std::uint64_t seed = 0;

  // Throws kConfigError on non-positive counts or empty/non-positive ranges.
  void validate() const;

  bool operator==(const ScenarioConfig&) const = default;
};

// Deterministic in config (including seed). Bandwidths are drawn first, then
// each user's d, c, f and weights in index order.
GameInstance generate(const ScenarioConfig& config);

// total_cost(ne) / total_cost(optimal).
double cost_ratio(const GameInstance& game, const StrategyProfile& ne,
                  const StrategyProfile& optimal);

// (n(ne) - n(optimal)) / N.
double offloading_difference_ratio(const GameInstance& game,
                                   const StrategyProfile& ne,
                                   const StrategyProfile& optimal);

// Stable 64-bit mixing of a master seed with a run coordinate.
std::uint64_t derive_seed(std::uint64_t master, int n_aps, int n_users,
                          int repetition);

enum class Preset { kCostRatio, kOffloadRatio, kIterations };

const char* to_string(Preset preset);
Preset parse_preset(const std::string& text);

struct BatchPlan {
  Preset preset = Preset::kCostRatio;
  ScenarioConfig base;  // n_users, n_aps, cloud and seed are overridden
  std::vector<int> users;
  std::vector<int> aps;
  std::vector<CloudKind> models;
  int repetitions = 500;
  std::uint64_t master_seed = 0;
  std::optional<SolverKind> solver;  // per-model default when empty
  InsertionOrder::Kind ordering = InsertionOrder::Kind::kGiven;
  long step_cap = 0;
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
  int jobs = 1;
};

struct RunRecord {
  CloudKind model = CloudKind::kElastic;
  int n_aps = 0;
  int n_users = 0;
  int run = 0;
  std::uint64_t seed = 0;
  bool verified = false;
  double ne_cost = 0.0;
  int ne_offloaders = 0;
  long iterations = 0;
  std::optional<double> optimal_cost;
  std::optional<int> optimal_offloaders;
  std::optional<double> cost_ratio;
  std::optional<double> offload_difference_ratio;
  std::optional<double> poa_bound;
  std::optional<long> iterations_random;  // non-elastic, iterations preset
  std::optional<long> iterations_ratio;
};

struct MetricSummary {
  std::string name;
  double mean = 0.0;
  double ci95 = 0.0;  // 1.96 * sample sd / sqrt(n)
  long samples = 0;
};

// Mean and 95% half-width of a sample.
MetricSummary summarize_samples(const std::string& name,
                                const std::vector<double>& xs);

struct AggregateRow {
  CloudKind model = CloudKind::kElastic;
  int n_aps = 0;
  int n_users = 0;
  long samples = 0;
  long unverified = 0;
  std::vector<MetricSummary> metrics;  // in preset column order

  const MetricSummary* find(const std::string& name) const;
};

struct BatchResult {
  Preset preset = Preset::kCostRatio;
  std::vector<RunRecord> runs;  // grid order: model, aps, users, repetition
  std::vector<AggregateRow> aggregates;

  const AggregateRow* find(CloudKind model, int n_aps, int n_users) const;
};

// Metric column names for a preset, in CSV order.
std::vector<std::string> metric_columns(Preset preset);

// Throws kConfigError on an invalid plan and kInstanceTooLarge when a
// brute-force preset meets an instance above the enumeration cap.
BatchResult run_batch(const BatchPlan& plan);

// Header, one "run" row per record, then "mean" and "ci95" rows per grid cell.
std::string to_csv(const BatchResult& result);

}  // namespace offload
