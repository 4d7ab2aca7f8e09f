#pragma once

// JSON documents for scenario configs and explicit instances, plus atomic
// file output.
//
// An instance document is a scenario config (every field optional, defaults
// apply) that may also list its players explicitly:
//
//   "users": [{"data_bits": .., "cycles": .., "local_speed": ..,
//              "energy_per_cycle": .., "tx_power": .., "weight_time": ..,
//              "weight_energy": ..}, ...],
//   "aps": [{"bandwidth": ..}, ...],
//   "initial_profile": [0, 1, ...]
//
// With "users" and "aps" present the instance is used as written; otherwise
// it is generated from the config.

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "offload/game.hpp"
#include "offload/scenario.hpp"

namespace offload {

// Throw kConfigError on malformed or out-of-range fields.
ScenarioConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const ScenarioConfig& config);

struct InstanceDocument {
  ScenarioConfig config;
  GameInstance game;
  std::optional<StrategyProfile> initial_profile;
  bool explicit_players = false;
};

InstanceDocument instance_from_json(const nlohmann::json& doc);
nlohmann::json instance_to_json(
    const GameInstance& game,
    const std::optional<StrategyProfile>& initial = std::nullopt);

// Records and aggregates with the same fields as the CSV form.
nlohmann::json batch_to_json(const BatchResult& result);

// Reads and parses a JSON file; kConfigError on I/O or syntax errors.
nlohmann::json read_json_file(const std::filesystem::path& path);
InstanceDocument load_instance(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over `path`, so readers
// never observe a partial file. Throws kConfigError on failure.
void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents);

}  // namespace offload
