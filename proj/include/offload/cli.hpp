#pragma once

// Subcommands behind the `offload` executable. Each returns an outcome with
// the process exit status, any files written and a one-line summary.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "offload/inductive.hpp"
#include "offload/oracle.hpp"
#include "offload/scenario.hpp"
#include "offload/solve.hpp"

namespace offload::cli {

enum ExitStatus : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitTooLarge = 2,
  kExitVerification = 3,
};

struct CommandOutcome {
  int exit_status = kExitOk;
  std::vector<std::filesystem::path> artifacts;
  std::string summary;
};

enum class Format { kCsv, kJson };

Format parse_format(const std::string& text);

// "4", "2:10", "10:100:10" and comma-separated mixes of them; ranges are
// inclusive. Throws kConfigError.
std::vector<int> parse_int_list(const std::string& text);

// "elastic", "nonelastic" or "both".
std::vector<CloudKind> parse_models(const std::string& text);

struct InstanceSource {
  std::optional<std::filesystem::path> instance;  // explicit or config JSON
  std::optional<int> users;
  std::optional<int> aps;
  std::optional<CloudKind> model;
  std::optional<std::uint64_t> seed;
};

struct SolveRequest {
  InstanceSource source;
  std::optional<SolverKind> solver;
  InsertionOrder::Kind ordering = InsertionOrder::Kind::kGiven;
  long step_cap = 0;
  std::optional<std::filesystem::path> out;
  Format format = Format::kJson;
};

struct SimulateRequest {
  Preset preset = Preset::kCostRatio;
  std::optional<std::filesystem::path> config;
  std::optional<std::string> users;  // preset default when empty
  std::optional<std::string> aps;
  std::vector<CloudKind> models{CloudKind::kElastic, CloudKind::kNonElastic};
  int repetitions = 500;
  std::uint64_t seed = 0;
  std::optional<SolverKind> solver;
  InsertionOrder::Kind ordering = InsertionOrder::Kind::kGiven;
  long step_cap = 0;
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
  int jobs = 1;
  std::optional<std::filesystem::path> out;
  Format format = Format::kCsv;
};

struct PoaRequest {
  bool sweep = false;
  bool bound_only = false;
  InstanceSource source;  // single-instance mode
  std::optional<std::filesystem::path> config;  // sweep base config
  std::string users = "2:8";
  std::string aps = "3";
  std::vector<CloudKind> models{CloudKind::kElastic, CloudKind::kNonElastic};
  int repetitions = 200;
  std::uint64_t seed = 0;
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
  int jobs = 1;
  std::optional<std::filesystem::path> out;
  Format format = Format::kCsv;
};

struct GenerateRequest {
  InstanceSource source;
  std::optional<std::filesystem::path> out;
};

struct CycleRequest {
  std::optional<std::filesystem::path> out;  // CSV of the step table
};

CommandOutcome cmd_solve(const SolveRequest& request, std::ostream& out);
CommandOutcome cmd_simulate(const SimulateRequest& request, std::ostream& out);
CommandOutcome cmd_reproduce_cycle(const CycleRequest& request, std::ostream& out);
CommandOutcome cmd_poa(const PoaRequest& request, std::ostream& out);
CommandOutcome cmd_generate(const GenerateRequest& request, std::ostream& out);

// Parses argv, dispatches, maps errors to exit statuses and prints the
// summary line to `err`. Returns the exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace offload::cli
