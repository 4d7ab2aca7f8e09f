#include "offload/cli.hpp"

#include <cmath>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "offload/dynamics.hpp"
#include "offload/error.hpp"
#include "offload/instance_io.hpp"
#include "offload/parallel.hpp"

namespace offload::cli {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& what) {
  throw OffloadError(ErrorCode::kConfigError, what);
}

int parse_int(const std::string& text) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size()) config_error("not an integer: '" + text + "'");
    return v;
  } catch (const std::logic_error&) {
    config_error("not an integer: '" + text + "'");
  }
}

InstanceDocument resolve(const InstanceSource& source) {
  json doc = source.instance ? read_json_file(*source.instance) : json::object();
  if (!doc.is_object()) config_error("instance document must be a JSON object");
  if (doc.contains("users") && (source.users || source.aps)) {
    config_error("--users/--aps cannot resize an explicit instance");
  }
  if (source.users) doc["n_users"] = *source.users;
  if (source.aps) doc["n_aps"] = *source.aps;
  if (source.seed) doc["seed"] = *source.seed;
  if (source.model) doc["cloud"] = to_string(*source.model);
  return instance_from_json(doc);
}

std::string dims(const GameInstance& game, std::uint64_t seed) {
  return fmt::format("N={} A={} model={} seed={}", game.num_users(),
                     game.num_aps(), to_string(game.cloud().kind), seed);
}

CommandOutcome emit(const std::optional<std::filesystem::path>& path,
                    const std::string& contents, std::ostream& out,
                    CommandOutcome outcome) {
  if (path) {
    write_file_atomic(*path, contents);
    outcome.artifacts.push_back(*path);
  } else {
    out << contents;
  }
  return outcome;
}

char user_letter(int i) { return static_cast<char>('a' + i); }

bool poa_row_ok(const PoaReport& r) {
  const double tol = kRelativeTolerance;
  return r.empirical_poa >= 1.0 - tol &&
         r.empirical_poa <= r.poa_upper_bound * (1.0 + tol);
}

}  // namespace

Format parse_format(const std::string& text) {
  if (text == "csv") return Format::kCsv;
  if (text == "json") return Format::kJson;
  config_error("unknown format '" + text + "'");
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string item =
        text.substr(start, comma == std::string::npos ? std::string::npos
                                                      : comma - start);
    std::vector<int> parts;
    std::size_t p = 0;
    while (p <= item.size()) {
      const std::size_t colon = item.find(':', p);
      parts.push_back(parse_int(item.substr(
          p, colon == std::string::npos ? std::string::npos : colon - p)));
      if (colon == std::string::npos) break;
      p = colon + 1;
    }
    if (parts.size() == 1) {
      out.push_back(parts[0]);
    } else if (parts.size() <= 3) {
      const int step = parts.size() == 3 ? parts[2] : 1;
      if (step <= 0 || parts[1] < parts[0]) config_error("bad range '" + item + "'");
      for (int v = parts[0]; v <= parts[1]; v += step) out.push_back(v);
    } else {
      config_error("bad range '" + item + "'");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<CloudKind> parse_models(const std::string& text) {
  if (text == "both") return {CloudKind::kElastic, CloudKind::kNonElastic};
  return {parse_cloud_kind(text)};
}

CommandOutcome cmd_solve(const SolveRequest& request, std::ostream& out) {
  const InstanceDocument doc = resolve(request.source);
  const GameInstance& game = doc.game;

  SolveOptions options;
  options.solver = request.solver;
  options.ordering = InsertionOrder{request.ordering, doc.config.seed};
  options.step_cap = request.step_cap;
  options.initial = doc.initial_profile;
  const SolveResult result = solve(game, options);

  out << "instance  " << dims(game, doc.config.seed) << '\n';
  out << "solver    " << to_string(result.solver);
  if (result.solver == SolverKind::kInductive) {
    out << " (ordering " << to_string(request.ordering) << ')';
  }
  out << '\n' << "profile   " << result.profile.to_string() << '\n';
  out << fmt::format("{:>6} {:>8} {:>14} {:>14}\n", "user", "strategy", "cost",
                     "local_cost");
  json users = json::array();
  std::string csv = "user,strategy,cost,local_cost\n";
  for (int i = 0; i < game.num_users(); ++i) {
    const double c = user_cost(game, i, result.profile).total;
    const double l = local_cost(game, i);
    out << fmt::format("{:>6} {:>8} {:>14.6g} {:>14.6g}\n", i,
                       result.profile[i], c, l);
    csv += fmt::format("{},{},{},{}\n", i, result.profile[i], c, l);
    users.push_back(json{{"user", i},
                         {"strategy", result.profile[i]},
                         {"cost", c},
                         {"local_cost", l}});
  }
  const double total = total_cost(game, result.profile);
  out << fmt::format("total     {:.6g}\n", total);
  out << "iterations " << result.iterations << " (" << result.terminal << ")\n";
  if (result.verdict.is_nash) {
    out << "verdict   equilibrium\n";
  } else {
    out << fmt::format("verdict   not an equilibrium: user {} improves by playing {}\n",
                       result.verdict.witness->user,
                       result.verdict.witness->strategy);
  }

  CommandOutcome outcome;
  outcome.exit_status = result.verdict.is_nash ? kExitOk : kExitVerification;
  outcome.summary = fmt::format("solve {} solver={} iterations={} verdict={}",
                                dims(game, doc.config.seed),
                                to_string(result.solver), result.iterations,
                                result.verdict.is_nash ? "nash" : "not-nash");
  if (request.out) {
    std::string contents = csv;
    if (request.format == Format::kJson) {
      json report{
          {"n_users", game.num_users()},
          {"n_aps", game.num_aps()},
          {"model", to_string(game.cloud().kind)},
          {"seed", doc.config.seed},
          {"solver", to_string(result.solver)},
          {"ordering", to_string(request.ordering)},
          {"profile", std::vector<Strategy>(result.profile.decisions().begin(),
                                            result.profile.decisions().end())},
          {"users", std::move(users)},
          {"total_cost", total},
          {"iterations", result.iterations},
          {"terminal", result.terminal},
          {"is_nash", result.verdict.is_nash},
      };
      if (result.verdict.witness) {
        report["witness"] = json{{"user", result.verdict.witness->user},
                                 {"strategy", result.verdict.witness->strategy}};
      }
      contents = report.dump(2) + "\n";
    }
    write_file_atomic(*request.out, contents);
    outcome.artifacts.push_back(*request.out);
  }
  return outcome;
}

CommandOutcome cmd_simulate(const SimulateRequest& request, std::ostream& out) {
  BatchPlan plan;
  plan.preset = request.preset;
  if (request.config) plan.base = config_from_json(read_json_file(*request.config));
  const bool iterations = request.preset == Preset::kIterations;
  plan.users = parse_int_list(request.users.value_or(iterations ? "10:100:10" : "2:10"));
  plan.aps = parse_int_list(request.aps.value_or(iterations ? "10,50,100" : "3"));
  plan.models = request.models;
  plan.repetitions = request.repetitions;
  plan.master_seed = request.seed;
  plan.solver = request.solver;
  plan.ordering = request.ordering;
  plan.step_cap = request.step_cap;
  plan.enumeration_cap = request.enumeration_cap;
  plan.jobs = request.jobs;
  const BatchResult result = run_batch(plan);

  long unverified = 0;
  for (const RunRecord& r : result.runs) unverified += r.verified ? 0 : 1;
  CommandOutcome outcome;
  outcome.exit_status = unverified == 0 ? kExitOk : kExitVerification;
  outcome.summary = fmt::format(
      "simulate preset={} runs={} cells={} seed={} unverified={}",
      to_string(plan.preset), result.runs.size(), result.aggregates.size(),
      plan.master_seed, unverified);
  const std::string contents = request.format == Format::kJson
                                   ? batch_to_json(result).dump(2) + "\n"
                                   : to_csv(result);
  return emit(request.out, contents, out, std::move(outcome));
}

CommandOutcome cmd_reproduce_cycle(const CycleRequest& request,
                                   std::ostream& out) {
  const CycleFixture fx = build_cycle_instance();
  const PathResult path =
      run_improvement_path(fx.game, fx.initial, MoverPolicy::scheduled(fx.schedule),
                           static_cast<long>(fx.schedule.size()) + 1);

  bool ok = path.trace.terminal == PathTerminal::kCycleDetected &&
            path.trace.steps.size() == fx.schedule.size() &&
            path.trace.period == static_cast<long>(fx.schedule.size());
  out << "x(0) = " << fx.initial.to_string() << '\n';
  out << fmt::format("{:>4} {:>5} {:>4} {:>4} {:>14} {:>12} {:>12} {:>12}\n",
                     "step", "mover", "from", "to", "profile", "old_cost",
                     "new_cost", "delta");
  std::string csv = "step,mover,from,to,profile,old_cost,new_cost,delta\n";
  StrategyProfile x = fx.initial;
  for (std::size_t k = 0; k < path.trace.steps.size(); ++k) {
    const ImprovementStep& s = path.trace.steps[k];
    x.set(s.user, s.to);
    const bool matches = k + 1 < fx.expected_profiles.size() &&
                         x == fx.expected_profiles[k + 1] &&
                         k < fx.schedule.size() && s.user == fx.schedule[k].user;
    const bool improved = improves(s.new_cost, s.old_cost);
    ok = ok && matches && improved;
    const double delta = s.new_cost - s.old_cost;
    out << fmt::format("{:>4} {:>5} {:>4} {:>4} {:>14} {:>12.6f} {:>12.6f} {:>12.6f}{}\n",
                       k + 1, user_letter(s.user), s.from, s.to, x.to_string(),
                       s.old_cost, s.new_cost, delta,
                       matches && improved ? "" : "  MISMATCH");
    csv += fmt::format("{},{},{},{},\"{}\",{},{},{}\n", k + 1, user_letter(s.user),
                       s.from, s.to, x.to_string(), s.old_cost, s.new_cost, delta);
  }
  out << "steps " << path.trace.steps.size() << ", terminal "
      << to_string(path.trace.terminal) << ", returns to x(0): "
      << (x == fx.initial ? "yes" : "no") << '\n';

  CommandOutcome outcome;
  outcome.exit_status = ok ? kExitOk : kExitVerification;
  outcome.summary = fmt::format("reproduce-cycle {} steps={} replay={}",
                                dims(fx.game, 0), path.trace.steps.size(),
                                ok ? "exact" : "mismatch");
  if (request.out) {
    write_file_atomic(*request.out, csv);
    outcome.artifacts.push_back(*request.out);
  }
  return outcome;
}

CommandOutcome cmd_poa(const PoaRequest& request, std::ostream& out) {
  CommandOutcome outcome;
  if (!request.sweep) {
    const InstanceDocument doc = resolve(request.source);
    const GameInstance& game = doc.game;
    json report{{"n_users", game.num_users()},
                {"n_aps", game.num_aps()},
                {"model", to_string(game.cloud().kind)},
                {"seed", doc.config.seed},
                {"poa_upper_bound", poa_upper_bound(game)}};
    std::string csv_header = "n_users,n_aps,model,seed,poa_upper_bound";
    std::string csv_row = fmt::format("{},{},{},{},{}", game.num_users(),
                                      game.num_aps(), to_string(game.cloud().kind),
                                      doc.config.seed, poa_upper_bound(game));
    out << "instance        " << dims(game, doc.config.seed) << '\n';
    if (!request.bound_only) {
      const PoaReport r = poa_report(game, request.enumeration_cap);
      out << fmt::format("optimal_cost    {:.9g}  {}\n", r.optimal_cost,
                         r.optimal_profile.to_string());
      out << fmt::format("best_ne_cost    {:.9g}\n", r.best_ne_cost);
      out << fmt::format("worst_ne_cost   {:.9g}  {}\n", r.worst_ne_cost,
                         r.worst_ne_profile.to_string());
      out << fmt::format("ne_count        {}\n", r.ne_count);
      out << fmt::format("empirical_poa   {:.9g}\n", r.empirical_poa);
      report["optimal_cost"] = r.optimal_cost;
      report["optimal_profile"] = std::vector<Strategy>(
          r.optimal_profile.decisions().begin(), r.optimal_profile.decisions().end());
      report["best_ne_cost"] = r.best_ne_cost;
      report["worst_ne_cost"] = r.worst_ne_cost;
      report["ne_count"] = r.ne_count;
      report["empirical_poa"] = r.empirical_poa;
      csv_header += ",optimal_cost,best_ne_cost,worst_ne_cost,ne_count,empirical_poa";
      csv_row += fmt::format(",{},{},{},{},{}", r.optimal_cost, r.best_ne_cost,
                             r.worst_ne_cost, r.ne_count, r.empirical_poa);
      if (!poa_row_ok(r)) outcome.exit_status = kExitVerification;
      outcome.summary = fmt::format("poa {} empirical={:.6g} bound={:.6g}",
                                    dims(game, doc.config.seed), r.empirical_poa,
                                    r.poa_upper_bound);
    } else {
      outcome.summary = fmt::format("poa {} bound={:.6g}", dims(game, doc.config.seed),
                                    poa_upper_bound(game));
    }
    out << fmt::format("poa_upper_bound {:.9g}\n", poa_upper_bound(game));
    if (request.out) {
      const std::string contents = request.format == Format::kJson
                                       ? report.dump(2) + "\n"
                                       : csv_header + "\n" + csv_row + "\n";
      write_file_atomic(*request.out, contents);
      outcome.artifacts.push_back(*request.out);
    }
    return outcome;
  }

  ScenarioConfig base;
  if (request.config) base = config_from_json(read_json_file(*request.config));
  const std::vector<int> users = parse_int_list(request.users);
  const std::vector<int> aps = parse_int_list(request.aps);
  if (request.repetitions <= 0) config_error("repetitions must be positive");
  struct Cell {
    CloudKind model;
    int n_aps;
    int n_users;
  };
  std::vector<Cell> cells;
  for (CloudKind m : request.models) {
    for (int a : aps) {
      for (int n : users) {
        if (n <= 0 || a <= 0) config_error("user and AP counts must be positive");
        if (!request.bound_only && profile_count(n, a) > request.enumeration_cap) {
          throw OffloadError(ErrorCode::kInstanceTooLarge,
                             fmt::format("N={} A={} exceeds the enumeration cap {}",
                                         n, a, request.enumeration_cap));
        }
        cells.push_back(Cell{m, a, n});
      }
    }
  }

  struct Row {
    std::uint64_t seed = 0;
    double bound = 0.0;
    std::optional<PoaReport> report;
  };
  const std::size_t reps = static_cast<std::size_t>(request.repetitions);
  std::vector<Row> rows(cells.size() * reps);
  parallel_for(rows.size(), request.jobs, [&](std::size_t k) {
    const Cell& cell = cells[k / reps];
    ScenarioConfig config = base;
    config.n_users = cell.n_users;
    config.n_aps = cell.n_aps;
    config.cloud = cell.model;
    config.seed = derive_seed(request.seed, cell.n_aps, cell.n_users,
                              static_cast<int>(k % reps));
    const GameInstance game = generate(config);
    rows[k].seed = config.seed;
    rows[k].bound = poa_upper_bound(game);
    if (!request.bound_only) rows[k].report = poa_report(game, request.enumeration_cap);
  });

  const std::vector<std::string> columns =
      request.bound_only
          ? std::vector<std::string>{"poa_bound"}
          : std::vector<std::string>{"optimal_cost", "best_ne_cost", "worst_ne_cost",
                                     "ne_count", "empirical_poa", "poa_bound"};
  auto value = [](const Row& row, const std::string& name) -> double {
    if (name == "poa_bound") return row.bound;
    const PoaReport& r = *row.report;
    if (name == "optimal_cost") return r.optimal_cost;
    if (name == "best_ne_cost") return r.best_ne_cost;
    if (name == "worst_ne_cost") return r.worst_ne_cost;
    if (name == "ne_count") return static_cast<double>(r.ne_count);
    return r.empirical_poa;
  };

  std::string csv = "kind,model,n_aps,n_users,run,seed,samples";
  for (const auto& c : columns) csv += "," + c;
  csv += '\n';
  long violations = 0;
  json runs = json::array();
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const Cell& cell = cells[k / reps];
    csv += fmt::format("run,{},{},{},{},{},", to_string(cell.model), cell.n_aps,
                       cell.n_users, k % reps, rows[k].seed);
    json j{{"model", to_string(cell.model)},
           {"n_aps", cell.n_aps},
           {"n_users", cell.n_users},
           {"run", k % reps},
           {"seed", rows[k].seed}};
    for (const auto& c : columns) {
      csv += fmt::format(",{}", value(rows[k], c));
      j[c] = value(rows[k], c);
    }
    csv += '\n';
    runs.push_back(std::move(j));
    if (rows[k].report && !poa_row_ok(*rows[k].report)) ++violations;
  }
  json aggregates = json::array();
  std::string mean_rows, ci_rows;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const Cell& cell = cells[c];
    const std::string prefix = fmt::format(",{},{},{},,,{}", to_string(cell.model),
                                           cell.n_aps, cell.n_users, reps);
    mean_rows += "mean" + prefix;
    ci_rows += "ci95" + prefix;
    json metrics = json::object();
    for (const auto& name : columns) {
      std::vector<double> xs;
      for (std::size_t k = c * reps; k < (c + 1) * reps; ++k) {
        xs.push_back(value(rows[k], name));
      }
      const MetricSummary s = summarize_samples(name, xs);
      mean_rows += fmt::format(",{}", s.mean);
      ci_rows += fmt::format(",{}", s.ci95);
      metrics[name] = json{{"mean", s.mean}, {"ci95", s.ci95}};
    }
    mean_rows += '\n';
    ci_rows += '\n';
    aggregates.push_back(json{{"model", to_string(cell.model)},
                              {"n_aps", cell.n_aps},
                              {"n_users", cell.n_users},
                              {"samples", reps},
                              {"metrics", std::move(metrics)}});
  }
  csv += mean_rows + ci_rows;

  outcome.exit_status = violations == 0 ? kExitOk : kExitVerification;
  outcome.summary = fmt::format("poa sweep runs={} cells={} seed={} violations={}{}",
                                rows.size(), cells.size(), request.seed, violations,
                                request.bound_only ? " (bound only)" : "");
  const std::string contents =
      request.format == Format::kJson
          ? json{{"runs", std::move(runs)}, {"aggregates", std::move(aggregates)}}
                    .dump(2) + "\n"
          : csv;
  return emit(request.out, contents, out, std::move(outcome));
}

CommandOutcome cmd_generate(const GenerateRequest& request, std::ostream& out) {
  const InstanceDocument doc = resolve(request.source);
  CommandOutcome outcome;
  outcome.summary = "generate " + dims(doc.game, doc.config.seed);
  return emit(request.out, instance_to_json(doc.game).dump(2) + "\n", out,
              std::move(outcome));
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-access computation offloading game: equilibria, optima and experiments",
               "offload"};
  app.require_subcommand(1);

  std::string model, solver, ordering, format, users, aps;
  std::optional<std::string> instance, config, out_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> n_users, n_aps;
  long step_cap = 0;
  std::uint64_t enum_cap = kDefaultEnumerationCap;
  int jobs = 1, reps = 0;
  std::string preset;
  bool sweep = false, bound_only = false;

  const auto model_check = CLI::IsMember({"elastic", "nonelastic", "non-elastic", "both"});
  const auto solver_check = CLI::IsMember({"dynamics", "inductive"});
  const auto ordering_check = CLI::IsMember({"given", "random", "ratio"});
  const auto format_check = CLI::IsMember({"csv", "json"});

  auto* solve_cmd = app.add_subcommand("solve", "Compute and verify an equilibrium");
  auto* sim_cmd = app.add_subcommand("simulate", "Run a seeded batch experiment");
  auto* cycle_cmd = app.add_subcommand("reproduce-cycle",
                                       "Replay the nine-step improvement cycle");
  auto* poa_cmd = app.add_subcommand("poa", "Empirical price of anarchy and its bound");
  auto* gen_cmd = app.add_subcommand("generate", "Write a random instance as JSON");

  for (auto* cmd : {solve_cmd, poa_cmd, gen_cmd}) {
    cmd->add_option("--instance", instance, "Instance or config JSON file");
    cmd->add_option("--n-users", n_users, "Override the user count");
    cmd->add_option("--n-aps", n_aps, "Override the AP count");
  }
  for (auto* cmd : {solve_cmd, gen_cmd}) {
    cmd->add_option("--model", model, "elastic | nonelastic")->check(model_check);
    cmd->add_option("--seed", seed, "Scenario seed");
  }
  solve_cmd->add_option("--solver", solver, "dynamics | inductive")->check(solver_check);
  solve_cmd->add_option("--ordering", ordering, "given | random | ratio")
      ->check(ordering_check);
  solve_cmd->add_option("--step-cap", step_cap, "Improvement step cap (0 = default)");

  sim_cmd->add_option("--preset", preset, "cost-ratio | offload-ratio | iterations")
      ->required()
      ->check(CLI::IsMember({"cost-ratio", "offload-ratio", "iterations"}));
  sim_cmd->add_option("--config", config, "Scenario config JSON file");
  sim_cmd->add_option("--solver", solver, "dynamics | inductive")->check(solver_check);
  sim_cmd->add_option("--ordering", ordering, "given | random | ratio")
      ->check(ordering_check);
  sim_cmd->add_option("--step-cap", step_cap, "Improvement step cap (0 = default)");
  for (auto* cmd : {sim_cmd, poa_cmd}) {
    cmd->add_option("--users", users, "User counts, e.g. 2:10 or 50,100");
    cmd->add_option("--aps", aps, "AP counts, e.g. 3 or 10,50,100");
    cmd->add_option("--model", model, "elastic | nonelastic | both")->check(model_check);
    cmd->add_option("--reps", reps, "Repetitions per grid cell");
    cmd->add_option("--seed", seed, "Master seed");
    cmd->add_option("--enum-cap", enum_cap, "Enumeration cap on (A+1)^N");
    cmd->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  }
  poa_cmd->add_flag("--sweep", sweep, "Sweep random scenarios instead of one instance");
  poa_cmd->add_flag("--bound-only", bound_only, "Skip enumeration");
  poa_cmd->add_option("--config", config, "Sweep base config JSON file");

  for (auto* cmd : {solve_cmd, sim_cmd, cycle_cmd, poa_cmd, gen_cmd}) {
    cmd->add_option("--out", out_path, "Output file (written atomically)");
  }
  for (auto* cmd : {solve_cmd, sim_cmd, poa_cmd}) {
    cmd->add_option("--format", format, "csv | json")->check(format_check);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  auto source = [&] {
    InstanceSource s;
    if (instance) s.instance = *instance;
    s.users = n_users;
    s.aps = n_aps;
    s.seed = seed;
    if (!model.empty()) {
      if (model == "both") config_error("--model both is only valid for batches");
      s.model = parse_cloud_kind(model);
    }
    return s;
  };
  auto optional_path = [&]() -> std::optional<std::filesystem::path> {
    if (out_path) return std::filesystem::path(*out_path);
    return std::nullopt;
  };

  try {
    CommandOutcome outcome;
    if (*solve_cmd) {
      SolveRequest r;
      r.source = source();
      if (!solver.empty()) r.solver = parse_solver_kind(solver);
      if (!ordering.empty()) r.ordering = parse_ordering(ordering);
      r.step_cap = step_cap;
      r.out = optional_path();
      if (!format.empty()) r.format = parse_format(format);
      outcome = cmd_solve(r, out);
    } else if (*sim_cmd) {
      SimulateRequest r;
      r.preset = parse_preset(preset);
      if (config) r.config = *config;
      if (!users.empty()) r.users = users;
      if (!aps.empty()) r.aps = aps;
      if (!model.empty()) r.models = parse_models(model);
      if (reps > 0) r.repetitions = reps;
      r.seed = seed.value_or(0);
      if (!solver.empty()) r.solver = parse_solver_kind(solver);
      if (!ordering.empty()) r.ordering = parse_ordering(ordering);
      r.step_cap = step_cap;
      r.enumeration_cap = enum_cap;
      r.jobs = jobs;
      r.out = optional_path();
      if (!format.empty()) r.format = parse_format(format);
      outcome = cmd_simulate(r, out);
    } else if (*cycle_cmd) {
      outcome = cmd_reproduce_cycle(CycleRequest{optional_path()}, out);
    } else if (*poa_cmd) {
      PoaRequest r;
      r.sweep = sweep;
      r.bound_only = bound_only;
      if (!sweep) {
        r.source = source();
      } else {
        if (instance) config_error("--instance is not used with --sweep; use --config");
        if (config) r.config = *config;
        if (!users.empty()) r.users = users;
        if (!aps.empty()) r.aps = aps;
        if (!model.empty()) r.models = parse_models(model);
        if (reps > 0) r.repetitions = reps;
        r.seed = seed.value_or(0);
      }
      r.enumeration_cap = enum_cap;
      r.jobs = jobs;
      r.out = optional_path();
      if (!format.empty()) r.format = parse_format(format);
      outcome = cmd_poa(r, out);
    } else {
      outcome = cmd_generate(GenerateRequest{source(), optional_path()}, out);
    }
    err << outcome.summary << '\n';
    return outcome.exit_status;
  } catch (const OffloadError& e) {
    err << "error: " << e.what() << '\n';
    switch (e.code()) {
      case ErrorCode::kInstanceTooLarge: return kExitTooLarge;
      case ErrorCode::kContractViolation: return kExitVerification;
      default: return kExitUsage;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace offload::cli
