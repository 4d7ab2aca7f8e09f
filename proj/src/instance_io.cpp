#include "offload/instance_io.hpp"

#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "offload/error.hpp"

namespace offload {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& what) {
  throw OffloadError(ErrorCode::kConfigError, what);
}

template <typename T>
T field(const json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    config_error(std::string("field '") + key + "' has the wrong type");
  }
}

Range range_field(const json& doc, const char* key, Range fallback) {
  if (!doc.contains(key)) return fallback;
  const json& v = doc.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    config_error(std::string("field '") + key + "' must be [lo, hi]");
  }
  return Range{v[0].get<double>(), v[1].get<double>()};
}

json range_json(const Range& r) { return json::array({r.lo, r.hi}); }

UserParams user_from_json(const json& u) {
  if (!u.is_object()) config_error("each user must be an object");
  UserParams p;
  p.data_bits = field(u, "data_bits", 0.0);
  p.cycles = field(u, "cycles", 0.0);
  p.local_speed = field(u, "local_speed", 0.0);
  p.energy_per_cycle = field(u, "energy_per_cycle", 0.0);
  p.tx_power = field(u, "tx_power", 0.4);
  p.weight_time = field(u, "weight_time", 1.0);
  p.weight_energy = field(u, "weight_energy", 0.0);
  return p;
}

}  // namespace

ScenarioConfig config_from_json(const json& doc) {
  if (!doc.is_object()) config_error("config must be a JSON object");
  ScenarioConfig c;
  c.n_users = field(doc, "n_users", c.n_users);
  c.n_aps = field(doc, "n_aps", c.n_aps);
  if (doc.contains("cloud")) {
    c.cloud = parse_cloud_kind(field(doc, "cloud", std::string()));
  }
  c.bandwidth_mean_hz = field(doc, "bandwidth_mean_hz", c.bandwidth_mean_hz);
  c.bandwidth_sd_fraction =
      field(doc, "bandwidth_sd_fraction", c.bandwidth_sd_fraction);
  c.data_bits_range = range_field(doc, "data_bits_range", c.data_bits_range);
  c.cycles_range = range_field(doc, "cycles_range", c.cycles_range);
  c.local_speed_range = range_field(doc, "local_speed_range", c.local_speed_range);
  if (doc.contains("weight_sampling")) {
    c.weight_sampling =
        parse_weight_sampling(field(doc, "weight_sampling", std::string()));
  }
  c.energy_coefficient = field(doc, "energy_coefficient", c.energy_coefficient);
  c.tx_power_w = field(doc, "tx_power_w", c.tx_power_w);
  c.cloud_speed = field(doc, "cloud_speed", c.cloud_speed);
  c.seed = field(doc, "seed", c.seed);
  return c;
}

json config_to_json(const ScenarioConfig& c) {
  return json{
      {"n_users", c.n_users},
      {"n_aps", c.n_aps},
      {"cloud", to_string(c.cloud)},
      {"bandwidth_mean_hz", c.bandwidth_mean_hz},
      {"bandwidth_sd_fraction", c.bandwidth_sd_fraction},
      {"data_bits_range", range_json(c.data_bits_range)},
      {"cycles_range", range_json(c.cycles_range)},
      {"local_speed_range", range_json(c.local_speed_range)},
      {"weight_sampling", to_string(c.weight_sampling)},
      {"energy_coefficient", c.energy_coefficient},
      {"tx_power_w", c.tx_power_w},
      {"cloud_speed", c.cloud_speed},
      {"seed", c.seed},
  };
}

InstanceDocument instance_from_json(const json& doc) {
  ScenarioConfig config = config_from_json(doc);
  const bool has_users = doc.contains("users");
  const bool has_aps = doc.contains("aps");
  if (has_users != has_aps) config_error("'users' and 'aps' must be given together");

  std::optional<GameInstance> game;
  if (has_users) {
    const json& users_doc = doc.at("users");
    const json& aps_doc = doc.at("aps");
    if (!users_doc.is_array() || !aps_doc.is_array()) {
      config_error("'users' and 'aps' must be arrays");
    }
    if (doc.contains("n_users") && config.n_users != static_cast<int>(users_doc.size())) {
      config_error("n_users does not match the length of 'users'");
    }
    if (doc.contains("n_aps") && config.n_aps != static_cast<int>(aps_doc.size())) {
      config_error("n_aps does not match the length of 'aps'");
    }
    config.n_users = static_cast<int>(users_doc.size());
    config.n_aps = static_cast<int>(aps_doc.size());
    try {
      std::vector<MobileUser> users;
      for (const json& u : users_doc) users.emplace_back(user_from_json(u));
      std::vector<AccessPoint> aps;
      for (const json& a : aps_doc) {
        if (!a.is_object()) config_error("each AP must be an object");
        aps.emplace_back(field(a, "bandwidth", 0.0));
      }
      game.emplace(std::move(users), std::move(aps),
                   CloudModel{config.cloud, config.cloud_speed});
    } catch (const OffloadError& e) {
      if (e.code() == ErrorCode::kConfigError) throw;
      config_error(e.what());
    }
  } else {
    game.emplace(generate(config));
  }

  InstanceDocument out{config, std::move(*game), std::nullopt, has_users};
  if (doc.contains("initial_profile")) {
    const auto decisions =
        field(doc, "initial_profile", std::vector<Strategy>{});
    StrategyProfile profile(decisions);
    try {
      out.game.validate(profile);
    } catch (const OffloadError& e) {
      config_error(std::string("initial_profile: ") + e.what());
    }
    out.initial_profile = std::move(profile);
  }
  return out;
}

json instance_to_json(const GameInstance& game,
                      const std::optional<StrategyProfile>& initial) {
  json users = json::array();
  for (const MobileUser& u : game.users()) {
    users.push_back(json{
        {"data_bits", u.data_bits()},
        {"cycles", u.cycles()},
        {"local_speed", u.local_speed()},
        {"energy_per_cycle", u.energy_per_cycle()},
        {"tx_power", u.tx_power()},
        {"weight_time", u.weight_time()},
        {"weight_energy", u.weight_energy()},
    });
  }
  json aps = json::array();
  for (const AccessPoint& a : game.aps()) aps.push_back(json{{"bandwidth", a.bandwidth()}});
  json doc{
      {"n_users", game.num_users()},
      {"n_aps", game.num_aps()},
      {"cloud", to_string(game.cloud().kind)},
      {"cloud_speed", game.cloud().capability},
      {"users", std::move(users)},
      {"aps", std::move(aps)},
  };
  if (initial) {
    doc["initial_profile"] =
        std::vector<Strategy>(initial->decisions().begin(), initial->decisions().end());
  }
  return doc;
}

json batch_to_json(const BatchResult& result) {
  auto opt = [](const auto& v) -> json { return v ? json(*v) : json(nullptr); };
  json runs = json::array();
  for (const RunRecord& r : result.runs) {
    runs.push_back(json{
        {"model", to_string(r.model)},
        {"n_aps", r.n_aps},
        {"n_users", r.n_users},
        {"run", r.run},
        {"seed", r.seed},
        {"verified", r.verified},
        {"ne_cost", r.ne_cost},
        {"ne_offloaders", r.ne_offloaders},
        {"iterations", r.iterations},
        {"optimal_cost", opt(r.optimal_cost)},
        {"optimal_offloaders", opt(r.optimal_offloaders)},
        {"cost_ratio", opt(r.cost_ratio)},
        {"offload_difference_ratio", opt(r.offload_difference_ratio)},
        {"poa_bound", opt(r.poa_bound)},
        {"iterations_random", opt(r.iterations_random)},
        {"iterations_ratio", opt(r.iterations_ratio)},
    });
  }
  json aggregates = json::array();
  for (const AggregateRow& row : result.aggregates) {
    json metrics = json::object();
    for (const MetricSummary& m : row.metrics) {
      metrics[m.name] = json{{"mean", m.mean}, {"ci95", m.ci95}, {"samples", m.samples}};
    }
    aggregates.push_back(json{
        {"model", to_string(row.model)},
        {"n_aps", row.n_aps},
        {"n_users", row.n_users},
        {"samples", row.samples},
        {"unverified", row.unverified},
        {"metrics", std::move(metrics)},
    });
  }
  return json{{"preset", to_string(result.preset)},
              {"runs", std::move(runs)},
              {"aggregates", std::move(aggregates)}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    config_error(path.string() + ": " + e.what());
  }
}

InstanceDocument load_instance(const std::filesystem::path& path) {
  return instance_from_json(read_json_file(path));
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) config_error("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      config_error("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    config_error("cannot move output into place at " + path.string());
  }
}

}  // namespace offload
