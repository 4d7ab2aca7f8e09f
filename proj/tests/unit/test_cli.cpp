#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "offload/cli.hpp"
#include "offload/dynamics.hpp"
#include "offload/error.hpp"
#include "offload/instance_io.hpp"
#include "support/oracles.hpp"

using namespace offload;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("offload_cli_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

struct Run {
  int status = 0;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "offload");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int status = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("integer lists") {
  CHECK(cli::parse_int_list("4") == std::vector<int>{4});
  CHECK(cli::parse_int_list("2:5") == std::vector<int>{2, 3, 4, 5});
  CHECK(cli::parse_int_list("10:40:10") == std::vector<int>{10, 20, 30, 40});
  CHECK(cli::parse_int_list("10,50,100") == std::vector<int>{10, 50, 100});
  CHECK(cli::parse_int_list("1,3:4") == std::vector<int>{1, 3, 4});
  CHECK_THROWS_AS(cli::parse_int_list(""), OffloadError);
  CHECK_THROWS_AS(cli::parse_int_list("a"), OffloadError);
  CHECK_THROWS_AS(cli::parse_int_list("5:2"), OffloadError);
  CHECK(cli::parse_models("both").size() == 2);
  CHECK(cli::parse_models("elastic") == std::vector<CloudKind>{CloudKind::kElastic});
}

TEST_CASE("instance JSON round trip") {
  const CycleFixture fx = build_cycle_instance();
  const nlohmann::json doc = instance_to_json(fx.game, fx.initial);
  const InstanceDocument back = instance_from_json(doc);
  CHECK(back.explicit_players);
  CHECK(back.game == fx.game);
  REQUIRE(back.initial_profile.has_value());
  CHECK(*back.initial_profile == fx.initial);

  ScenarioConfig c;
  c.n_users = 7;
  c.cloud = CloudKind::kNonElastic;
  c.seed = 99;
  c.cycles_range = Range{0.2e9, 0.3e9};
  CHECK(config_from_json(config_to_json(c)) == c);
  const InstanceDocument gen = instance_from_json(config_to_json(c));
  CHECK_FALSE(gen.explicit_players);
  CHECK(gen.game == generate(c));

  const auto bad = [](const char* text) {
    try {
      instance_from_json(nlohmann::json::parse(text));
    } catch (const OffloadError& e) {
      return e.code() == ErrorCode::kConfigError;
    }
    return false;
  };
  CHECK(bad(R"({"n_users": "ten"})"));
  CHECK(bad(R"({"n_users": -1})"));
  CHECK(bad(R"({"cloud": "gaseous"})"));
  CHECK(bad(R"({"cycles_range": [5]})"));
  CHECK(bad(R"({"users": [{"data_bits": 1}], "aps": [{"bandwidth": 5e6}]})"));
  CHECK(bad(R"({"users": [{"data_bits": 1e6, "cycles": 1e9, "local_speed": 1e9}],
                "aps": [{"bandwidth": 5e6}], "initial_profile": [2]})"));
}

TEST_CASE("atomic writes") {
  TempDir dir;
  const fs::path target = dir.path / "out.csv";
  write_file_atomic(target, "a,b\n1,2\n");
  CHECK(slurp(target) == "a,b\n1,2\n");
  write_file_atomic(target, "replaced\n");
  CHECK(slurp(target) == "replaced\n");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir.path)) ++entries;
  CHECK(entries == 1);
  CHECK_THROWS_AS(write_file_atomic(dir.path / "missing" / "x.csv", "x"), OffloadError);
}

TEST_CASE("command exit statuses") {
  TempDir dir;

  SUBCASE("usage errors") {
    CHECK(run_cli({}).status == cli::kExitUsage);
    CHECK(run_cli({"solve", "--model", "gaseous"}).status == cli::kExitUsage);
    CHECK(run_cli({"solve", "--instance", (dir.path / "nope.json").string()}).status ==
          cli::kExitUsage);
    CHECK(run_cli({"solve", "--model", "elastic", "--solver", "inductive"}).status ==
          cli::kExitUsage);
  }

  SUBCASE("reproduce-cycle") {
    const fs::path csv = dir.path / "cycle.csv";
    const Run r = run_cli({"reproduce-cycle", "--out", csv.string()});
    CHECK(r.status == cli::kExitOk);
    CHECK(r.err.find("steps=9") != std::string::npos);
    CHECK(fs::exists(csv));
  }

  SUBCASE("solve on a fixture and on a single user") {
    const fs::path inst = dir.path / "cycle.json";
    const CycleFixture fx = build_cycle_instance();
    write_file_atomic(inst, instance_to_json(fx.game, fx.initial).dump());
    for (const char* solver : {"inductive", "dynamics"}) {
      const Run r = run_cli({"solve", "--instance", inst.string(), "--solver", solver});
      CHECK(r.status == cli::kExitOk);
      CHECK(r.out.find("verdict   equilibrium") != std::string::npos);
    }

    const Run one = run_cli({"solve", "--n-users", "1", "--model", "nonelastic",
                             "--seed", "3"});
    CHECK(one.status == cli::kExitOk);
    CHECK(one.err.find("iterations=0") != std::string::npos);
  }

  SUBCASE("poa") {
    CHECK(run_cli({"poa", "--n-users", "1", "--seed", "2"}).status == cli::kExitOk);
    CHECK(run_cli({"poa", "--n-users", "30", "--n-aps", "3"}).status ==
          cli::kExitTooLarge);
    CHECK(run_cli({"poa", "--n-users", "300", "--n-aps", "3", "--bound-only"}).status ==
          cli::kExitOk);
    const fs::path out = dir.path / "sweep.csv";
    const Run sweep = run_cli({"poa", "--sweep", "--users", "2:4", "--reps", "10",
                               "--out", out.string()});
    CHECK(sweep.status == cli::kExitOk);
    CHECK(fs::exists(out));
  }

  SUBCASE("simulate writes identical CSV twice and nothing on failure") {
    const fs::path a = dir.path / "a.csv";
    const fs::path b = dir.path / "b.csv";
    const std::vector<std::string> common{"simulate", "--preset", "offload-ratio",
                                          "--users", "2:4", "--reps", "8",
                                          "--seed", "5"};
    auto first = common;
    first.insert(first.end(), {"--out", a.string()});
    auto second = common;
    second.insert(second.end(), {"--out", b.string(), "--jobs", "3"});
    CHECK(run_cli(first).status == cli::kExitOk);
    CHECK(run_cli(second).status == cli::kExitOk);
    CHECK(slurp(a) == slurp(b));

    const fs::path c = dir.path / "c.csv";
    CHECK(run_cli({"simulate", "--preset", "cost-ratio", "--users", "40", "--reps", "1",
                   "--out", c.string()})
              .status == cli::kExitTooLarge);
    CHECK_FALSE(fs::exists(c));
  }

  SUBCASE("generate then solve") {
    const fs::path inst = dir.path / "gen.json";
    CHECK(run_cli({"generate", "--n-users", "6", "--model", "nonelastic", "--seed",
                   "12", "--out", inst.string()})
              .status == cli::kExitOk);
    const InstanceDocument doc = load_instance(inst);
    CHECK(doc.game.num_users() == 6);
    CHECK(run_cli({"solve", "--instance", inst.string()}).status == cli::kExitOk);
  }
}
