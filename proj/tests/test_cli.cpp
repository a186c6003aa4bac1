#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "sces/harness.hpp"

using namespace sces;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / fs::path("sces_cli_test")) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int invoke(std::vector<std::string> args) {
  std::vector<char*> argv;
  args.insert(args.begin(), "sces");
  argv.reserve(args.size());
  for (std::string& a : args) argv.push_back(a.data());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

RunConfig tiny_config() {
  RunConfig cfg;
  cfg.problem = "noisy-sphere-2";
  cfg.settings.engine.budget = 20;
  return cfg;
}

}  // namespace

TEST_CASE("run subcommand writes a readable trace and exits 0") {
  TempDir dir;
  const std::string cfg_path = dir.file("cfg.json");
  const std::string out_path = dir.file("trace.csv");
  write_config(tiny_config(), cfg_path);
  CHECK(invoke({"run", "--config", cfg_path, "--seed", "3", "--out", out_path}) == 0);
  CHECK(read_trace(out_path).size() == 20);
}

TEST_CASE("config problems exit with code 1") {
  TempDir dir;
  const std::string cfg_path = dir.file("bad.json");
  std::ofstream(cfg_path) << "{\"problem\": \"noisy-sphere-2\"}";
  CHECK(invoke({"run", "--config", cfg_path, "--seed", "1", "--out", dir.file("t.csv")}) == 1);
  // missing required CLI option is also a config error
  CHECK(invoke({"run", "--seed", "1", "--out", dir.file("t.csv")}) == 1);
  CHECK(invoke({"definitely-not-a-subcommand"}) == 1);
}

TEST_CASE("runtime problems exit with code 2") {
  TempDir dir;
  // unreadable trace directory for the audit
  CHECK(invoke({"audit-lyapunov", "--traces", dir.file("missing"), "--nu", "0.95"}) == 2);
  // too few traces for the audit
  fs::create_directories(dir.file("traces"));
  write_trace({}, dir.file("traces") + "/t0.csv");
  CHECK(invoke({"audit-lyapunov", "--traces", dir.file("traces"), "--nu", "0.95"}) == 2);
  // config parses but the output path cannot be written
  const std::string cfg_path = dir.file("cfg.json");
  write_config(tiny_config(), cfg_path);
  CHECK(invoke({"run", "--config", cfg_path, "--seed", "1", "--out",
                dir.file("no_dir") + "/t.csv"}) == 2);
}

TEST_CASE("bench writes one trace per seed") {
  TempDir dir;
  // use the cheapest preset with a reduced seed count via --seeds
  CHECK(invoke({"bench", "--suite", "theory-sphere", "--seeds", "2", "--out-dir",
                dir.file("out")}) == 0);
  CHECK(fs::exists(dir.file("out") + "/trace_theory-sphere_seed0.csv"));
  CHECK(fs::exists(dir.file("out") + "/trace_theory-sphere_seed1.csv"));
  CHECK(invoke({"bench", "--suite", "nope", "--seeds", "1", "--out-dir", dir.file("o2")}) == 1);
}

TEST_CASE("check-accuracy reports a passing audit on a known-variance oracle") {
  TempDir dir;
  RunConfig cfg;
  cfg.problem = "noisy-sphere-2-sd1.0";
  cfg.settings.engine.budget = 1;
  cfg.settings.engine.sigma0 = 1.0;
  cfg.settings.schedule.mode = ScheduleMode::Theoretical;
  cfg.settings.schedule.eps_f = 0.5;
  cfg.settings.schedule.p = 0.75;
  const std::string cfg_path = dir.file("acc.json");
  write_config(cfg, cfg_path);
  CHECK(invoke({"check-accuracy", "--config", cfg_path, "--iters", "200"}) == 0);
}

TEST_CASE("audit-lyapunov runs on bench output") {
  TempDir dir;
  const RunConfig cfg = preset("theory-sphere");
  for (int seed = 0; seed < 10; ++seed) {
    RunConfig shortened = cfg;
    shortened.settings.engine.budget = 30;
    const RunResult r = run_config(shortened, static_cast<std::uint64_t>(seed));
    write_trace(r.trace, dir.file("t" + std::to_string(seed) + ".csv"));
  }
  CHECK(invoke({"audit-lyapunov", "--traces", dir.path.string(), "--nu", "0.95"}) == 0);
}
