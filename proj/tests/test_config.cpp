#include <doctest.h>

#include <filesystem>

#include "sces/config.hpp"

using namespace sces;

namespace {

RunConfig sample_config() {
  RunConfig cfg;
  cfg.problem = "noisy-sphere-10";
  cfg.settings.engine.budget = 123;
  cfg.settings.engine.psi = PsiKind::WeightedAverage;
  cfg.settings.engine.step_mode = StepMode::Theoretical;
  cfg.settings.engine.sigma0 = 0.7;
  cfg.settings.schedule.mode = ScheduleMode::Capped;
  cfg.settings.schedule.n_cap = 777;
  cfg.settings.nu = 0.9;
  return cfg;
}

bool settings_equal(const RunConfig& a, const RunConfig& b) {
  const EngineConfig &x = a.settings.engine, &y = b.settings.engine;
  const AccuracySchedule &sa = a.settings.schedule, &sb = b.settings.schedule;
  return a.problem == b.problem && a.settings.nu == b.settings.nu && x.lambda == y.lambda &&
         x.lambda_prime == y.lambda_prime && x.gamma_up == y.gamma_up &&
         x.gamma_down == y.gamma_down && x.sigma0 == y.sigma0 && x.sigma_min == y.sigma_min &&
         x.sigma_max == y.sigma_max && x.sigma_es0 == y.sigma_es0 && x.kappa == y.kappa &&
         x.d_max == y.d_max && x.eps_c == y.eps_c && x.psi == y.psi && x.beta == y.beta &&
         x.alpha == y.alpha && x.m == y.m && x.budget == y.budget && x.mirrored == y.mirrored &&
         x.step_mode == y.step_mode && x.surrogate == y.surrogate && x.threads == y.threads &&
         x.record_timing == y.record_timing && sa.mode == sb.mode && sa.eps_f == sb.eps_f &&
         sa.p == sb.p && sa.n_fixed == sb.n_fixed && sa.n_cap == sb.n_cap;
}

}  // namespace

TEST_CASE("config round trips through JSON") {
  const RunConfig original = sample_config();
  const RunConfig parsed = parse_config_json(config_to_json(original));
  CHECK(settings_equal(original, parsed));
}

TEST_CASE("config round trips through disk") {
  const std::string path = (std::filesystem::temp_directory_path() / "sces_cfg.json").string();
  const RunConfig original = sample_config();
  write_config(original, path);
  CHECK(settings_equal(original, read_config(path)));
  std::filesystem::remove(path);
}

TEST_CASE("missing required keys are reported by name") {
  const std::string text = R"({
    "problem": "noisy-sphere-10",
    "engine": {"lambda_prime": 20, "budget": 100},
    "schedule": {"mode": "fixed_batch"}
  })";
  CHECK_THROWS_WITH_AS(parse_config_json(text),
                       "config: missing required key 'engine.lambda'", ConfigError);
}

TEST_CASE("unknown keys are rejected with their path") {
  const std::string text = R"({
    "problem": "noisy-sphere-10",
    "engine": {"lambda": 40, "lambda_prime": 20, "budget": 100, "lambdaa": 1},
    "schedule": {"mode": "fixed_batch"}
  })";
  CHECK_THROWS_WITH_AS(parse_config_json(text), "config: unknown key 'engine.lambdaa'",
                       ConfigError);
  const std::string top = R"({"problem": "x", "engine": {}, "schedule": {}, "extra": 3})";
  CHECK_THROWS_WITH_AS(parse_config_json(top), "config: unknown key 'extra'", ConfigError);
}

TEST_CASE("bad enum strings and invalid JSON raise ConfigError") {
  CHECK_THROWS_AS(parse_config_json("not json at all"), ConfigError);
  const std::string text = R"({
    "problem": "noisy-sphere-10",
    "engine": {"lambda": 40, "lambda_prime": 20, "budget": 100, "psi": "median"},
    "schedule": {"mode": "fixed_batch"}
  })";
  CHECK_THROWS_AS(parse_config_json(text), ConfigError);
}

TEST_CASE("parsed configs are validated") {
  const std::string text = R"({
    "problem": "noisy-sphere-10",
    "engine": {"lambda": 10, "lambda_prime": 20, "budget": 100},
    "schedule": {"mode": "fixed_batch"}
  })";
  CHECK_THROWS_AS(parse_config_json(text), ConfigError);
}

TEST_CASE("missing config file raises IOError") {
  CHECK_THROWS_AS(read_config("/nonexistent/sces.json"), IOError);
}
