#include "sces/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace sces {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::string& prefix) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key))
      throw ConfigError("config: unknown key '" + prefix + key + "'");
  }
}

template <typename T>
T get_required(const json& obj, const std::string& key, const std::string& prefix) {
  if (!obj.contains(key)) throw ConfigError("config: missing required key '" + prefix + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config: bad value for '" + prefix + key + "'");
  }
}

template <typename T>
void get_optional(const json& obj, const std::string& key, const std::string& prefix, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config: bad value for '" + prefix + key + "'");
  }
}

PsiKind parse_psi(const std::string& s) {
  if (s == "weighted_average") return PsiKind::WeightedAverage;
  if (s == "guided_antithetic") return PsiKind::GuidedAntithetic;
  throw ConfigError("config: bad value for 'engine.psi'");
}

StepMode parse_step_mode(const std::string& s) {
  if (s == "practical") return StepMode::Practical;
  if (s == "theoretical") return StepMode::Theoretical;
  throw ConfigError("config: bad value for 'engine.step_mode'");
}

SurrogateSource parse_surrogate(const std::string& s) {
  if (s == "prev_updates") return SurrogateSource::PrevUpdates;
  if (s == "problem_gradient") return SurrogateSource::ProblemGradient;
  throw ConfigError("config: bad value for 'engine.surrogate'");
}

ScheduleMode parse_schedule_mode(const std::string& s) {
  if (s == "theoretical") return ScheduleMode::Theoretical;
  if (s == "fixed_batch") return ScheduleMode::FixedBatch;
  if (s == "capped") return ScheduleMode::Capped;
  throw ConfigError("config: bad value for 'schedule.mode'");
}

std::string psi_name(PsiKind k) {
  return k == PsiKind::WeightedAverage ? "weighted_average" : "guided_antithetic";
}
std::string step_mode_name(StepMode m) {
  return m == StepMode::Practical ? "practical" : "theoretical";
}
std::string surrogate_name(SurrogateSource s) {
  return s == SurrogateSource::PrevUpdates ? "prev_updates" : "problem_gradient";
}
std::string schedule_mode_name(ScheduleMode m) {
  switch (m) {
    case ScheduleMode::Theoretical: return "theoretical";
    case ScheduleMode::FixedBatch: return "fixed_batch";
    case ScheduleMode::Capped: return "capped";
  }
  return "fixed_batch";
}

}  // namespace

RunConfig parse_config_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");
  require_keys(root, {"problem", "engine", "schedule", "nu"}, "");

  RunConfig cfg;
  cfg.problem = get_required<std::string>(root, "problem", "");
  get_optional(root, "nu", "", cfg.settings.nu);
  if (cfg.settings.nu <= 0.0 || cfg.settings.nu >= 1.0)
    throw ConfigError("config: 'nu' must lie in (0, 1)");

  if (!root.contains("engine")) throw ConfigError("config: missing required key 'engine'");
  const json& eng = root.at("engine");
  if (!eng.is_object()) throw ConfigError("config: 'engine' must be an object");
  require_keys(eng,
               {"lambda", "lambda_prime", "gamma_up", "gamma_down", "sigma0", "sigma_min",
                "sigma_max", "sigma_es0", "kappa", "d_max", "eps_c", "psi", "beta", "alpha", "m",
                "budget", "mirrored", "step_mode", "surrogate", "threads", "record_timing"},
               "engine.");
  EngineConfig& e = cfg.settings.engine;
  e.lambda = get_required<int>(eng, "lambda", "engine.");
  e.lambda_prime = get_required<int>(eng, "lambda_prime", "engine.");
  e.budget = get_required<int>(eng, "budget", "engine.");
  get_optional(eng, "gamma_up", "engine.", e.gamma_up);
  get_optional(eng, "gamma_down", "engine.", e.gamma_down);
  get_optional(eng, "sigma0", "engine.", e.sigma0);
  get_optional(eng, "sigma_min", "engine.", e.sigma_min);
  get_optional(eng, "sigma_max", "engine.", e.sigma_max);
  get_optional(eng, "sigma_es0", "engine.", e.sigma_es0);
  get_optional(eng, "kappa", "engine.", e.kappa);
  get_optional(eng, "d_max", "engine.", e.d_max);
  get_optional(eng, "eps_c", "engine.", e.eps_c);
  get_optional(eng, "beta", "engine.", e.beta);
  get_optional(eng, "alpha", "engine.", e.alpha);
  get_optional(eng, "m", "engine.", e.m);
  get_optional(eng, "mirrored", "engine.", e.mirrored);
  get_optional(eng, "threads", "engine.", e.threads);
  get_optional(eng, "record_timing", "engine.", e.record_timing);
  if (eng.contains("psi")) e.psi = parse_psi(get_required<std::string>(eng, "psi", "engine."));
  if (eng.contains("step_mode"))
    e.step_mode = parse_step_mode(get_required<std::string>(eng, "step_mode", "engine."));
  if (eng.contains("surrogate"))
    e.surrogate = parse_surrogate(get_required<std::string>(eng, "surrogate", "engine."));

  if (!root.contains("schedule")) throw ConfigError("config: missing required key 'schedule'");
  const json& sch = root.at("schedule");
  if (!sch.is_object()) throw ConfigError("config: 'schedule' must be an object");
  require_keys(sch, {"mode", "eps_f", "p", "n_fixed", "n_cap"}, "schedule.");
  AccuracySchedule& s = cfg.settings.schedule;
  s.mode = parse_schedule_mode(get_required<std::string>(sch, "mode", "schedule."));
  get_optional(sch, "eps_f", "schedule.", s.eps_f);
  get_optional(sch, "p", "schedule.", s.p);
  get_optional(sch, "n_fixed", "schedule.", s.n_fixed);
  get_optional(sch, "n_cap", "schedule.", s.n_cap);

  e.validate();
  s.validate();
  return cfg;
}

std::string config_to_json(const RunConfig& config) {
  const EngineConfig& e = config.settings.engine;
  const AccuracySchedule& s = config.settings.schedule;
  json root;
  root["problem"] = config.problem;
  root["nu"] = config.settings.nu;
  root["engine"] = {
      {"lambda", e.lambda},
      {"lambda_prime", e.lambda_prime},
      {"gamma_up", e.gamma_up},
      {"gamma_down", e.gamma_down},
      {"sigma0", e.sigma0},
      {"sigma_min", e.sigma_min},
      {"sigma_max", e.sigma_max},
      {"sigma_es0", e.sigma_es0},
      {"kappa", e.kappa},
      {"d_max", e.d_max},
      {"eps_c", e.eps_c},
      {"psi", psi_name(e.psi)},
      {"beta", e.beta},
      {"alpha", e.alpha},
      {"m", e.m},
      {"budget", e.budget},
      {"mirrored", e.mirrored},
      {"step_mode", step_mode_name(e.step_mode)},
      {"surrogate", surrogate_name(e.surrogate)},
      {"threads", e.threads},
      {"record_timing", e.record_timing},
  };
  root["schedule"] = {
      {"mode", schedule_mode_name(s.mode)}, {"eps_f", s.eps_f},   {"p", s.p},
      {"n_fixed", s.n_fixed},               {"n_cap", s.n_cap},
  };
  return root.dump(2) + "\n";
}

RunConfig read_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IOError("config: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_json(buffer.str());
}

void write_config(const RunConfig& config, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IOError("config: cannot open '" + path + "' for writing");
  out << config_to_json(config);
  if (!out) throw IOError("config: write failed for '" + path + "'");
}

}  // namespace sces
