#include "sces/harness.hpp"

#include <cmath>

#include "sces/problems.hpp"

namespace sces {

RunConfig preset(const std::string& suite) {
  RunConfig cfg;
  if (suite == "sphere") {
    cfg.problem = "noisy-sphere-10";
    cfg.settings.engine.budget = 2000;
    return cfg;
  }
  if (suite == "constrained-quadratic") {
    // boundary optimum: tight offspring cloud, fine late steps, near-exact
    // barrier tolerance
    cfg.problem = "constrained-quadratic";
    EngineConfig& e = cfg.settings.engine;
    e.psi = PsiKind::WeightedAverage;
    e.mirrored = true;
    e.eps_c = 1e-6;
    e.sigma_es0 = 0.3;
    e.sigma_min = 0.003;
    e.budget = 2500;
    cfg.settings.schedule.n_fixed = 100;
    return cfg;
  }
  if (suite == "theory-sphere") {
    // symmetric unclamped steps at moderate sigma, theoretical batch sizes
    cfg.problem = "noisy-sphere-4-sd0.005";
    EngineConfig& e = cfg.settings.engine;
    e.psi = PsiKind::WeightedAverage;
    e.mirrored = true;
    e.step_mode = StepMode::Theoretical;
    e.sigma0 = 1.0;
    e.sigma_es0 = 1.0;
    e.budget = 120;
    cfg.settings.schedule.mode = ScheduleMode::Theoretical;
    cfg.settings.schedule.eps_f = 0.001;
    cfg.settings.schedule.p = 0.75;
    cfg.settings.nu = 0.95;
    return cfg;
  }
  if (suite == "chain-entropy") {
    // unit-scale rollout noise: larger batches, wider step clamp
    cfg.problem = "chain-entropy";
    EngineConfig& e = cfg.settings.engine;
    e.psi = PsiKind::WeightedAverage;
    e.mirrored = true;
    e.sigma0 = 0.8;
    e.sigma_max = 0.8;
    e.sigma_min = 0.01;
    e.budget = 1000;
    cfg.settings.schedule.n_fixed = 150;
    return cfg;
  }
  if (suite == "grid-cmdp") {
    // sparse corner-to-corner reward: guided subspace over policy gradients
    cfg.problem = "grid-cmdp";
    EngineConfig& e = cfg.settings.engine;
    e.psi = PsiKind::GuidedAntithetic;
    e.surrogate = SurrogateSource::ProblemGradient;
    e.sigma0 = 0.8;
    e.sigma_max = 0.8;
    e.sigma_min = 0.05;
    e.gamma_down = 0.995;
    e.budget = 450;
    cfg.settings.schedule.n_fixed = 150;
    return cfg;
  }
  throw ConfigError("bench: unknown suite '" + suite + "'");
}

std::vector<std::string> preset_names() {
  return {"sphere", "constrained-quadratic", "theory-sphere", "chain-entropy", "grid-cmdp"};
}

RunResult run_config(const RunConfig& config, std::uint64_t seed) {
  const ConstrainedProblem problem = make_problem(config.problem);
  return run(config.settings, problem, seed);
}

AccuracyAudit check_accuracy(const RunConfig& config, long long iterations, std::uint64_t seed) {
  if (iterations < 1) throw ConfigError("check-accuracy: iterations must be positive");
  const ConstrainedProblem problem = make_problem(config.problem);
  if (!problem.has_exact_objective())
    throw ConfigError("check-accuracy: problem lacks exact references");
  const AccuracySchedule& schedule = config.settings.schedule;
  schedule.validate();
  if (schedule.mode != ScheduleMode::FixedBatch && !problem.oracle.variance_bound.has_value())
    throw ConfigError("check-accuracy: schedule needs a declared variance bound");
  const Real v = problem.oracle.variance_bound.value_or(1.0);
  const Real sigma = config.settings.engine.sigma0;
  const Real eps_c = config.settings.engine.eps_c;
  const Vector& x0 = problem.initial_point;
  const bool with_constraints =
      problem.oracle.constraint_count > 0 && problem.exact_constraints.has_value();

  RandomStream root(seed);
  long long f_hits = 0;
  long long c_hits = 0;
  for (long long i = 0; i < iterations; ++i) {
    RandomStream iter_stream = root.substream(0xAC, static_cast<std::uint64_t>(i));
    RandomStream dir_stream = iter_stream.substream(1);
    RandomStream est0_stream = iter_stream.substream(2);
    RandomStream est1_stream = iter_stream.substream(3);
    const Vector step = sigma / std::sqrt(static_cast<Real>(problem.dimension)) *
                        dir_stream.gaussian_vector(problem.dimension);
    const Vector x1 = x0 + step;
    const Estimate e0 = estimate_point(x0, sigma, problem.oracle, schedule, v, est0_stream);
    const Estimate e1 = estimate_point(x1, sigma, problem.oracle, schedule, v, est1_stream);
    if (accuracy_event(e0.f, e1.f, problem.exact_objective(x0), problem.exact_objective(x1),
                       schedule.eps_f, sigma))
      ++f_hits;
    if (with_constraints &&
        constraint_accuracy_event(e0.c, e1.c, problem.exact_constraints->evaluate(x0),
                                  problem.exact_constraints->evaluate(x1), eps_c, sigma))
      ++c_hits;
  }

  const Real slack = std::sqrt(std::log(100.0) / (2.0 * static_cast<Real>(iterations)));
  AccuracyAudit audit;
  audit.iterations = iterations;
  audit.f_frequency = static_cast<Real>(f_hits) / static_cast<Real>(iterations);
  audit.f_lower_bound = audit.f_frequency - slack;
  audit.has_constraints = with_constraints;
  if (with_constraints) {
    audit.c_frequency = static_cast<Real>(c_hits) / static_cast<Real>(iterations);
    audit.c_lower_bound = audit.c_frequency - slack;
  }
  audit.target_p = schedule.p;
  audit.pass = audit.f_lower_bound >= schedule.p;
  return audit;
}

}  // namespace sces
