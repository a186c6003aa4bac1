#include "sces/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <thread>

#include "sces/diagnostics.hpp"

namespace sces {

void EngineConfig::validate() const {
  if (lambda_prime < 1 || lambda < lambda_prime)
    throw ConfigError("engine: require lambda >= lambda_prime >= 1");
  if (psi == PsiKind::GuidedAntithetic && lambda != 2 * lambda_prime)
    throw ConfigError("engine: guided recombination requires lambda = 2 * lambda_prime");
  if (mirrored && lambda % 2 != 0)
    throw ConfigError("engine: mirrored sampling requires an even lambda");
  if (gamma_up < 1.0) throw ConfigError("engine: gamma_up must be at least 1");
  if (step_mode == StepMode::Theoretical && gamma_up <= 1.0)
    throw ConfigError("engine: theoretical step mode requires gamma_up > 1");
  if (gamma_down <= 0.0 || gamma_down > 1.0) throw ConfigError("engine: gamma_down must lie in (0, 1]");
  if (sigma_min <= 0.0 || sigma_max < sigma_min)
    throw ConfigError("engine: require 0 < sigma_min <= sigma_max");
  if (sigma0 <= 0.0 || sigma_es0 <= 0.0) throw ConfigError("engine: initial step sizes must be positive");
  if (kappa <= 0.0) throw ConfigError("engine: kappa must be positive");
  if (d_max <= 0.0) throw ConfigError("engine: d_max must be positive");
  if (eps_c <= 0.0) throw ConfigError("engine: eps_c must be positive");
  if (alpha < 0.0 || alpha > 1.0) throw ConfigError("engine: alpha must lie in [0, 1]");
  if (beta <= 0.0) throw ConfigError("engine: beta must be positive");
  if (m < 1) throw ConfigError("engine: m must be at least 1");
  if (budget < 0) throw ConfigError("engine: budget must be non-negative");
  if (threads < 1) throw ConfigError("engine: threads must be at least 1");
}

namespace {

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!failed.exchange(true)) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int n = std::min(threads, count);
  pool.reserve(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (failed.load()) std::rethrow_exception(error);
}

}  // namespace

SearchState init_state(const RunSettings& settings, const ConstrainedProblem& problem,
                       std::uint64_t seed) {
  settings.engine.validate();
  settings.schedule.validate();
  if (problem.dimension < 1 || problem.initial_point.size() != problem.dimension)
    throw ConfigError("problem: initial point does not match dimension");
  const EngineConfig& cfg = settings.engine;
  RandomStream stream = RandomStream(seed).substream(stream_tag::kInit);
  const Real v = problem.oracle.variance_bound.value_or(1.0);
  Estimate est;
  try {
    est = estimate_point(problem.initial_point, cfg.sigma0, problem.oracle, settings.schedule, v,
                         stream);
  } catch (const EvaluationError& e) {
    throw NonFiniteObjective(std::string("init: ") + e.what());
  }
  for (Index i = 0; i < est.c.size(); ++i) {
    if (est.c[i] > cfg.eps_c * cfg.sigma0)
      throw InfeasibleStart("init: constraint estimate exceeds eps_c * sigma0");
  }
  if (!std::isfinite(est.f)) throw NonFiniteObjective("init: objective estimate not finite");
  SearchState state;
  state.x = problem.initial_point;
  state.sigma = cfg.sigma0;
  state.sigma_es = cfg.sigma_es0;
  state.f_incumbent = est.f;
  state.iteration = 0;
  state.rng_seed = seed;
  return state;
}

std::vector<Offspring> generate_offspring(const SearchState& state, const GesDistribution& dist,
                                          int lambda, bool mirrored, RandomStream& stream) {
  if (lambda < 1) throw DomainError("generate_offspring: lambda must be positive");
  if (mirrored && lambda % 2 != 0)
    throw DomainError("generate_offspring: mirrored sampling requires even lambda");
  std::vector<Vector> directions;
  if (mirrored) {
    std::vector<Vector> base;
    base.reserve(static_cast<std::size_t>(lambda / 2));
    for (int i = 0; i < lambda / 2; ++i) base.push_back(sample_direction(dist, stream));
    directions = mirrored_pairs(base);
  } else {
    directions.reserve(static_cast<std::size_t>(lambda));
    for (int i = 0; i < lambda; ++i) directions.push_back(sample_direction(dist, stream));
  }
  std::vector<Offspring> offspring(static_cast<std::size_t>(lambda));
  for (int i = 0; i < lambda; ++i) {
    Offspring& o = offspring[static_cast<std::size_t>(i)];
    o.direction = std::move(directions[static_cast<std::size_t>(i)]);
    o.point = state.x + state.sigma_es * o.direction;
    o.index = i;
  }
  return offspring;
}

std::vector<Offspring> rank_offspring(std::vector<Offspring> offspring) {
  std::sort(offspring.begin(), offspring.end(), [](const Offspring& a, const Offspring& b) {
    if (a.barrier < b.barrier) return true;
    if (b.barrier < a.barrier) return false;
    return a.index < b.index;
  });
  return offspring;
}

Vector recombine(const std::vector<Offspring>& population, const std::vector<Offspring>& ranked,
                 const EngineConfig& config, Real sigma_es) {
  Vector d;
  if (config.psi == PsiKind::WeightedAverage) {
    std::vector<Vector> selected;
    const int take = std::min<int>(config.lambda_prime, static_cast<int>(ranked.size()));
    for (int i = 0; i < take; ++i) {
      if (ranked[static_cast<std::size_t>(i)].barrier.is_finite())
        selected.push_back(ranked[static_cast<std::size_t>(i)].direction);
    }
    if (selected.empty()) throw AllInfeasible("recombine: selected set entirely infeasible");
    d = psi_average(selected, log_rank_weights(static_cast<int>(selected.size())));
  } else {
    const std::size_t pairs = population.size() / 2;
    std::vector<Vector> directions;
    std::vector<std::pair<BarrierValue, BarrierValue>> values;
    directions.reserve(pairs);
    values.reserve(pairs);
    for (std::size_t i = 0; i < pairs; ++i) {
      directions.push_back(population[i].direction);
      values.emplace_back(population[i].barrier, population[i + pairs].barrier);
    }
    d = psi_guided(directions, values, sigma_es, config.beta, config.lambda);
  }
  const Real norm = d.norm();
  if (norm > config.d_max) d *= config.d_max / norm;
  return d;
}

void apply_step_update(SearchState& state, bool success, const EngineConfig& config) {
  Real next;
  if (config.step_mode == StepMode::Practical) {
    next = success ? std::min(config.gamma_up * state.sigma, config.sigma_max)
                   : std::max(config.gamma_down * state.sigma, config.sigma_min);
  } else {
    next = success ? config.gamma_up * state.sigma : state.sigma / config.gamma_up;
  }
  state.sigma_es *= next / state.sigma;
  state.sigma = next;
}

TrialResult trial_and_accept(SearchState& state, const Vector& d,
                             const std::function<BarrierValue(const Vector&)>& barrier_at,
                             const EngineConfig& config) {
  TrialResult result;
  result.trial_point = state.x + state.sigma * d;
  result.barrier = barrier_at(result.trial_point);
  const Real threshold = state.f_incumbent - 0.5 * config.kappa * state.sigma * state.sigma;
  result.success = result.barrier.is_finite() && result.barrier.value() <= threshold;
  if (result.success) {
    state.x = result.trial_point;
    state.f_incumbent = result.barrier.value();
  }
  apply_step_update(state, result.success, config);
  return result;
}

RunResult run(const RunSettings& settings, const ConstrainedProblem& problem, std::uint64_t seed,
              const TrialObserver& observer) {
  const EngineConfig& cfg = settings.engine;
  SearchState state = init_state(settings, problem, seed);

  if (cfg.surrogate == SurrogateSource::ProblemGradient && !problem.surrogate_gradient)
    throw ConfigError("engine: problem supplies no surrogate gradient");

  const bool guided = cfg.psi == PsiKind::GuidedAntithetic;
  const bool mirrored = guided ? true : cfg.mirrored;
  const bool pull_gradients = guided && cfg.surrogate == SurrogateSource::ProblemGradient;
  const int warmup = pull_gradients ? cfg.m : 0;

  SurrogateBuffer buffer(cfg.m, problem.dimension);
  const GesDistribution dist{cfg.alpha, problem.dimension, &buffer};
  RandomStream root(seed);
  VarianceEstimator variance;

  RunResult result;
  result.trace.reserve(static_cast<std::size_t>(cfg.budget));

  for (int k = 0; k < cfg.budget; ++k) {
    const auto t_start = std::chrono::steady_clock::now();
    long long samples = 0;
    bool success = false;
    std::optional<bool> acc_event;

    if (k < warmup) {
      // Parameters stay frozen while the surrogate buffer fills.
      RandomStream s = root.substream(stream_tag::kSurrogate, static_cast<std::uint64_t>(k));
      buffer.push(problem.surrogate_gradient(state.x, s));
      if (observer) observer({k, state.sigma, state.f_incumbent, false, BarrierValue(), false});
    } else {
      const Real v = problem.oracle.variance_bound.value_or(variance.bound());
      RandomStream dir_stream =
          root.substream(stream_tag::kDirection, static_cast<std::uint64_t>(k));
      std::vector<Offspring> offspring =
          generate_offspring(state, dist, cfg.lambda, mirrored, dir_stream);

      std::vector<Estimate> estimates(offspring.size());
      std::vector<char> failed(offspring.size(), 0);
      const Real sigma_k = state.sigma;
      parallel_for(static_cast<int>(offspring.size()), cfg.threads, [&](int i) {
        RandomStream s = root.substream(stream_tag::kEvaluation, static_cast<std::uint64_t>(k),
                                        static_cast<std::uint64_t>(i));
        auto& o = offspring[static_cast<std::size_t>(i)];
        try {
          estimates[static_cast<std::size_t>(i)] =
              estimate_point(o.point, sigma_k, problem.oracle, settings.schedule, v, s);
          const Estimate& e = estimates[static_cast<std::size_t>(i)];
          o.barrier = adjusted_barrier(e.f, e.c, cfg.eps_c, sigma_k);
        } catch (const EvaluationError&) {
          o.barrier = BarrierValue::infeasible();  // hidden-constraint outcome
          failed[static_cast<std::size_t>(i)] = 1;
        }
      });
      for (std::size_t i = 0; i < offspring.size(); ++i) {
        if (!failed[i]) samples += estimates[i].n;
      }

      std::optional<Vector> d;
      try {
        d = recombine(offspring, rank_offspring(offspring), cfg, state.sigma_es);
      } catch (const AllInfeasible&) {
        d.reset();
      }

      const Vector x_before = state.x;
      const Real sigma_before = state.sigma;
      const Real f_before = state.f_incumbent;

      if (d) {
        RandomStream trial_stream =
            root.substream(stream_tag::kTrial, static_cast<std::uint64_t>(k));
        Estimate trial_est;
        bool trial_failed = false;
        auto barrier_at = [&](const Vector& y) -> BarrierValue {
          try {
            trial_est =
                estimate_point(y, sigma_before, problem.oracle, settings.schedule, v, trial_stream);
            return adjusted_barrier(trial_est.f, trial_est.c, cfg.eps_c, sigma_before);
          } catch (const EvaluationError&) {
            trial_failed = true;
            return BarrierValue::infeasible();
          }
        };
        const TrialResult trial = trial_and_accept(state, *d, barrier_at, cfg);
        success = trial.success;
        if (!trial_failed) {
          samples += trial_est.n;
          variance.merge(trial_est.f, trial_est.f_m2, trial_est.n);
          if (problem.has_exact_objective()) {
            acc_event = accuracy_event(f_before, trial_est.f, problem.exact_objective(x_before),
                                       problem.exact_objective(trial.trial_point),
                                       settings.schedule.eps_f, sigma_before);
          }
        }
        if (observer) observer({k, sigma_before, f_before, true, trial.barrier, success});
        if (success && guided && cfg.surrogate == SurrogateSource::PrevUpdates) buffer.push(*d);
      } else {
        apply_step_update(state, false, cfg);
        if (observer) observer({k, sigma_before, f_before, false, BarrierValue(), false});
      }

      for (std::size_t i = 0; i < offspring.size(); ++i) {
        if (!failed[i]) variance.merge(estimates[i].f, estimates[i].f_m2, estimates[i].n);
      }
      if (pull_gradients) {
        RandomStream s = root.substream(stream_tag::kSurrogate, static_cast<std::uint64_t>(k));
        buffer.push(problem.surrogate_gradient(state.x, s));
      }
    }

    state.iteration = k + 1;

    TraceRecord rec;
    rec.iteration = k;
    rec.sigma = state.sigma;
    rec.sigma_es = state.sigma_es;
    rec.success = success;
    rec.f_est = state.f_incumbent;
    rec.samples = samples;
    rec.accuracy_event = acc_event;
    if (problem.has_exact_objective()) {
      const Real fx = problem.exact_objective(state.x);
      rec.f_exact = fx;
      rec.lyapunov = lyapunov(fx, state.sigma, settings.nu);
    }
    if (problem.exact_constraints.has_value())
      rec.violation = violation(problem.exact_constraints->evaluate(state.x));
    if (cfg.record_timing) {
      rec.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t_start)
                        .count();
    }
    result.trace.push_back(std::move(rec));
  }

  result.final_state = std::move(state);
  return result;
}

}  // namespace sces
