#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "sces/guided.hpp"
#include "sces/oracles.hpp"
#include "sces/problems.hpp"
#include "sces/trace.hpp"

namespace sces {

enum class PsiKind { WeightedAverage, GuidedAntithetic };
enum class StepMode { Practical, Theoretical };
enum class SurrogateSource { PrevUpdates, ProblemGradient };

// Outer-loop parameters. The defaults are the reference hyperparameters:
// population 40 with half selected, asymmetric step factors 1.01/0.99
// clamped to [0.001, 0.1], sampling scale 1.0, kappa 0.005, guided
// antithetic recombination with beta 5, alpha 0.5 and a 20-slot surrogate
// buffer. Theoretical step mode switches to the symmetric unclamped update
// used by the convergence analysis.
struct EngineConfig {
  int lambda = 40;
  int lambda_prime = 20;
  Real gamma_up = 1.01;
  Real gamma_down = 0.99;
  Real sigma0 = 0.1;
  Real sigma_min = 0.001;
  Real sigma_max = 0.1;
  Real sigma_es0 = 1.0;
  Real kappa = 0.005;
  Real d_max = 2.0;
  Real eps_c = 1.0;
  PsiKind psi = PsiKind::GuidedAntithetic;
  Real beta = 5.0;
  Real alpha = 0.5;
  int m = 20;
  int budget = 1000;
  bool mirrored = true;
  StepMode step_mode = StepMode::Practical;
  SurrogateSource surrogate = SurrogateSource::PrevUpdates;
  int threads = 1;
  bool record_timing = false;  // real wall times break byte-level replay

  void validate() const;
};

// Everything a run needs besides the problem itself. `nu` weights the
// Lyapunov column written into traces.
struct RunSettings {
  EngineConfig engine;
  AccuracySchedule schedule;
  Real nu = 0.95;
};

struct SearchState {
  Vector x;
  Real sigma = 0.0;
  Real sigma_es = 0.0;
  Real f_incumbent = 0.0;
  long long iteration = 0;
  std::uint64_t rng_seed = 0;
};

struct Offspring {
  Vector direction;
  Vector point;
  BarrierValue barrier;  // infeasible until evaluated
  int index = 0;
};

// Evaluates the initial point through the adjusted barrier at sigma0.
// Throws InfeasibleStart when a constraint estimate exceeds eps_c * sigma0
// and NonFiniteObjective when the objective estimate is not finite.
SearchState init_state(const RunSettings& settings, const ConstrainedProblem& problem,
                       std::uint64_t seed);

// Draws lambda offspring around the incumbent, each at
// point = x + sigma_es * direction. With mirrored sampling the second half
// carries the negated directions of the first half.
std::vector<Offspring> generate_offspring(const SearchState& state, const GesDistribution& dist,
                                          int lambda, bool mirrored, RandomStream& stream);

// Ascending by barrier value; infeasible offspring sort last; ties broken
// by offspring index so the order is deterministic.
std::vector<Offspring> rank_offspring(std::vector<Offspring> offspring);

// Recombination dispatch. WeightedAverage applies log-rank weights to the
// feasible members of the selected set; GuidedAntithetic applies the
// antithetic map to the mirrored pairs of the unranked population. The
// result is radially rescaled onto the d_max ball when needed. Throws
// AllInfeasible when no usable offspring remain.
Vector recombine(const std::vector<Offspring>& population, const std::vector<Offspring>& ranked,
                 const EngineConfig& config, Real sigma_es);

// Applies the step-size update for a successful or unsuccessful iteration;
// sigma_es follows the same multiplicative move as sigma.
void apply_step_update(SearchState& state, bool success, const EngineConfig& config);

struct TrialResult {
  bool success = false;
  BarrierValue barrier;
  Vector trial_point;
};

// Evaluates x + sigma * d through the supplied barrier oracle and applies
// the sufficient-decrease test  f_trial <= f_incumbent - (kappa/2) sigma^2.
// On success the incumbent and its carried estimate move to the trial
// point; either way the step sizes are updated.
TrialResult trial_and_accept(SearchState& state, const Vector& d,
                             const std::function<BarrierValue(const Vector&)>& barrier_at,
                             const EngineConfig& config);

// Per-iteration debug snapshot for test observers: enough to re-derive the
// accept decision independently.
struct TrialDebug {
  long long iteration = 0;
  Real sigma_before = 0.0;
  Real f_before = 0.0;
  bool evaluated = false;  // false when recombination found nothing usable
  BarrierValue trial_barrier;
  bool accepted = false;
};
using TrialObserver = std::function<void(const TrialDebug&)>;

struct RunResult {
  std::vector<TraceRecord> trace;
  SearchState final_state;
};

// Full optimization loop: at most budget iterations, one trace row per
// iteration, bit-identical across runs and thread counts for equal
// (seed, settings, problem).
RunResult run(const RunSettings& settings, const ConstrainedProblem& problem, std::uint64_t seed,
              const TrialObserver& observer = {});

}  // namespace sces
