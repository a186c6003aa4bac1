#pragma once

#include <functional>
#include <optional>
#include <string>

#include "sces/barrier.hpp"
#include "sces/mdp.hpp"
#include "sces/oracles.hpp"

namespace sces {

// A benchmark problem: a stochastic oracle plus optional exact references
// used for auditing. Exact references, when present, equal the mean of the
// noisy oracle. The surrogate gradient hook feeds the guided sampler when
// the engine is configured to pull gradients from the problem.
struct ConstrainedProblem {
  std::string name;
  Index dimension = 0;
  Vector initial_point;
  NoisyOracle oracle;
  std::function<Real(const Vector&)> exact_objective;           // empty when unavailable
  std::optional<FeasibleRegion> exact_constraints;
  std::function<Vector(const Vector&, RandomStream&)> surrogate_gradient;
  std::optional<Real> known_optimum;

  bool has_exact_objective() const { return static_cast<bool>(exact_objective); }
};

// ||x||^2 with additive Gaussian observation noise; unconstrained, exact
// reference available, declared variance noise_sd^2.
ConstrainedProblem noisy_sphere(Index n, Real noise_sd);

// Minimize ||x - x_obj||^2 subject to ||x||^2 <= ball_radius^2, with the
// objective center placed at distance 2 along the first axis so the
// unconstrained optimum is infeasible. Observation noise applies to the
// objective only; the constraint oracle is exact, which satisfies the
// almost-sure constraint accuracy requirement for any tolerance.
ConstrainedProblem constrained_quadratic(Index n, Real noise_sd, Real ball_radius);

// Entropy-regularized policy search on a tabular MDP: minimize
// -E[R] - mu E[H] subject to h_l <= E[H] <= h_u, everything estimated from
// the same rollouts.
ConstrainedProblem entropy_problem(const TabularMDP& mdp, Real mu, Real h_l, Real h_u);

// Cost-constrained policy search: minimize -E[R] + penalty_sign * mu * sum_i E[g_i]
// subject to E[g_i] <= thresholds_i. The default penalty sign makes cost
// worsen the minimized objective; -1 selects the opposite convention.
ConstrainedProblem cmdp_problem(const TabularMDP& mdp, Real mu, const Vector& thresholds,
                                Real penalty_sign = 1.0);

// Benchmark MDPs. The chain rewards only its far end, so return hinges on
// a consistent run of "right" actions; the gridworld pays at the far corner
// while the four center cells carry a step cost.
TabularMDP make_chain_mdp();
TabularMDP make_grid_mdp();

// Registry lookup backing the CLI. Understands:
//   noisy-sphere-<n>            (noise sd 0.1)
//   noisy-sphere-<n>-sd<value>
//   constrained-quadratic
//   chain-entropy
//   grid-cmdp
ConstrainedProblem make_problem(const std::string& name);

}  // namespace sces
