#pragma once

#include <vector>

#include "sces/random.hpp"
#include "sces/types.hpp"

namespace sces {

// Finite-horizon tabular MDP. Transitions are stored per action as
// row-stochastic S x S matrices; reward and each cost tensor are S x A.
struct TabularMDP {
  Index num_states = 0;
  Index num_actions = 0;
  std::vector<Matrix> transitions;  // [a](s, s')
  Matrix reward;                    // (s, a)
  std::vector<Matrix> costs;        // per cost function, (s, a)
  Real discount = 0.99;
  int horizon = 0;
  Vector initial_dist;

  void validate() const;
};

// Tabular softmax policy over logits (S x A). Action probabilities and
// per-state entropies are precomputed so rollouts stay cheap.
class SoftmaxPolicy {
 public:
  SoftmaxPolicy(Index num_states, Index num_actions);  // uniform (zero logits)
  explicit SoftmaxPolicy(const Matrix& logits);

  // Interprets x as row-major flattened logits: x[s * A + a].
  static SoftmaxPolicy from_flat(const Vector& x, Index num_states, Index num_actions);

  const Matrix& logits() const { return logits_; }
  const Matrix& probabilities() const { return probs_; }
  Real state_entropy(Index s) const { return entropy_[s]; }
  Index num_states() const { return logits_.rows(); }
  Index num_actions() const { return logits_.cols(); }

 private:
  Matrix logits_;
  Matrix probs_;
  Vector entropy_;
};

struct RolloutResult {
  Real discounted_return = 0.0;
  Real trajectory_entropy = 0.0;  // undiscounted sum of per-state entropies
  Vector discounted_costs;
};

// Simulates one trajectory of `horizon` steps. The return and costs are
// discounted sums; the trajectory entropy adds the policy's entropy at each
// visited state.
RolloutResult rollout(const TabularMDP& mdp, const SoftmaxPolicy& policy, RandomStream& stream);

// Exact finite-horizon expectation of sum_t discount^t value(s_t, a_t)
// under the policy, by backward induction.
Real exact_policy_value(const TabularMDP& mdp, const SoftmaxPolicy& policy, const Matrix& value,
                        Real discount);

Real exact_return(const TabularMDP& mdp, const SoftmaxPolicy& policy);

// Exact expected trajectory entropy (undiscounted occupancy-weighted sum).
Real exact_entropy(const TabularMDP& mdp, const SoftmaxPolicy& policy);

// Exact expected discounted cost for each cost tensor.
Vector exact_costs(const TabularMDP& mdp, const SoftmaxPolicy& policy);

// Optimal finite-horizon expected return over all (nonstationary) policies,
// by backward induction over actions.
Real value_iteration_optimum(const TabularMDP& mdp);

}  // namespace sces
