#include "sces/mdp.hpp"

#include <cmath>

namespace sces {

namespace {
constexpr Real kRowSumTolerance = 1e-12;
// Guard for the exact finite-horizon recursions; desk-scale models stay far
// below this.
constexpr double kMaxExactWork = 5e7;
}  // namespace

void TabularMDP::validate() const {
  if (num_states < 1 || num_actions < 1) throw ConfigError("mdp: empty state or action space");
  if (static_cast<Index>(transitions.size()) != num_actions)
    throw ConfigError("mdp: one transition matrix per action required");
  for (const Matrix& t : transitions) {
    if (t.rows() != num_states || t.cols() != num_states)
      throw ConfigError("mdp: transition matrix shape mismatch");
    for (Index s = 0; s < num_states; ++s) {
      if (std::abs(t.row(s).sum() - 1.0) > kRowSumTolerance)
        throw ConfigError("mdp: transition row does not sum to one");
      if (t.row(s).minCoeff() < 0.0) throw ConfigError("mdp: negative transition probability");
    }
  }
  if (reward.rows() != num_states || reward.cols() != num_actions)
    throw ConfigError("mdp: reward shape mismatch");
  for (const Matrix& g : costs) {
    if (g.rows() != num_states || g.cols() != num_actions)
      throw ConfigError("mdp: cost shape mismatch");
  }
  if (discount < 0.0 || discount > 1.0) throw ConfigError("mdp: discount outside [0, 1]");
  if (horizon < 1) throw ConfigError("mdp: horizon must be at least 1");
  if (initial_dist.size() != num_states || std::abs(initial_dist.sum() - 1.0) > kRowSumTolerance)
    throw ConfigError("mdp: initial distribution invalid");
}

SoftmaxPolicy::SoftmaxPolicy(Index num_states, Index num_actions)
    : SoftmaxPolicy(Matrix::Zero(num_states, num_actions)) {}

SoftmaxPolicy::SoftmaxPolicy(const Matrix& logits) : logits_(logits) {
  const Index s_count = logits_.rows();
  const Index a_count = logits_.cols();
  probs_.resize(s_count, a_count);
  entropy_.resize(s_count);
  for (Index s = 0; s < s_count; ++s) {
    const Real mx = logits_.row(s).maxCoeff();
    Eigen::RowVectorXd e = (logits_.row(s).array() - mx).exp();
    e /= e.sum();
    probs_.row(s) = e;
    Real h = 0.0;
    for (Index a = 0; a < a_count; ++a) {
      if (e[a] > 0.0) h -= e[a] * std::log(e[a]);
    }
    entropy_[s] = h;
  }
}

SoftmaxPolicy SoftmaxPolicy::from_flat(const Vector& x, Index num_states, Index num_actions) {
  if (x.size() != num_states * num_actions)
    throw DomainError("SoftmaxPolicy::from_flat: dimension mismatch");
  Matrix logits(num_states, num_actions);
  for (Index s = 0; s < num_states; ++s)
    for (Index a = 0; a < num_actions; ++a) logits(s, a) = x[s * num_actions + a];
  return SoftmaxPolicy(logits);
}

RolloutResult rollout(const TabularMDP& mdp, const SoftmaxPolicy& policy, RandomStream& stream) {
  RolloutResult out;
  out.discounted_costs = Vector::Zero(static_cast<Index>(mdp.costs.size()));
  Index s = stream.discrete(mdp.initial_dist);
  Real disc = 1.0;
  for (int t = 0; t < mdp.horizon; ++t) {
    out.trajectory_entropy += policy.state_entropy(s);
    const Index a = stream.discrete(policy.probabilities().row(s).transpose());
    out.discounted_return += disc * mdp.reward(s, a);
    for (std::size_t j = 0; j < mdp.costs.size(); ++j)
      out.discounted_costs[static_cast<Index>(j)] += disc * mdp.costs[j](s, a);
    s = stream.discrete(mdp.transitions[static_cast<std::size_t>(a)].row(s).transpose());
    disc *= mdp.discount;
  }
  return out;
}

Real exact_policy_value(const TabularMDP& mdp, const SoftmaxPolicy& policy, const Matrix& value,
                        Real discount) {
  const double work = static_cast<double>(mdp.num_states) * static_cast<double>(mdp.num_states) *
                      static_cast<double>(mdp.num_actions) * static_cast<double>(mdp.horizon);
  if (work > kMaxExactWork) throw SizeError("exact_policy_value: model too large");
  Vector v = Vector::Zero(mdp.num_states);
  for (int t = 0; t < mdp.horizon; ++t) {
    Vector next = Vector::Zero(mdp.num_states);
    for (Index a = 0; a < mdp.num_actions; ++a) {
      const Vector q =
          value.col(a) + discount * (mdp.transitions[static_cast<std::size_t>(a)] * v);
      next += policy.probabilities().col(a).cwiseProduct(q);
    }
    v = next;
  }
  return mdp.initial_dist.dot(v);
}

Real exact_return(const TabularMDP& mdp, const SoftmaxPolicy& policy) {
  return exact_policy_value(mdp, policy, mdp.reward, mdp.discount);
}

Real exact_entropy(const TabularMDP& mdp, const SoftmaxPolicy& policy) {
  Matrix per_sa(mdp.num_states, mdp.num_actions);
  for (Index s = 0; s < mdp.num_states; ++s) per_sa.row(s).setConstant(policy.state_entropy(s));
  return exact_policy_value(mdp, policy, per_sa, 1.0);
}

Vector exact_costs(const TabularMDP& mdp, const SoftmaxPolicy& policy) {
  Vector out(static_cast<Index>(mdp.costs.size()));
  for (std::size_t j = 0; j < mdp.costs.size(); ++j)
    out[static_cast<Index>(j)] = exact_policy_value(mdp, policy, mdp.costs[j], mdp.discount);
  return out;
}

Real value_iteration_optimum(const TabularMDP& mdp) {
  const double work = static_cast<double>(mdp.num_states) * static_cast<double>(mdp.num_states) *
                      static_cast<double>(mdp.num_actions) * static_cast<double>(mdp.horizon);
  if (work > kMaxExactWork) throw SizeError("value_iteration_optimum: model too large");
  Vector v = Vector::Zero(mdp.num_states);
  for (int t = 0; t < mdp.horizon; ++t) {
    Vector next(mdp.num_states);
    for (Index s = 0; s < mdp.num_states; ++s) {
      Real best = -std::numeric_limits<Real>::infinity();
      for (Index a = 0; a < mdp.num_actions; ++a) {
        const Real q = mdp.reward(s, a) +
                       mdp.discount * mdp.transitions[static_cast<std::size_t>(a)].row(s).dot(v);
        best = std::max(best, q);
      }
      next[s] = best;
    }
    v = next;
  }
  return mdp.initial_dist.dot(v);
}

}  // namespace sces
