#include "sces/problems.hpp"

#include <cmath>
#include <memory>

namespace sces {

namespace {

// Central finite differences of single oracle draws, with a wide step so
// the quotient survives observation noise. Surrogate provider for the
// synthetic problems.
std::function<Vector(const Vector&, RandomStream&)> finite_difference_surrogate(
    const NoisyOracle& oracle, Real step) {
  return [oracle, step](const Vector& x, RandomStream& stream) {
    Vector g(x.size());
    Vector probe = x;
    for (Index i = 0; i < x.size(); ++i) {
      probe[i] = x[i] + step;
      const Real hi = oracle.sample(probe, stream).f;
      probe[i] = x[i] - step;
      const Real lo = oracle.sample(probe, stream).f;
      probe[i] = x[i];
      g[i] = (hi - lo) / (2.0 * step);
    }
    return g;
  };
}

// REINFORCE-with-baseline policy gradient on the flattened logits, using
// undiscounted returns-to-go and the batch-mean return as baseline. The
// result is the gradient of the minimized objective, i.e. the negated
// reward gradient.
std::function<Vector(const Vector&, RandomStream&)> reinforce_surrogate(
    std::shared_ptr<const TabularMDP> mdp, int batch) {
  return [mdp, batch](const Vector& x, RandomStream& stream) {
    const Index s_count = mdp->num_states;
    const Index a_count = mdp->num_actions;
    const SoftmaxPolicy policy = SoftmaxPolicy::from_flat(x, s_count, a_count);
    std::vector<std::vector<Index>> states(static_cast<std::size_t>(batch));
    std::vector<std::vector<Index>> actions(static_cast<std::size_t>(batch));
    std::vector<std::vector<Real>> rewards(static_cast<std::size_t>(batch));
    Real baseline = 0.0;
    for (int b = 0; b < batch; ++b) {
      Index s = stream.discrete(mdp->initial_dist);
      Real total = 0.0;
      for (int t = 0; t < mdp->horizon; ++t) {
        const Index a = stream.discrete(policy.probabilities().row(s).transpose());
        states[static_cast<std::size_t>(b)].push_back(s);
        actions[static_cast<std::size_t>(b)].push_back(a);
        const Real r = mdp->reward(s, a);
        rewards[static_cast<std::size_t>(b)].push_back(r);
        total += r;
        s = stream.discrete(mdp->transitions[static_cast<std::size_t>(a)].row(s).transpose());
      }
      baseline += total;
    }
    baseline /= static_cast<Real>(batch);
    Matrix grad = Matrix::Zero(s_count, a_count);
    for (int b = 0; b < batch; ++b) {
      const auto& ss = states[static_cast<std::size_t>(b)];
      const auto& aa = actions[static_cast<std::size_t>(b)];
      const auto& rr = rewards[static_cast<std::size_t>(b)];
      Real to_go = 0.0;
      for (Real r : rr) to_go += r;
      for (std::size_t t = 0; t < ss.size(); ++t) {
        const Real advantage = to_go - baseline;
        const Index s = ss[t];
        grad.row(s) -= advantage * policy.probabilities().row(s);
        grad(s, aa[t]) += advantage;
        to_go -= rr[t];
      }
    }
    grad /= static_cast<Real>(batch);
    Vector flat(s_count * a_count);
    for (Index s = 0; s < s_count; ++s)
      for (Index a = 0; a < a_count; ++a) flat[s * a_count + a] = -grad(s, a);
    return flat;
  };
}

ConstrainedProblem mdp_problem_base(std::shared_ptr<const TabularMDP> mdp,
                                    const std::string& name) {
  ConstrainedProblem p;
  p.name = name;
  p.dimension = mdp->num_states * mdp->num_actions;
  p.initial_point = Vector::Zero(p.dimension);  // uniform policy
  p.surrogate_gradient = reinforce_surrogate(mdp, 20);
  return p;
}

}  // namespace

ConstrainedProblem noisy_sphere(Index n, Real noise_sd) {
  if (n < 1) throw ConfigError("noisy_sphere: dimension must be positive");
  if (noise_sd < 0.0) throw ConfigError("noisy_sphere: noise sd must be non-negative");
  ConstrainedProblem p;
  p.name = "noisy-sphere-" + std::to_string(n);
  p.dimension = n;
  p.initial_point = Vector::Ones(n);
  p.oracle.constraint_count = 0;
  p.oracle.variance_bound = noise_sd * noise_sd;
  p.oracle.sample = [noise_sd](const Vector& x, RandomStream& stream) {
    OracleSample s;
    s.f = x.squaredNorm() + (noise_sd > 0.0 ? noise_sd * stream.gaussian() : 0.0);
    s.c = Vector(0);
    return s;
  };
  p.exact_objective = [](const Vector& x) { return x.squaredNorm(); };
  p.exact_constraints = FeasibleRegion();
  p.known_optimum = 0.0;
  p.surrogate_gradient = finite_difference_surrogate(p.oracle, 0.1);
  return p;
}

ConstrainedProblem constrained_quadratic(Index n, Real noise_sd, Real ball_radius) {
  if (n < 1) throw ConfigError("constrained_quadratic: dimension must be positive");
  if (ball_radius <= 0.0) throw ConfigError("constrained_quadratic: radius must be positive");
  Vector center = Vector::Zero(n);
  center[0] = 2.0;
  ConstrainedProblem p;
  p.name = "constrained-quadratic";
  p.dimension = n;
  p.initial_point = Vector::Zero(n);
  p.oracle.constraint_count = 1;
  p.oracle.variance_bound = noise_sd * noise_sd;
  const Real r2 = ball_radius * ball_radius;
  p.oracle.sample = [center, noise_sd, r2](const Vector& x, RandomStream& stream) {
    OracleSample s;
    s.f = (x - center).squaredNorm() + (noise_sd > 0.0 ? noise_sd * stream.gaussian() : 0.0);
    s.c = Vector(1);
    s.c[0] = x.squaredNorm() - r2;
    return s;
  };
  p.exact_objective = [center](const Vector& x) { return (x - center).squaredNorm(); };
  FeasibleRegion region;
  region.add_inequality([r2](const Vector& x) { return x.squaredNorm() - r2; });
  p.exact_constraints = std::move(region);
  const Real gap = center.norm() - ball_radius;
  p.known_optimum = gap * gap;
  p.surrogate_gradient = finite_difference_surrogate(p.oracle, 0.1);
  return p;
}

ConstrainedProblem entropy_problem(const TabularMDP& mdp, Real mu, Real h_l, Real h_u) {
  if (h_l > h_u) throw ConfigError("entropy_problem: lower bound exceeds upper bound");
  if (mu < 0.0) throw ConfigError("entropy_problem: mu must be non-negative");
  mdp.validate();
  auto shared = std::make_shared<const TabularMDP>(mdp);
  ConstrainedProblem p = mdp_problem_base(shared, "entropy-mdp");
  const Index s_count = shared->num_states;
  const Index a_count = shared->num_actions;
  p.oracle.constraint_count = 2;
  p.oracle.sample = [shared, mu, h_l, h_u, s_count, a_count](const Vector& x,
                                                             RandomStream& stream) {
    const SoftmaxPolicy policy = SoftmaxPolicy::from_flat(x, s_count, a_count);
    const RolloutResult roll = rollout(*shared, policy, stream);
    OracleSample s;
    s.f = -roll.discounted_return - mu * roll.trajectory_entropy;
    s.c = Vector(2);
    s.c[0] = h_l - roll.trajectory_entropy;
    s.c[1] = roll.trajectory_entropy - h_u;
    return s;
  };
  p.exact_objective = [shared, mu, s_count, a_count](const Vector& x) {
    const SoftmaxPolicy policy = SoftmaxPolicy::from_flat(x, s_count, a_count);
    return -exact_return(*shared, policy) - mu * exact_entropy(*shared, policy);
  };
  FeasibleRegion region;
  region.add_inequality([shared, h_l, s_count, a_count](const Vector& x) {
    return h_l - exact_entropy(*shared, SoftmaxPolicy::from_flat(x, s_count, a_count));
  });
  region.add_inequality([shared, h_u, s_count, a_count](const Vector& x) {
    return exact_entropy(*shared, SoftmaxPolicy::from_flat(x, s_count, a_count)) - h_u;
  });
  p.exact_constraints = std::move(region);
  return p;
}

ConstrainedProblem cmdp_problem(const TabularMDP& mdp, Real mu, const Vector& thresholds,
                                Real penalty_sign) {
  mdp.validate();
  if (thresholds.size() != static_cast<Index>(mdp.costs.size()))
    throw ConfigError("cmdp_problem: one threshold per cost function required");
  if (mu < 0.0) throw ConfigError("cmdp_problem: mu must be non-negative");
  auto shared = std::make_shared<const TabularMDP>(mdp);
  ConstrainedProblem p = mdp_problem_base(shared, "cmdp-mdp");
  const Index s_count = shared->num_states;
  const Index a_count = shared->num_actions;
  const Index r = thresholds.size();
  p.oracle.constraint_count = r;
  p.oracle.sample = [shared, mu, thresholds, penalty_sign, s_count, a_count](
                        const Vector& x, RandomStream& stream) {
    const SoftmaxPolicy policy = SoftmaxPolicy::from_flat(x, s_count, a_count);
    const RolloutResult roll = rollout(*shared, policy, stream);
    OracleSample s;
    s.f = -roll.discounted_return + penalty_sign * mu * roll.discounted_costs.sum();
    s.c = roll.discounted_costs - thresholds;
    return s;
  };
  p.exact_objective = [shared, mu, penalty_sign, s_count, a_count](const Vector& x) {
    const SoftmaxPolicy policy = SoftmaxPolicy::from_flat(x, s_count, a_count);
    return -exact_return(*shared, policy) +
           penalty_sign * mu * exact_costs(*shared, policy).sum();
  };
  FeasibleRegion region;
  for (Index j = 0; j < r; ++j) {
    const Real threshold = thresholds[j];
    region.add_inequality([shared, j, threshold, s_count, a_count](const Vector& x) {
      const SoftmaxPolicy policy = SoftmaxPolicy::from_flat(x, s_count, a_count);
      return exact_costs(*shared, policy)[j] - threshold;
    });
  }
  p.exact_constraints = std::move(region);
  return p;
}

TabularMDP make_chain_mdp() {
  TabularMDP mdp;
  mdp.num_states = 5;
  mdp.num_actions = 2;  // 0 = left, 1 = right
  mdp.transitions.assign(2, Matrix::Zero(5, 5));
  for (Index s = 0; s < 5; ++s) {
    mdp.transitions[0](s, std::max<Index>(s - 1, 0)) = 1.0;
    mdp.transitions[1](s, std::min<Index>(s + 1, 4)) = 1.0;
  }
  mdp.reward = Matrix::Zero(5, 2);
  mdp.reward.row(4).setConstant(1.0);  // pay only at the far end
  mdp.discount = 0.99;
  mdp.horizon = 20;
  mdp.initial_dist = Vector::Zero(5);
  mdp.initial_dist[0] = 1.0;
  return mdp;
}

TabularMDP make_grid_mdp() {
  const Index side = 4;
  const Index s_count = side * side;
  TabularMDP mdp;
  mdp.num_states = s_count;
  mdp.num_actions = 4;  // up, right, down, left
  mdp.transitions.assign(4, Matrix::Zero(s_count, s_count));
  const int dr[4] = {-1, 0, 1, 0};
  const int dc[4] = {0, 1, 0, -1};
  for (Index s = 0; s < s_count; ++s) {
    const Index row = s / side;
    const Index col = s % side;
    for (Index a = 0; a < 4; ++a) {
      Index nr = row + dr[a];
      Index nc = col + dc[a];
      if (nr < 0 || nr >= side || nc < 0 || nc >= side) {
        nr = row;
        nc = col;
      }
      mdp.transitions[static_cast<std::size_t>(a)](s, nr * side + nc) = 1.0;
    }
  }
  const Index goal = s_count - 1;
  mdp.reward = Matrix::Zero(s_count, 4);
  mdp.reward.row(goal).setConstant(1.0);
  // The 2x2 center block carries a step cost; monotone edge paths to the
  // goal have the same length and zero cost.
  Matrix cost = Matrix::Zero(s_count, 4);
  for (Index s : {Index(5), Index(6), Index(9), Index(10)}) cost.row(s).setConstant(3.0);
  mdp.costs.push_back(cost);
  mdp.discount = 0.99;
  mdp.horizon = 30;
  mdp.initial_dist = Vector::Zero(s_count);
  mdp.initial_dist[0] = 1.0;
  return mdp;
}

ConstrainedProblem make_problem(const std::string& name) {
  const std::string sphere_prefix = "noisy-sphere-";
  if (name.rfind(sphere_prefix, 0) == 0) {
    std::string rest = name.substr(sphere_prefix.size());
    Real sd = 0.1;
    const std::size_t sd_pos = rest.find("-sd");
    if (sd_pos != std::string::npos) {
      try {
        std::size_t used = 0;
        sd = std::stod(rest.substr(sd_pos + 3), &used);
        if (used != rest.size() - sd_pos - 3) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ConfigError("problem: bad noise suffix in '" + name + "'");
      }
      rest = rest.substr(0, sd_pos);
    }
    try {
      std::size_t used = 0;
      const int n = std::stoi(rest, &used);
      if (used != rest.size() || n < 1) throw std::invalid_argument("dim");
      ConstrainedProblem p = noisy_sphere(n, sd);
      p.name = name;
      return p;
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("problem: bad dimension in '" + name + "'");
    }
  }
  if (name == "constrained-quadratic") return constrained_quadratic(2, 0.05, 1.0);
  if (name == "chain-entropy") {
    const TabularMDP mdp = make_chain_mdp();
    const Real h_u = static_cast<Real>(mdp.horizon) * std::log(static_cast<Real>(mdp.num_actions));
    ConstrainedProblem p = entropy_problem(mdp, 1e-4, 0.0, h_u);
    p.name = "chain-entropy";
    return p;
  }
  if (name == "grid-cmdp") {
    Vector thresholds(1);
    thresholds[0] = 30.0;
    ConstrainedProblem p = cmdp_problem(make_grid_mdp(), 1e-4, thresholds);
    p.name = "grid-cmdp";
    return p;
  }
  throw ConfigError("problem: unknown registry name '" + name + "'");
}

}  // namespace sces
