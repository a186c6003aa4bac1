#pragma once

#include <functional>
#include <optional>

#include "sces/random.hpp"
#include "sces/types.hpp"

namespace sces {

// One draw from a stochastic evaluation of a point: an objective sample and
// the accompanying constraint samples (length r, possibly empty).
struct OracleSample {
  Real f = 0.0;
  Vector c;
};

// Stochastic oracle for a problem. `sample` must be pure given its stream:
// repeated calls with independent substreams are independent draws whose
// mean is the true objective/constraint value. `variance_bound` is the
// known per-sample objective variance for synthetic problems; when absent
// the engine maintains an online estimate.
struct NoisyOracle {
  std::function<OracleSample(const Vector&, RandomStream&)> sample;
  Index constraint_count = 0;
  std::optional<Real> variance_bound;
};

enum class ScheduleMode { Theoretical, FixedBatch, Capped };

// Controls how many oracle samples are averaged per evaluation. The
// Theoretical mode follows the concentration bound that yields
// p-probabilistically eps_f-accurate estimates; FixedBatch is the
// constant-batch experimental convention; Capped clips the theoretical
// count at n_cap.
struct AccuracySchedule {
  ScheduleMode mode = ScheduleMode::FixedBatch;
  Real eps_f = 0.001;
  Real p = 0.75;
  int n_fixed = 40;
  int n_cap = 100000;

  void validate() const;
};

// Number of averaged samples needed for a p-probabilistically
// eps_f-accurate estimate with per-sample variance v at step size sigma:
//   N >= (16 v / (eps_f^2 sigma^4)) log(2 / (1 - p))   and
//   N >= v / (eps_f sigma^4),
// rounded up and at least 1.
int required_samples(Real v, Real eps_f, Real sigma, Real p);

// Result of averaging n independent oracle draws at one point. f_m2 is the
// sum of squared deviations of the objective samples (Welford M2), kept so
// callers can fold the draws into an online variance estimate.
struct Estimate {
  Real f = 0.0;
  Vector c;
  int n = 0;
  Real f_m2 = 0.0;
};

// Averages oracle draws at `point`, sizing the batch from the schedule,
// the current step size, and the variance bound v. Oracle failures
// propagate as EvaluationError.
Estimate estimate_point(const Vector& point, Real sigma, const NoisyOracle& oracle,
                        const AccuracySchedule& schedule, Real v, RandomStream& stream);

// Objective-only and constraints-only views of estimate_point, matching the
// two estimator roles the engine needs.
std::pair<Real, int> estimate_objective(const Vector& point, Real sigma, const NoisyOracle& oracle,
                                        const AccuracySchedule& schedule, Real v,
                                        RandomStream& stream);
Vector estimate_constraints(const Vector& point, Real sigma, const NoisyOracle& oracle,
                            const AccuracySchedule& schedule, Real v, RandomStream& stream);

// True when both objective estimation gaps fall within eps_f * sigma^2,
// the per-iteration accuracy event of the probabilistic estimate model.
bool accuracy_event(Real f_est0, Real f_est1, Real f_true0, Real f_true1, Real eps_f, Real sigma);

// Constraint analogue: both infinity-norm gaps within eps_c * sigma.
bool constraint_accuracy_event(const Vector& c_est0, const Vector& c_est1, const Vector& c_true0,
                               const Vector& c_true1, Real eps_c, Real sigma);

// Online per-sample variance tracker (Welford form) with a safety factor of
// two applied on read; used when the oracle declares no variance bound.
class VarianceEstimator {
 public:
  void merge(Real mean, Real m2, int n);
  Real bound() const;
  long long count() const { return n_; }

 private:
  long long n_ = 0;
  Real mean_ = 0.0;
  Real m2_ = 0.0;
};

}  // namespace sces
