#include "sces/oracles.hpp"

#include <cmath>

namespace sces {

void AccuracySchedule::validate() const {
  if (eps_f <= 0.0) throw ConfigError("schedule.eps_f must be positive");
  if (mode != ScheduleMode::FixedBatch && (p <= 0.5 || p > 1.0))
    throw ConfigError("schedule.p must lie in (1/2, 1]");
  if (n_fixed < 1) throw ConfigError("schedule.n_fixed must be at least 1");
  if (n_cap < 1) throw ConfigError("schedule.n_cap must be at least 1");
}

namespace {

Real required_samples_bound(Real v, Real eps_f, Real sigma, Real p) {
  if (v < 0.0 || eps_f <= 0.0 || sigma <= 0.0) throw DomainError("required_samples: bad arguments");
  if (p <= 0.5 || p >= 1.0) throw DomainError("required_samples: p must lie in (1/2, 1)");
  if (v == 0.0) return 1.0;
  const Real s4 = sigma * sigma * sigma * sigma;
  const Real concentration = 16.0 * v / (eps_f * eps_f * s4) * std::log(2.0 / (1.0 - p));
  const Real variance_cond = v / (eps_f * s4);
  return std::max(std::ceil(std::max(concentration, variance_cond)), 1.0);
}

}  // namespace

int required_samples(Real v, Real eps_f, Real sigma, Real p) {
  const Real n = required_samples_bound(v, eps_f, sigma, p);
  if (n >= 2e9) throw DomainError("required_samples: bound exceeds integer range");
  return static_cast<int>(n);
}

namespace {

int batch_size(const AccuracySchedule& schedule, Real v, Real sigma) {
  switch (schedule.mode) {
    case ScheduleMode::FixedBatch:
      return schedule.n_fixed;
    case ScheduleMode::Theoretical:
      return required_samples(v, schedule.eps_f, sigma, schedule.p);
    case ScheduleMode::Capped: {
      const Real bound = required_samples_bound(v, schedule.eps_f, sigma, schedule.p);
      return static_cast<int>(std::min<Real>(bound, schedule.n_cap));
    }
  }
  return 1;
}

}  // namespace

Estimate estimate_point(const Vector& point, Real sigma, const NoisyOracle& oracle,
                        const AccuracySchedule& schedule, Real v, RandomStream& stream) {
  const int n = batch_size(schedule, v, sigma);
  Estimate est;
  est.c = Vector::Zero(oracle.constraint_count);
  Real mean = 0.0;
  Real m2 = 0.0;
  for (int i = 0; i < n; ++i) {
    OracleSample s;
    try {
      s = oracle.sample(point, stream);
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw EvaluationError(std::string("oracle failure: ") + e.what());
    }
    if (s.c.size() != oracle.constraint_count)
      throw EvaluationError("oracle returned wrong constraint count");
    const Real delta = s.f - mean;
    mean += delta / static_cast<Real>(i + 1);
    m2 += delta * (s.f - mean);
    est.c += s.c;
  }
  est.f = mean;
  est.f_m2 = m2;
  est.n = n;
  if (n > 0) est.c /= static_cast<Real>(n);
  if (!std::isfinite(est.f)) throw EvaluationError("objective estimate is not finite");
  for (Index i = 0; i < est.c.size(); ++i) {
    if (!std::isfinite(est.c[i])) throw EvaluationError("constraint estimate is not finite");
  }
  return est;
}

std::pair<Real, int> estimate_objective(const Vector& point, Real sigma, const NoisyOracle& oracle,
                                        const AccuracySchedule& schedule, Real v,
                                        RandomStream& stream) {
  const Estimate est = estimate_point(point, sigma, oracle, schedule, v, stream);
  return {est.f, est.n};
}

Vector estimate_constraints(const Vector& point, Real sigma, const NoisyOracle& oracle,
                            const AccuracySchedule& schedule, Real v, RandomStream& stream) {
  return estimate_point(point, sigma, oracle, schedule, v, stream).c;
}

bool accuracy_event(Real f_est0, Real f_est1, Real f_true0, Real f_true1, Real eps_f, Real sigma) {
  const Real tol = eps_f * sigma * sigma;
  return std::abs(f_est0 - f_true0) <= tol && std::abs(f_est1 - f_true1) <= tol;
}

bool constraint_accuracy_event(const Vector& c_est0, const Vector& c_est1, const Vector& c_true0,
                               const Vector& c_true1, Real eps_c, Real sigma) {
  const Real tol = eps_c * sigma;
  const Real gap0 = c_est0.size() == 0 ? 0.0 : (c_est0 - c_true0).lpNorm<Eigen::Infinity>();
  const Real gap1 = c_est1.size() == 0 ? 0.0 : (c_est1 - c_true1).lpNorm<Eigen::Infinity>();
  return gap0 <= tol && gap1 <= tol;
}

void VarianceEstimator::merge(Real mean, Real m2, int n) {
  if (n <= 0) return;
  const Real delta = mean - mean_;
  const long long total = n_ + n;
  mean_ += delta * static_cast<Real>(n) / static_cast<Real>(total);
  m2_ += m2 + delta * delta * static_cast<Real>(n_) * static_cast<Real>(n) /
                  static_cast<Real>(total);
  n_ = total;
}

Real VarianceEstimator::bound() const {
  if (n_ < 2) return 1.0;  // conservative default before any data
  return 2.0 * m2_ / static_cast<Real>(n_ - 1);
}

}  // namespace sces
