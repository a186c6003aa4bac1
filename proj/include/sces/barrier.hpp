#pragma once

#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "sces/types.hpp"

namespace sces {

// Value of the extreme-barrier function: either a finite objective estimate
// or the infeasible sentinel. The sentinel compares strictly greater than
// every finite value and equal to itself, which makes the type totally
// ordered and directly usable as a ranking key.
class BarrierValue {
 public:
  BarrierValue() : value_(std::numeric_limits<Real>::quiet_NaN()), finite_(false) {}

  static BarrierValue finite(Real v) {
    BarrierValue b;
    b.value_ = v;
    b.finite_ = true;
    return b;
  }
  static BarrierValue infeasible() { return BarrierValue(); }

  bool is_finite() const { return finite_; }
  Real value() const { return value_; }

  friend bool operator==(const BarrierValue& a, const BarrierValue& b) {
    if (a.finite_ != b.finite_) return false;
    return !a.finite_ || a.value_ == b.value_;
  }
  friend bool operator<(const BarrierValue& a, const BarrierValue& b) {
    if (a.finite_ && b.finite_) return a.value_ < b.value_;
    return a.finite_ && !b.finite_;
  }
  friend bool operator<=(const BarrierValue& a, const BarrierValue& b) { return a < b || a == b; }
  friend bool operator>(const BarrierValue& a, const BarrierValue& b) { return b < a; }
  friend bool operator>=(const BarrierValue& a, const BarrierValue& b) { return b <= a; }

 private:
  Real value_;
  bool finite_;
};

// Exact extreme barrier: the objective survives only if every constraint
// value is non-positive.
inline BarrierValue exact_barrier(Real f_value, const Vector& c_values) {
  for (Index i = 0; i < c_values.size(); ++i) {
    if (c_values[i] > 0.0) return BarrierValue::infeasible();
  }
  return BarrierValue::finite(f_value);
}

// Adjusted barrier for estimated quantities: constraint estimates are
// admitted up to the step-size-proportional tolerance eps_c * sigma, with
// the boundary itself counted as feasible.
inline BarrierValue adjusted_barrier(Real f_est, const Vector& c_est, Real eps_c, Real sigma) {
  const Real tol = eps_c * sigma;
  for (Index i = 0; i < c_est.size(); ++i) {
    if (c_est[i] > tol) return BarrierValue::infeasible();
  }
  return BarrierValue::finite(f_est);
}

// Aggregate constraint violation, max_i max(c_i, 0); zero for feasible
// points and for empty constraint lists.
inline Real violation(const Vector& c_values) {
  Real v = 0.0;
  for (Index i = 0; i < c_values.size(); ++i) v = std::max(v, c_values[i]);
  return std::max(v, 0.0);
}

// Ordered list of scalar constraint functions describing the feasible
// region {x : c_i(x) <= 0 for all i}. Equality constraints are encoded as
// the pair {c <= 0, -c <= 0}, which the adjusted barrier relaxes to
// |c(x)| <= eps_c * sigma.
class FeasibleRegion {
 public:
  using ConstraintFn = std::function<Real(const Vector&)>;

  FeasibleRegion() = default;

  void add_inequality(ConstraintFn c) { constraints_.push_back(std::move(c)); }

  void add_equality(ConstraintFn c) {
    constraints_.push_back(c);
    constraints_.push_back([c](const Vector& x) { return -c(x); });
  }

  Index size() const { return static_cast<Index>(constraints_.size()); }

  Vector evaluate(const Vector& x) const {
    Vector out(size());
    for (Index i = 0; i < size(); ++i) out[i] = constraints_[static_cast<std::size_t>(i)](x);
    return out;
  }

 private:
  std::vector<ConstraintFn> constraints_;
};

}  // namespace sces
