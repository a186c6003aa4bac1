#pragma once

#include <vector>

#include "sces/trace.hpp"
#include "sces/types.hpp"

namespace sces {

// Weight of the objective term in the Lyapunov function
// phi = nu * f + (1 - nu) * sigma^2.
struct LyapunovConfig {
  Real nu = 0.95;
};

inline Real lyapunov(Real f, Real sigma, Real nu) { return nu * f + (1.0 - nu) * sigma * sigma; }

// The decrease analysis requires nu / (1 - nu) >= 4 (gamma^2 - 1) / kappa.
bool theory_nu_valid(Real nu, Real gamma, Real kappa);

// Seed-averaged Lyapunov increments per iteration bucket. `violations`
// holds the bucket indices whose averaged increment is positive.
struct DecreaseAudit {
  long long buckets = 0;
  long long nonpositive = 0;
  std::vector<long long> violations;

  Real fraction() const {
    return buckets == 0 ? 1.0 : static_cast<Real>(nonpositive) / static_cast<Real>(buckets);
  }
};

// Recomputes phi_k per seed from the f_exact and sigma columns and averages
// the increments phi_{k+1} - phi_k across seeds at each iteration. Requires
// at least 10 traces of equal length with exact objective columns.
DecreaseAudit expected_decrease_audit(const std::vector<std::vector<TraceRecord>>& traces, Real nu);

// True when the final-quarter median step size has fallen to at most
// `ratio` times the first-quarter median.
bool sigma_convergence_check(const std::vector<TraceRecord>& trace, Real ratio = 0.1);

// Norm of the negative gradient projected onto the tangent cone of the box
// [lower, upper] at x: zero exactly when no feasible first-order descent
// direction exists, and equal to |grad| at interior points.
Real stationarity_box(const Vector& x, const Vector& grad, const Vector& lower,
                      const Vector& upper);

// Independent sufficient-decrease re-checker over a trace: every success
// row must satisfy f_k+1 <= f_k - (kappa/2) sigma_k^2 within one unit in
// the last place, where sigma_k is taken from the preceding row (or sigma0
// for the first row). Returns the offending row indices.
std::vector<long long> sufficient_decrease_violations(const std::vector<TraceRecord>& trace,
                                                      Real kappa, Real sigma0, Real f0);

}  // namespace sces
