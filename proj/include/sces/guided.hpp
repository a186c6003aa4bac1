#pragma once

#include <deque>
#include <utility>
#include <vector>

#include "sces/barrier.hpp"
#include "sces/random.hpp"
#include "sces/types.hpp"

namespace sces {

// Orthonormal basis of the span of the given vectors, computed by modified
// Gram-Schmidt with one re-orthogonalization sweep. Columns whose residual
// after projection falls below 1e-10 times the input norm are dropped, so
// the result is rank-revealing. Empty input yields an n x 0 matrix.
Matrix orthonormal_basis(const std::vector<Vector>& gradients, Index n);

// Ring of the m most recent surrogate gradients together with the
// orthonormal basis of their span. Near-zero gradients are skipped.
class SurrogateBuffer {
 public:
  SurrogateBuffer(int capacity, Index dimension);

  void push(const Vector& gradient);

  int capacity() const { return capacity_; }
  Index dimension() const { return dimension_; }
  int count() const { return static_cast<int>(gradients_.size()); }
  const Matrix& basis() const { return basis_; }
  int skipped_zero_gradients() const { return skipped_; }

 private:
  int capacity_;
  Index dimension_;
  std::deque<Vector> gradients_;
  Matrix basis_;
  int skipped_ = 0;
};

// Search distribution mixing an isotropic component with the surrogate
// subspace:  C = (alpha/n) I + ((1-alpha)/m) U U^T.  With an empty buffer
// the effective alpha is 1 and sampling is isotropic.
struct GesDistribution {
  Real alpha = 0.5;
  Index n = 0;
  const SurrogateBuffer* buffer = nullptr;

  Real effective_alpha() const {
    return (buffer == nullptr || buffer->count() == 0) ? 1.0 : alpha;
  }
};

// Dense covariance matrix of the distribution (n x n, symmetric PSD).
Matrix covariance(const GesDistribution& dist);

// One draw from N(0, C):  d = sqrt(a/n) xi + sqrt((1-a)/m) U xi'  with
// standard normal xi in R^n and xi' in R^k. The sampling scale sigma_es is
// applied by the engine, not here.
Vector sample_direction(const GesDistribution& dist, RandomStream& stream);

// Mirrored sampling: appends the negation of each input, giving 2*lambda'
// directions whose sum is exactly zero.
std::vector<Vector> mirrored_pairs(const std::vector<Vector>& directions);

// Logarithmic rank weights w_i proportional to ln(count + 1/2) - ln(i),
// normalized to the simplex; the standard recombination weighting.
std::vector<Real> log_rank_weights(int count);

// Simplex-weighted recombination of directions. Weights must be
// non-negative and sum to one within 1e-12.
Vector psi_average(const std::vector<Vector>& directions, const std::vector<Real>& weights);

// Antithetic recombination over mirrored pairs:
//   d = -(beta / (sigma_es * lambda)) * sum_i (f_i - f_{i+lambda'}) d_i
// Pairs containing an infeasible barrier value are skipped; if every pair
// is skipped the map has no meaningful output and AllInfeasible is thrown.
Vector psi_guided(const std::vector<Vector>& directions,
                  const std::vector<std::pair<BarrierValue, BarrierValue>>& f_pairs, Real sigma_es,
                  Real beta, int lambda);

}  // namespace sces
