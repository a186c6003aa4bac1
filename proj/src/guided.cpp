#include "sces/guided.hpp"

#include <cmath>

namespace sces {

namespace {
constexpr Real kRankTolerance = 1e-10;
constexpr Real kZeroGradientNorm = 1e-14;
constexpr Real kSimplexTolerance = 1e-12;
}  // namespace

Matrix orthonormal_basis(const std::vector<Vector>& gradients, Index n) {
  Matrix basis(n, static_cast<Index>(gradients.size()));
  Index k = 0;
  for (const Vector& g : gradients) {
    if (g.size() != n) throw DomainError("orthonormal_basis: dimension mismatch");
    const Real input_norm = g.norm();
    if (input_norm == 0.0) continue;
    Vector w = g;
    // Two projection sweeps keep U^T U = I well below the rank tolerance
    // even for nearly dependent inputs.
    for (int sweep = 0; sweep < 2; ++sweep) {
      for (Index j = 0; j < k; ++j) w -= basis.col(j).dot(w) * basis.col(j);
    }
    const Real residual = w.norm();
    if (residual < kRankTolerance * input_norm) continue;  // inside the current span
    basis.col(k) = w / residual;
    ++k;
  }
  return basis.leftCols(k);
}

SurrogateBuffer::SurrogateBuffer(int capacity, Index dimension)
    : capacity_(capacity), dimension_(dimension), basis_(dimension, 0) {
  if (capacity < 1) throw ConfigError("surrogate buffer capacity must be at least 1");
  if (dimension < 1) throw ConfigError("surrogate buffer dimension must be at least 1");
}

void SurrogateBuffer::push(const Vector& gradient) {
  if (gradient.size() != dimension_) throw DomainError("surrogate gradient dimension mismatch");
  if (gradient.norm() < kZeroGradientNorm) {
    ++skipped_;  // ZeroGradient: nothing to span
    return;
  }
  gradients_.push_back(gradient);
  while (static_cast<int>(gradients_.size()) > capacity_) gradients_.pop_front();
  basis_ = orthonormal_basis({gradients_.begin(), gradients_.end()}, dimension_);
}

Matrix covariance(const GesDistribution& dist) {
  if (dist.n < 1) throw DegenerateSampler("covariance: empty dimension");
  const Real a = dist.effective_alpha();
  Matrix c = (a / static_cast<Real>(dist.n)) * Matrix::Identity(dist.n, dist.n);
  if (a < 1.0) {
    const Matrix& u = dist.buffer->basis();
    c += ((1.0 - a) / static_cast<Real>(dist.buffer->capacity())) * (u * u.transpose());
  }
  return c;
}

Vector sample_direction(const GesDistribution& dist, RandomStream& stream) {
  if (dist.n < 1) throw DegenerateSampler("sample_direction: empty dimension");
  const Real a = dist.effective_alpha();
  Vector d = std::sqrt(a / static_cast<Real>(dist.n)) * stream.gaussian_vector(dist.n);
  if (a < 1.0) {
    const Matrix& u = dist.buffer->basis();
    if (u.cols() > 0) {
      const Real scale = std::sqrt((1.0 - a) / static_cast<Real>(dist.buffer->capacity()));
      d += scale * (u * stream.gaussian_vector(u.cols()));
    }
  }
  return d;
}

std::vector<Vector> mirrored_pairs(const std::vector<Vector>& directions) {
  std::vector<Vector> out;
  out.reserve(directions.size() * 2);
  for (const Vector& d : directions) out.push_back(d);
  for (const Vector& d : directions) out.push_back(-d);
  return out;
}

std::vector<Real> log_rank_weights(int count) {
  if (count < 1) throw WeightError("log_rank_weights: count must be positive");
  std::vector<Real> w(static_cast<std::size_t>(count));
  const Real top = std::log(static_cast<Real>(count) + 0.5);
  Real sum = 0.0;
  for (int i = 0; i < count; ++i) {
    w[static_cast<std::size_t>(i)] = top - std::log(static_cast<Real>(i + 1));
    sum += w[static_cast<std::size_t>(i)];
  }
  for (Real& x : w) x /= sum;
  return w;
}

Vector psi_average(const std::vector<Vector>& directions, const std::vector<Real>& weights) {
  if (directions.empty()) throw WeightError("psi_average: no directions");
  if (directions.size() != weights.size())
    throw WeightError("psi_average: weights and directions differ in length");
  Real sum = 0.0;
  for (Real w : weights) {
    if (w < -kSimplexTolerance) throw WeightError("psi_average: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kSimplexTolerance)
    throw WeightError("psi_average: weights do not sum to one");
  Vector out = Vector::Zero(directions.front().size());
  for (std::size_t i = 0; i < directions.size(); ++i) out += weights[i] * directions[i];
  return out;
}

Vector psi_guided(const std::vector<Vector>& directions,
                  const std::vector<std::pair<BarrierValue, BarrierValue>>& f_pairs, Real sigma_es,
                  Real beta, int lambda) {
  if (directions.empty() || directions.size() != f_pairs.size())
    throw DomainError("psi_guided: pair count mismatch");
  if (lambda != static_cast<int>(2 * directions.size()))
    throw DomainError("psi_guided: lambda must equal twice the pair count");
  if (sigma_es <= 0.0) throw DomainError("psi_guided: sigma_es must be positive");
  Vector acc = Vector::Zero(directions.front().size());
  bool any = false;
  for (std::size_t i = 0; i < directions.size(); ++i) {
    const auto& [first, second] = f_pairs[i];
    if (!first.is_finite() || !second.is_finite()) continue;  // skip broken pairs
    acc += (first.value() - second.value()) * directions[i];
    any = true;
  }
  if (!any) throw AllInfeasible("psi_guided: every mirrored pair is infeasible");
  return -(beta / (sigma_es * static_cast<Real>(lambda))) * acc;
}

}  // namespace sces
