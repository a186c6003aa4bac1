#include <doctest.h>

#include <cmath>

#include "sces/guided.hpp"

using namespace sces;

namespace {
Vector vec2(Real a, Real b) {
  Vector v(2);
  v << a, b;
  return v;
}
}  // namespace

TEST_CASE("orthonormal_basis forces Gram-Schmidt on dependent-ish input") {
  const Matrix u = orthonormal_basis({vec2(1, 0), vec2(1, 1)}, 2);
  REQUIRE(u.cols() == 2);
  CHECK(u.col(0).isApprox(vec2(1, 0)));
  CHECK(u.col(1).isApprox(vec2(0, 1)));
}

TEST_CASE("orthonormal_basis drops rank-deficient columns") {
  const Matrix u = orthonormal_basis({vec2(1, 0), vec2(2, 0)}, 2);
  REQUIRE(u.cols() == 1);
  CHECK(u.col(0).isApprox(vec2(1, 0)));
}

TEST_CASE("orthonormal_basis normalizes a single vector") {
  const Matrix u = orthonormal_basis({vec2(3, 4)}, 2);
  REQUIRE(u.cols() == 1);
  CHECK(u(0, 0) == doctest::Approx(0.6));
  CHECK(u(1, 0) == doctest::Approx(0.8));
}

TEST_CASE("buffer keeps the most recent m gradients and stays orthonormal") {
  const Index n = 8;
  SurrogateBuffer buffer(20, n);
  RandomStream s(3);
  CHECK(buffer.count() == 0);
  for (int i = 0; i < 60; ++i) {
    buffer.push(s.gaussian_vector(n));
    const Matrix& u = buffer.basis();
    const Matrix gram = u.transpose() * u;
    CHECK((gram - Matrix::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff() < 1e-10);
  }
  CHECK(buffer.count() == 20);
  CHECK(buffer.basis().cols() == std::min<Index>(20, n));
}

TEST_CASE("pushing a duplicate gradient leaves the basis rank unchanged") {
  SurrogateBuffer buffer(5, 3);
  Vector g(3);
  g << 1, 2, 3;
  buffer.push(g);
  CHECK(buffer.basis().cols() == 1);
  buffer.push(g);
  CHECK(buffer.basis().cols() == 1);
}

TEST_CASE("near-zero gradients are skipped, not stored") {
  SurrogateBuffer buffer(5, 2);
  buffer.push(Vector::Zero(2));
  CHECK(buffer.count() == 0);
  CHECK(buffer.skipped_zero_gradients() == 1);
}

TEST_CASE("covariance mixes identity and subspace terms") {
  SurrogateBuffer buffer(1, 2);
  GesDistribution dist{0.0, 2, &buffer};

  SUBCASE("alpha = 1 gives I/n") {
    dist.alpha = 1.0;
    CHECK(covariance(dist).isApprox(0.5 * Matrix::Identity(2, 2)));
  }
  SUBCASE("alpha = 0 with U = e1 gives e1 e1^T") {
    Vector e1 = vec2(1, 0);
    buffer.push(e1);
    dist.alpha = 0.0;
    CHECK(covariance(dist).isApprox(e1 * e1.transpose()));
  }
  SUBCASE("empty buffer falls back to isotropic regardless of alpha") {
    dist.alpha = 0.3;
    CHECK(covariance(dist).isApprox(0.5 * Matrix::Identity(2, 2)));
  }
}

TEST_CASE("covariance trace identity") {
  const Index n = 6;
  SurrogateBuffer buffer(3, n);
  RandomStream s(17);
  GesDistribution dist{0.5, n, &buffer};
  buffer.push(s.gaussian_vector(n));
  buffer.push(s.gaussian_vector(n));
  CHECK(covariance(dist).trace() ==
        doctest::Approx(0.5 + 0.5 * 2.0 / 3.0).epsilon(1e-12));
  buffer.push(s.gaussian_vector(n));
  // full rank: trace is exactly one
  CHECK(std::abs(covariance(dist).trace() - 1.0) < 1e-9);
}

TEST_CASE("sampled directions match the analytic covariance") {
  const Index n = 4;
  SurrogateBuffer buffer(20, n);
  RandomStream s(29);
  for (int i = 0; i < 3; ++i) buffer.push(s.gaussian_vector(n));
  GesDistribution dist{0.5, n, &buffer};
  const Matrix analytic = covariance(dist);
  Matrix empirical = Matrix::Zero(n, n);
  Vector mean = Vector::Zero(n);
  const int draws = 100000;
  RandomStream stream(31);
  for (int i = 0; i < draws; ++i) {
    const Vector d = sample_direction(dist, stream);
    empirical += d * d.transpose();
    mean += d;
  }
  empirical /= static_cast<Real>(draws);
  mean /= static_cast<Real>(draws);
  CHECK(mean.cwiseAbs().maxCoeff() < 0.01);
  CHECK((empirical - analytic).cwiseAbs().maxCoeff() < 0.01);
}

TEST_CASE("empty buffer sampling is isotropic with per-coordinate variance 1/n") {
  const Index n = 5;
  GesDistribution dist{0.2, n, nullptr};
  RandomStream stream(37);
  Vector second = Vector::Zero(n);
  const int draws = 50000;
  for (int i = 0; i < draws; ++i) second += sample_direction(dist, stream).cwiseAbs2();
  second /= static_cast<Real>(draws);
  for (Index i = 0; i < n; ++i) CHECK(second[i] == doctest::Approx(1.0 / 5.0).epsilon(0.05));
}

TEST_CASE("alpha = 1 sampling is distribution-identical to plain isotropic draws") {
  // two-sample Kolmogorov-Smirnov on direction norms at the 1% level
  const Index n = 5;
  SurrogateBuffer buffer(4, n);
  RandomStream grads(41);
  for (int i = 0; i < 4; ++i) buffer.push(grads.gaussian_vector(n));
  GesDistribution full{1.0, n, &buffer};  // subspace present but weightless
  GesDistribution iso{1.0, n, nullptr};
  const int draws = 20000;
  std::vector<Real> a, b;
  RandomStream sa(43), sb(47);
  for (int i = 0; i < draws; ++i) {
    a.push_back(sample_direction(full, sa).norm());
    b.push_back(sample_direction(iso, sb).norm());
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  Real d_stat = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) ++i; else ++j;
    d_stat = std::max(d_stat, std::abs(static_cast<Real>(i) / draws -
                                       static_cast<Real>(j) / draws));
  }
  const Real critical = 1.63 * std::sqrt(2.0 / draws);
  CHECK(d_stat < critical);
}

TEST_CASE("sample_direction rejects an empty dimension") {
  GesDistribution dist{1.0, 0, nullptr};
  RandomStream stream(1);
  CHECK_THROWS_AS(sample_direction(dist, stream), DegenerateSampler);
}

TEST_CASE("mirrored pairs append negations and cancel exactly") {
  const auto out = mirrored_pairs({vec2(1, 2)});
  REQUIRE(out.size() == 2);
  CHECK(out[0] == vec2(1, 2));
  CHECK(out[1] == vec2(-1, -2));

  RandomStream s(5);
  std::vector<Vector> base;
  for (int i = 0; i < 20; ++i) base.push_back(s.gaussian_vector(3));
  const auto all = mirrored_pairs(base);
  CHECK(all.size() == 40);
  // each pair cancels exactly, so the pairwise-accumulated sum is zero
  Vector sum = Vector::Zero(3);
  for (std::size_t i = 0; i < 20; ++i) sum += all[i] + all[i + 20];
  CHECK(sum.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("psi_average computes simplex-weighted sums") {
  const Vector out = psi_average({vec2(1, 0), vec2(0, 1)}, {0.5, 0.5});
  CHECK(out == vec2(0.5, 0.5));
  CHECK(psi_average({vec2(3, 7), vec2(1, 1)}, {1.0, 0.0}) == vec2(3, 7));
}

TEST_CASE("psi_average rejects weights off the simplex") {
  CHECK_THROWS_AS(psi_average({vec2(1, 0)}, {0.9}), WeightError);
  CHECK_THROWS_AS(psi_average({vec2(1, 0), vec2(0, 1)}, {1.5, -0.5}), WeightError);
  CHECK_THROWS_AS(psi_average({vec2(1, 0)}, {0.5, 0.5}), WeightError);
}

TEST_CASE("log-rank weights follow ln(count + 1/2) - ln(i), normalized") {
  const auto w = log_rank_weights(3);
  const Real raw1 = std::log(3.5) - std::log(1.0);
  const Real raw2 = std::log(3.5) - std::log(2.0);
  const Real raw3 = std::log(3.5) - std::log(3.0);
  const Real sum = raw1 + raw2 + raw3;
  CHECK(w[0] == doctest::Approx(raw1 / sum).epsilon(1e-12));
  CHECK(w[1] == doctest::Approx(raw2 / sum).epsilon(1e-12));
  CHECK(w[2] == doctest::Approx(raw3 / sum).epsilon(1e-12));
  CHECK(psi_average({vec2(1, 0), vec2(0, 1), vec2(1, 1)}, w)
            .isApprox(w[0] * vec2(1, 0) + w[1] * vec2(0, 1) + w[2] * vec2(1, 1)));
}

TEST_CASE("psi_guided reproduces the antithetic update") {
  // single pair with equal values cancels
  CHECK(psi_guided({vec2(1, 0)},
                   {{BarrierValue::finite(0.7), BarrierValue::finite(0.7)}}, 1.0, 5.0, 2)
            .isZero());
  // hand-evaluated case: -(5 / (1*2)) * (0.4 - 0.6) * (1, 0) = (0.5, 0)
  const Vector d = psi_guided({vec2(1, 0)},
                              {{BarrierValue::finite(0.4), BarrierValue::finite(0.6)}}, 1.0, 5.0,
                              2);
  CHECK(std::abs(d[0] - 0.5) < 1e-12);
  CHECK(std::abs(d[1]) < 1e-12);
}

TEST_CASE("psi_guided is linear in the value gaps") {
  const std::vector<Vector> dirs = {vec2(1, 2), vec2(-3, 1)};
  const Vector once = psi_guided(
      dirs, {{BarrierValue::finite(0.2), BarrierValue::finite(0.6)},
             {BarrierValue::finite(1.0), BarrierValue::finite(0.5)}},
      1.0, 5.0, 4);
  const Vector twice = psi_guided(
      dirs, {{BarrierValue::finite(0.4), BarrierValue::finite(1.2)},
             {BarrierValue::finite(2.0), BarrierValue::finite(1.0)}},
      1.0, 5.0, 4);
  CHECK(twice.isApprox(2.0 * once));
}

TEST_CASE("psi_guided negates when each pair's values swap") {
  RandomStream s(13);
  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<Vector> dirs;
    std::vector<std::pair<BarrierValue, BarrierValue>> values;
    std::vector<std::pair<BarrierValue, BarrierValue>> swapped;
    const int pairs = 1 + static_cast<int>(s.uniform() * 4);
    for (int i = 0; i < pairs; ++i) {
      dirs.push_back(s.gaussian_vector(3));
      const Real a = s.gaussian();
      const Real b = s.gaussian();
      values.emplace_back(BarrierValue::finite(a), BarrierValue::finite(b));
      swapped.emplace_back(BarrierValue::finite(b), BarrierValue::finite(a));
    }
    const Real sigma_es = 0.5 + s.uniform();
    const Vector fwd = psi_guided(dirs, values, sigma_es, 5.0, 2 * pairs);
    const Vector rev = psi_guided(dirs, swapped, sigma_es, 5.0, 2 * pairs);
    CHECK((fwd + rev).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("psi_guided skips infeasible pairs and reports when none remain") {
  const std::vector<Vector> dirs = {vec2(1, 0), vec2(0, 1)};
  const Vector d = psi_guided(
      dirs, {{BarrierValue::finite(0.4), BarrierValue::infeasible()},
             {BarrierValue::finite(1.0), BarrierValue::finite(0.0)}},
      1.0, 5.0, 4);
  // only the second pair contributes: -(5/4) * 1.0 * (0, 1)
  CHECK(d.isApprox(vec2(0, -1.25)));
  CHECK_THROWS_AS(psi_guided(dirs,
                             {{BarrierValue::infeasible(), BarrierValue::finite(0.0)},
                              {BarrierValue::finite(1.0), BarrierValue::infeasible()}},
                             1.0, 5.0, 4),
                  AllInfeasible);
}
