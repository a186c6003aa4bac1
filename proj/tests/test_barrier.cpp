#include <doctest.h>

#include "sces/barrier.hpp"
#include "sces/random.hpp"

using namespace sces;

namespace {
Vector vec(std::initializer_list<Real> values) {
  Vector v(static_cast<Index>(values.size()));
  Index i = 0;
  for (Real x : values) v[i++] = x;
  return v;
}
}  // namespace

TEST_CASE("exact barrier keeps feasible values and kills violations") {
  CHECK(exact_barrier(5.0, vec({-1.0, -0.5})) == BarrierValue::finite(5.0));
  CHECK(!exact_barrier(5.0, vec({-1.0, 0.001})).is_finite());
  CHECK(exact_barrier(5.0, Vector(0)) == BarrierValue::finite(5.0));
  CHECK(exact_barrier(5.0, vec({0.0})).is_finite());  // boundary is feasible
}

TEST_CASE("adjusted barrier admits violations up to eps_c * sigma") {
  CHECK(adjusted_barrier(3.2, vec({-0.1}), 1.0, 0.1) == BarrierValue::finite(3.2));
  CHECK(adjusted_barrier(3.2, vec({0.05}), 1.0, 0.1) == BarrierValue::finite(3.2));
  CHECK(!adjusted_barrier(3.2, vec({0.15}), 1.0, 0.1).is_finite());
  // boundary c == eps_c * sigma is feasible (non-strict)
  CHECK(adjusted_barrier(3.2, vec({0.1}), 1.0, 0.1).is_finite());
}

TEST_CASE("violation is the positive part of the worst constraint") {
  CHECK(violation(vec({-2.0, -1.0})) == 0.0);
  CHECK(violation(vec({0.3, -1.0})) == doctest::Approx(0.3));
  CHECK(violation(Vector(0)) == 0.0);
}

TEST_CASE("barrier values form a total order with infeasible last") {
  const BarrierValue a = BarrierValue::finite(1.0);
  const BarrierValue b = BarrierValue::finite(2.0);
  const BarrierValue inf = BarrierValue::infeasible();
  CHECK(a < b);
  CHECK(a < inf);
  CHECK(b < inf);
  CHECK(!(inf < inf));
  CHECK(inf == BarrierValue::infeasible());
  CHECK(inf <= BarrierValue::infeasible());

  // trichotomy over random pairs
  RandomStream s(99);
  for (int i = 0; i < 1000; ++i) {
    const BarrierValue x =
        s.uniform() < 0.2 ? BarrierValue::infeasible() : BarrierValue::finite(s.gaussian());
    const BarrierValue y =
        s.uniform() < 0.2 ? BarrierValue::infeasible() : BarrierValue::finite(s.gaussian());
    const int ways = (x < y ? 1 : 0) + (y < x ? 1 : 0) + (x == y ? 1 : 0);
    CHECK(ways == 1);
  }
}

TEST_CASE("monotone relaxation: a feasible outcome stays feasible for looser tolerance") {
  RandomStream s(7);
  for (int i = 0; i < 1000; ++i) {
    Vector c = s.gaussian_vector(3);
    const Real eps1 = 0.1 + s.uniform();
    const Real sig1 = 0.1 + s.uniform();
    const Real eps2 = eps1 * (1.0 + s.uniform());
    const Real sig2 = sig1 * (1.0 + s.uniform());
    if (adjusted_barrier(0.0, c, eps1, sig1).is_finite()) {
      CHECK(adjusted_barrier(0.0, c, eps2, sig2).is_finite());
    }
  }
}

TEST_CASE("adjusted barrier matches exact barrier as sigma vanishes") {
  RandomStream s(8);
  for (int i = 0; i < 1000; ++i) {
    Vector c = s.gaussian_vector(4);
    bool any_zero = false;
    for (Index j = 0; j < c.size(); ++j) any_zero = any_zero || c[j] == 0.0;
    if (any_zero) continue;
    CHECK(adjusted_barrier(1.5, c, 1.0, 1e-300).is_finite() ==
          exact_barrier(1.5, c).is_finite());
  }
}

TEST_CASE("equality constraints expand to a +/- pair") {
  FeasibleRegion region;
  region.add_equality([](const Vector& x) { return x[0] - 1.0; });
  CHECK(region.size() == 2);
  const Vector at2 = region.evaluate(vec({2.0}));
  CHECK(at2[0] == doctest::Approx(1.0));
  CHECK(at2[1] == doctest::Approx(-1.0));
  // under the adjusted barrier this realizes |c(x)| <= eps_c * sigma
  CHECK(adjusted_barrier(0.0, region.evaluate(vec({1.05})), 1.0, 0.1).is_finite());
  CHECK(!adjusted_barrier(0.0, region.evaluate(vec({1.2})), 1.0, 0.1).is_finite());
  CHECK(!adjusted_barrier(0.0, region.evaluate(vec({0.8})), 1.0, 0.1).is_finite());
}
