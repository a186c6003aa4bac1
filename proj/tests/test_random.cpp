#include <doctest.h>

#include "sces/random.hpp"

using namespace sces;

TEST_CASE("substreams are deterministic given the same derivation") {
  RandomStream a(42);
  RandomStream b(42);
  RandomStream sa = a.substream(3, 7);
  RandomStream sb = b.substream(3, 7);
  for (int i = 0; i < 10; ++i) CHECK(sa.next_u64() == sb.next_u64());
}

TEST_CASE("substream derivation does not depend on parent draw position") {
  RandomStream a(42);
  RandomStream b(42);
  a.next_u64();
  a.next_u64();  // advancing the parent must not perturb children
  CHECK(a.substream(1).next_u64() == b.substream(1).next_u64());
}

TEST_CASE("distinct tags give distinct streams") {
  RandomStream root(7);
  CHECK(root.substream(1).next_u64() != root.substream(2).next_u64());
  CHECK(root.substream(1, 0).next_u64() != root.substream(1, 1).next_u64());
}

TEST_CASE("gaussian moments are sane") {
  RandomStream s(123);
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = s.gaussian();
    sum += g;
    sq += g * g;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sq / n - 1.0) < 0.02);
}

TEST_CASE("discrete sampling respects probabilities") {
  RandomStream s(5);
  Vector p(3);
  p << 0.2, 0.5, 0.3;
  Vector counts = Vector::Zero(3);
  const int n = 100000;
  for (int i = 0; i < n; ++i) counts[s.discrete(p)] += 1.0;
  counts /= static_cast<double>(n);
  CHECK(std::abs(counts[0] - 0.2) < 0.01);
  CHECK(std::abs(counts[1] - 0.5) < 0.01);
  CHECK(std::abs(counts[2] - 0.3) < 0.01);
}
