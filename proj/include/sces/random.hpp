#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "sces/types.hpp"

namespace sces {

namespace detail {
// SplitMix64 step, used to mix substream keys. The constants are the
// standard Weyl increment and finalizer multipliers.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix(std::uint64_t key, std::uint64_t salt) {
  std::uint64_t s = key ^ (salt + 0x9e3779b97f4a7c15ULL);
  return splitmix64(s);
}
}  // namespace detail

// Deterministic random stream with cheap substream derivation. Substreams
// are keyed on the parent key and the derivation tags, not on generator
// state, so the draws of one stream never affect another. Gaussians come
// from an explicit Box-Muller transform; std::normal_distribution's
// algorithm is implementation-defined and would tie replay to one
// standard library.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : key_(seed), gen_(detail::mix(seed, 0x5ce5)) {}

  RandomStream substream(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const {
    std::uint64_t k = detail::mix(key_, a);
    k = detail::mix(k, b);
    k = detail::mix(k, c);
    return RandomStream(k);
  }

  std::uint64_t key() const { return key_; }

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  Vector gaussian_vector(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = gaussian();
    return v;
  }

  // Index into a discrete distribution given by non-negative weights
  // summing to ~1. Falls back to the last entry on accumulated rounding.
  Index discrete(const Vector& probabilities) {
    const double u = uniform();
    double acc = 0.0;
    for (Index i = 0; i < probabilities.size(); ++i) {
      acc += probabilities[i];
      if (u < acc) return i;
    }
    return probabilities.size() - 1;
  }

 private:
  std::uint64_t key_;
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Tags used to derive per-purpose substreams inside the engine. Keeping
// them in one place guarantees evaluation streams never collide with
// direction or surrogate streams.
namespace stream_tag {
inline constexpr std::uint64_t kInit = 1;
inline constexpr std::uint64_t kDirection = 2;
inline constexpr std::uint64_t kEvaluation = 3;
inline constexpr std::uint64_t kTrial = 4;
inline constexpr std::uint64_t kSurrogate = 5;
}  // namespace stream_tag

}  // namespace sces
