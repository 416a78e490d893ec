#pragma once

#include <cstdint>
#include <cstring>
#include <cmath>

#include "mskel/vec.hpp"

namespace mskel {

// Counter-based random streams. Every draw is a pure function of the seed
// material, so batch work can be split across threads in any way without
// changing results.

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t mix_u64(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
  return splitmix64(s);
}

inline std::uint64_t float_bits(double v) {
  std::uint64_t u;
  std::memcpy(&u, &v, sizeof(u));
  return u;
}

/// Small deterministic generator; cheap to construct per element.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {
    // burn one round so nearby seeds decorrelate
    splitmix64(state_);
  }

  /// Stream for the i-th element of a batch under a global seed.
  static Rng for_index(std::uint64_t seed, std::uint64_t index) {
    return Rng(mix_u64(seed, index));
  }

  /// Stream tied to a point's coordinates, independent of evaluation order.
  static Rng for_point(std::uint64_t seed, const Vec3& p) {
    std::uint64_t h = mix_u64(seed, float_bits(p.x));
    h = mix_u64(h, float_bits(p.y));
    h = mix_u64(h, float_bits(p.z));
    return Rng(h);
  }

  std::uint64_t next_u64() { return splitmix64(state_); }

  /// Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform on the unit sphere (rejection from the cube).
  Vec3 next_unit_vector() {
    for (;;) {
      Vec3 v{2.0 * next_double() - 1.0, 2.0 * next_double() - 1.0,
             2.0 * next_double() - 1.0};
      double n2 = norm2(v);
      if (n2 > 1e-12 && n2 <= 1.0) return v / std::sqrt(n2);
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace mskel
