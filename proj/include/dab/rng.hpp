#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace dab {

// 64-bit finalizer used both as the generator step and for seed derivation.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

// Derives an independent stream seed from a base seed and a list of indices.
// Chaining the finalizer over the parts keeps distinct index tuples on
// distinct streams, which is what makes parallel schedules order-free.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts) {
  std::uint64_t s = mix64(base + 0x9e3779b97f4a7c15ull);
  for (std::uint64_t p : parts) {
    s = mix64(s ^ (p + 0x9e3779b97f4a7c15ull));
  }
  return s;
}

// Canonical bit pattern of a double for use as a seed-derivation index.
// Collapses -0.0 to +0.0 so numerically equal parameters share a stream.
inline std::uint64_t hash_double(double v) {
  if (v == 0.0) v = 0.0;
  return std::bit_cast<std::uint64_t>(v);
}

// Deterministic counter-free generator: a splitmix64 walk.  Chosen over the
// standard library engines because its output is fully pinned by this header
// (std::mt19937 is pinned too, but the distributions on top of it are not).
// Normal variates use the Box-Muller transform with the paired variate
// cached, so consumption order is part of the documented contract.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix64(state_);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; produces pairs, returns one, caches one.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]: keeps log() finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Index draw by inversion of an explicit cumulative table (size >= 1).
  // cumulative must be nondecreasing with final entry ~1; ties broken upward.
  int pick_index(const double* cumulative, int size) {
    const double u = uniform();
    for (int i = 0; i + 1 < size; ++i) {
      if (u < cumulative[i]) return i;
    }
    return size - 1;
  }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace dab
