// rng.hpp - seedable, splittable randomness.
//
// Seed derivation uses the splitmix64 finalizer, a bijection on 64-bit
// words: under a fixed master seed, distinct (stream, index) pairs with
// stream, index < 2^32 always map to distinct derived seeds. Sample streams
// come from xoshiro256**; Gaussian variates use Box-Muller on 53-bit
// uniforms so sequences do not depend on the platform's distribution
// implementations.

#pragma once

#include <complex>
#include <cstdint>
#include <cmath>
#include <numbers>
#include <vector>

namespace moddecon {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Documented splitting rule: hash the master once, xor in the packed
// (stream, index) key, finalize. Injective in (stream, index) below 2^32.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t index) {
  std::uint64_t s = master;
  const std::uint64_t hashed = splitmix64_next(s);
  std::uint64_t key = hashed ^ ((stream << 32) | (index & 0xFFFFFFFFULL));
  return splitmix64_next(key);
}

class Xoshiro256ss {
 public:
  explicit Xoshiro256ss(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64_next(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // uniform in [0, 1), 53 random bits
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // standard normal, Box-Muller with a cached spare
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
  }

  // +1 or -1 with equal probability
  double rademacher() { return (next() >> 63) ? 1.0 : -1.0; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4]{};
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// i.i.d. complex Gaussian entries, each component N(0, sigma_component^2)
inline std::vector<std::complex<double>> complex_gaussian_vec(
    std::size_t n, Xoshiro256ss& rng, double sigma_component = 1.0) {
  std::vector<std::complex<double>> v(n);
  for (auto& c : v) {
    const double re = sigma_component * rng.gaussian();
    const double im = sigma_component * rng.gaussian();
    c = {re, im};
  }
  return v;
}

}  // namespace moddecon
