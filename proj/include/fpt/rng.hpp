#pragma once

// Deterministic pseudo-random streams for path synthesis and Monte Carlo.
//
// Requirements driving the choices here:
//   * counter-based stream addressing: stream k of a given master seed is
//     reproducible regardless of how many other streams are drawn, so path
//     counts and thread counts never reshuffle earlier paths;
//   * speed: the Euler-Maruyama driver consumes one normal per step, so the
//     generator and the normal transform dominate the simulation budget.
//
// xoshiro256++ (public-domain algorithm by Blackman and Vigna) seeded through
// splitmix64, as its authors recommend, with the stream index folded into the
// splitmix64 state through the golden-ratio increment. Normals use the polar
// (Marsaglia) method, which needs no transcendental beyond one log/sqrt pair
// per two variates.

#include <cmath>
#include <cstdint>

namespace fpt::rng {

// Advances `state` and returns a well-mixed 64-bit value.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class Xoshiro256pp {
 public:
  // Stream `stream` of master seed `seed`: distinct streams get splitmix64
  // states separated by the golden-ratio gamma, whose outputs (and hence the
  // four state words) are decorrelated by the avalanche mixer.
  explicit Xoshiro256pp(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t sm = seed + stream * 0x9E3779B97F4A7C15ULL;
    for (auto& word : s_) word = splitmix64(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform double in [-1, 1): 54 random bits re-centered about zero.
  double uniform_sym() {
    return (static_cast<double>(next() >> 10) - 0x1.0p53) * 0x1.0p-53;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

// Standard normal variates via the polar method, caching the paired draw.
class NormalGen {
 public:
  explicit NormalGen(Xoshiro256pp& engine) : engine_(&engine) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, q;
    do {
      u = engine_->uniform_sym();
      v = engine_->uniform_sym();
      q = u * u + v * v;
    } while (q >= 1.0 || q == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(q) / q);
    spare_ = v * factor;
    have_spare_ = true;
    return u * factor;
  }

 private:
  Xoshiro256pp* engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace fpt::rng
