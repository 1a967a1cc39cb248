#ifndef IDLEWAVE_RNG_HPP
#define IDLEWAVE_RNG_HPP

#include <array>
#include <cstdint>

namespace idlewave {

// Portable, fully specified generators so traces reproduce bit-identically
// across platforms and languages.
//
// splitmix64: Steele/Lea/Flood (2014), the usual state-mixing constants.
// xoshiro256**: Blackman/Vigna (2018).

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class Xoshiro256StarStar {
 public:
  explicit Xoshiro256StarStar(std::uint64_t seed) {
    for (auto& word : state_) word = splitmix64_next(seed);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in (0, 1]; zero is excluded by construction so that
  /// log(u) is always finite.
  double next_uniform_open_closed() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
};

/// Substream seed for one rank: scenario seed mixed with the rank index.
inline std::uint64_t mix_rank_seed(std::uint64_t scenario_seed, int rank) {
  std::uint64_t s = scenario_seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(rank + 1));
  return splitmix64_next(s);
}

}  // namespace idlewave

#endif
