#pragma once

// Reproducible random streams.
//
// Every replica draws from its own stream, derived from (master seed, replica index)
// by hashing, so results do not depend on how replicas are scheduled over threads.
// The engine is xoshiro256** seeded through splitmix64.

#include <cstdint>
#include <limits>

namespace srrw {

inline constexpr std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  std::uint64_t s = x;
  return splitmix64_next(s);
}

class rng_stream {
 public:
  using result_type = std::uint64_t;

  explicit rng_stream(std::uint64_t seed = 0) noexcept {
    std::uint64_t s = seed;
    for (auto& word : state_) word = splitmix64_next(s);
  }

  // Independent stream number `index` under `master_seed`.
  static rng_stream stream(std::uint64_t master_seed, std::uint64_t index) noexcept {
    return rng_stream(mix64(master_seed) ^ mix64(index + 0xD1B54A32D192ED03ULL) ^
                      (index * 0xA24BAED4963EE407ULL));
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
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

  // Uniform on [0,1) with 53 random bits.
  double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Uniform on the open interval (0,1).
  double uniform_open01() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  bool bernoulli(double p) noexcept { return uniform01() < p; }

  // Unbiased integer in [0, bound) by multiply-and-reject (Lemire). bound must be > 0.
  std::uint32_t bounded(std::uint32_t bound) noexcept {
    std::uint64_t x = static_cast<std::uint32_t>((*this)() >> 32);
    std::uint64_t m = x * bound;
    auto low = static_cast<std::uint32_t>(m);
    if (low < bound) {
      const std::uint32_t threshold = static_cast<std::uint32_t>(-bound) % bound;
      while (low < threshold) {
        x = static_cast<std::uint32_t>((*this)() >> 32);
        m = x * bound;
        low = static_cast<std::uint32_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 32);
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4]{};
};

}  // namespace srrw
