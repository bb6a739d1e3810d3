#pragma once

// Counter-based seeding: the generator for sample i of a run is a pure
// function of (seed, stream tag, i), so results do not depend on how samples
// are split across workers.

#include <bit>
#include <cstdint>
#include <limits>

namespace ocone::rng {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Independent sub-streams of one sample (walk signs vs time change, ...).
enum class Stream : std::uint64_t { primary = 1, time_change = 2, auxiliary = 3, reflected = 4 };

/// xoshiro256** seeded from (seed, stream, index) through splitmix64.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& s : state_) {
      x += 0x9E3779B97F4A7C15ULL;
      s = splitmix64(x);
    }
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = std::rotl(state_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_[4]{};
};

inline Xoshiro256 stream_for(std::uint64_t seed, std::uint64_t index, Stream tag = Stream::primary) {
  const std::uint64_t k = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(tag) * 0xD1B54A32D192ED03ULL));
  return Xoshiro256(splitmix64(k + splitmix64(index)));
}

/// Fair signs drawn 64 at a time.
class SignSource {
 public:
  explicit SignSource(Xoshiro256& g) : g_(&g) {}
  int next() {
    if (left_ == 0) {
      bits_ = (*g_)();
      left_ = 64;
    }
    const int s = (bits_ & 1U) ? 1 : -1;
    bits_ >>= 1;
    --left_;
    return s;
  }

 private:
  Xoshiro256* g_;
  std::uint64_t bits_ = 0;
  int left_ = 0;
};

}  // namespace ocone::rng
