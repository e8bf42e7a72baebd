#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace robench {

// One step of SplitMix64; advances `state`.
std::uint64_t splitmix64(std::uint64_t& state);

// Seeded generator with a fixed, platform-independent draw procedure:
// mt19937_64 for raw bits, 53-bit mantissa for doubles, rejection sampling
// for integers. Child streams are derived by hashing (seed, stream id) with
// SplitMix64, so one candidate's draws never shift another's.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  Rng child(std::uint64_t stream) const;

  std::uint64_t next_u64() { return engine_(); }
  double uniform01();                                 // [0, 1)
  double uniform(double lo, double hi);               // [lo, hi)
  std::size_t index(std::size_t n);                   // [0, n), n > 0
  std::size_t range(std::size_t lo, std::size_t hi);  // [lo, hi] inclusive
  bool bernoulli(double p);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// Half-away-from-zero rounding to `decimals` places; -0 becomes 0.
double round_to(double v, int decimals);

}  // namespace robench
