#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>

namespace covbal {

// SplitMix64 finalizer (Steele, Lea & Flood 2014).
std::uint64_t mix64(std::uint64_t x);

// Derives an independent stream key from a user seed and a path of stream
// identifiers (replicate index, attempt, purpose tag...). Pure function, so
// any replicate can be regenerated without replaying earlier ones.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

// SplitMix64 in counter mode. The algorithm and every derived draw are fixed
// here rather than delegated to <random> distributions, whose algorithms are
// implementation-defined; published seeds therefore reproduce bit-exactly.
class Rng {
 public:
  explicit Rng(std::uint64_t key) : state_(key) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform on {0, ..., bound - 1}; exact (Lemire's multiply-shift with
  // rejection). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  // Standard normal (Marsaglia polar method).
  double normal();

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace covbal
