#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace fracmix {

/// Seeded stream shared by every randomized suite: std::mt19937_64, and a
/// uniform double in [0,1) taken as (x >> 11) * 2^-53 from each 64-bit draw,
/// so other implementations can reproduce the stream exactly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Index in [0, n) as floor(n * uniform()).
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(static_cast<double>(n) * uniform()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fracmix
