#pragma once

#include <cstdint>
#include <random>

namespace trplan {

/// Seeded 64-bit Mersenne Twister (std::mt19937_64, whose output sequence is
/// fixed by the C++ standard). Floating-point draws are built from the top 53
/// bits by hand because std:: distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi); exactly lo when lo == hi.
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace trplan
