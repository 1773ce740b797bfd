#pragma once

#include <cstdint>
#include <random>

namespace chanem {

// All randomness flows through std::mt19937_64, whose output sequence is fixed
// by the C++ standard. The std distributions are implementation-defined, so
// uniform draws are derived from raw engine output here instead.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) with 53 random mantissa bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n), unbiased by rejection. Requires n > 0.
  std::uint64_t below(std::uint64_t n);

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Sub-seed for task `index` on stream `stream`; independent of execution order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                          std::uint64_t stream = 0) noexcept;

}  // namespace chanem
