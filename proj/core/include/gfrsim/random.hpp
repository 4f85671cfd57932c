#pragma once

#include <cstdint>
#include <random>

namespace gfrsim {

/// Seeded uniform source. The engine is std::mt19937_64, whose output
/// sequence is fixed by the C++ standard; uniforms are built from the top
/// 53 bits so results do not depend on the standard library's
/// distribution implementations.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed);

  /// Uniform in [0, 1).
  double next_uniform();
  std::uint64_t next_u64() { return engine_(); }

  std::uint64_t seed() const { return seed_; }

  /// Independent child stream, derived deterministically from this
  /// source's seed and `stream`.
  RandomSource fork(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace gfrsim
