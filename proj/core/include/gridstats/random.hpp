#pragma once

#include <cstdint>
#include <random>

namespace gridstats {

/// SplitMix64 finalizer; used to derive independent seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seeded uniform stream on the open interval (0, 1).
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Each 64-bit word w maps to ((w >> 11) + 0.5) * 2^-53, so the
/// doubles are identical on every conforming platform. No std::*_distribution
/// is involved, since their algorithms are implementation-defined.
///
/// Stream splitting: substream k of seed s is seeded with
/// splitmix64(s + (k + 1) * 0x9E3779B97F4A7C15).
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}

  static UniformStream substream(std::uint64_t seed, std::uint64_t stream) noexcept;

  double next() noexcept;

 private:
  std::mt19937_64 engine_;
};

}  // namespace gridstats
