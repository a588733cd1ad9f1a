#include "gridstats/random.hpp"

namespace gridstats {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

UniformStream UniformStream::substream(std::uint64_t seed, std::uint64_t stream) noexcept {
  return UniformStream(splitmix64(seed + (stream + 1) * 0x9E3779B97F4A7C15ULL));
}

double UniformStream::next() noexcept {
  constexpr double kScale = 0x1.0p-53;
  return (static_cast<double>(engine_() >> 11) + 0.5) * kScale;
}

}  // namespace gridstats
