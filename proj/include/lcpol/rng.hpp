#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace lcpol {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream for (seed, index): mt19937_64 seeded with splitmix64(seed ^ (g * (index + 1))).
inline std::mt19937_64 stream_for(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1))));
}

// One standard normal draw per stream (Box-Muller on two 53-bit uniforms, implementation-independent).
inline double normal_draw(std::uint64_t seed, std::uint64_t index) {
  auto g = stream_for(seed, index);
  const double u1 = ((g() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = (g() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793 * u2);
}

}  // namespace lcpol
