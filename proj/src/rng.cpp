#include "gpn/rng.hpp"

#include <cmath>
#include <numbers>

namespace gpn {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix64::next_unit() {
  // 53 random bits; map 0 to the smallest representable step.
  const std::uint64_t bits = next() >> 11;
  const double u = static_cast<double>(bits) * 0x1.0p-53;
  return u > 0.0 ? u : 0x1.0p-53;
}

SplitMix64 replicate_stream(std::uint64_t seed, std::uint64_t replicate,
                            StreamRole role) {
  std::uint64_t s = mix64(seed);
  s = mix64(s ^ (replicate + 1));
  s = mix64(s ^ (static_cast<std::uint64_t>(role) * 0xd1342543de82ef95ULL));
  return SplitMix64(s);
}

std::vector<double> standard_normals(SplitMix64& rng, int count) {
  std::vector<double> z;
  z.reserve(count + 1);
  while (static_cast<int>(z.size()) < count) {
    const double u1 = rng.next_unit();
    const double u2 = rng.next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    z.push_back(r * std::cos(t));
    z.push_back(r * std::sin(t));
  }
  z.resize(count);
  return z;
}

}  // namespace gpn
