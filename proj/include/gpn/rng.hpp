#pragma once

#include <cstdint>
#include <vector>

namespace gpn {

/// SplitMix64: tiny, fast, and fully deterministic across platforms, which
/// std::normal_distribution is not.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  std::uint64_t next();

  /// Uniform double in (0, 1); never returns 0 so it is log-safe.
  double next_unit();

 private:
  std::uint64_t state_;
};

/// Finalizer step of SplitMix64, used as the mixing function for stream
/// derivation.
std::uint64_t mix64(std::uint64_t z);

enum class StreamRole : std::uint64_t { signal = 1, noise = 2 };

/// Counter-based stream derivation: the stream for a replicate depends only
/// on (seed, replicate index, role), never on execution order, so replicates
/// can run in parallel without changing results.
SplitMix64 replicate_stream(std::uint64_t seed, std::uint64_t replicate,
                            StreamRole role);

/// Standard normals via Box-Muller on SplitMix64 uniforms; bit-reproducible
/// for a given stream state.
std::vector<double> standard_normals(SplitMix64& rng, int count);

}  // namespace gpn
