#pragma once

// Seedable random streams shared by every sampler.
//
// Generator: std::mt19937_64, whose output sequence is fixed by the C++
// standard. Uniforms are built from the top 53 bits of each draw, so the
// integer path is identical on every platform; only the final transforms
// (log, sqrt, cos) go through libm.
//
// Stream split: the k-th sample of a batch with base seed S is drawn from a
// generator seeded with derive_seed(S, k), where
//
//   mix(z)            = splitmix64 finalizer (Steele, Lea, Flood 2014)
//   derive_seed(S, k) = mix(mix(S) ^ (k * 0xD1B54A32D192ED03))
//
// This mapping is part of the reproducibility contract and must not change.

#include <cstdint>
#include <random>

namespace edgelab {

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return splitmix64_mix(splitmix64_mix(seed) ^ (index * 0xD1B54A32D192ED03ULL));
}

// Independent base seeds for distinct consumers of one user seed (e.g. the
// percolation and matrix sides of a comparison).
enum class Stream : std::uint64_t { Percolation = 1, Wishart = 2, Bootstrap = 3, Aux = 4 };

constexpr std::uint64_t stream_seed(std::uint64_t seed, Stream stream) noexcept {
  return splitmix64_mix(seed ^ splitmix64_mix(0xA5A5A5A5A5A5A5A5ULL + static_cast<std::uint64_t>(stream)));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1); never returns 1.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Inverse-CDF exponential with the given rate: -log(1 - U) / rate.
  double exponential(double rate);

  // Standard normal via Box-Muller; the second variate is cached.
  double normal();

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace edgelab
