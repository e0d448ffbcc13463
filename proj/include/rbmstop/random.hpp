#pragma once

#include <cstdint>
#include <random>

namespace rbmstop {

/// Independent consumers of randomness inside one run.
enum class Stream : std::uint64_t {
  Init = 1,
  Training = 2,
  Measurement = 3,
  Sampling = 4,
};

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seedable 64-bit generator. The uniform and Bernoulli draws are defined
/// directly on the engine output so runs are bit-reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  /// Substream for `purpose` of the run seeded with `seed`.
  static Rng substream(std::uint64_t seed, Stream purpose) {
    return Rng(splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(purpose)));
  }

  std::uint64_t seed() const noexcept { return seed_; }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  double normal(double mean, double stddev) {
    return std::normal_distribution<double>(mean, stddev)(engine_);
  }

  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace rbmstop
