#pragma once

#include <cstdint>
#include <random>

#include "pptcanon/types.hpp"

namespace pptcanon {

/// Independent random streams. Each purpose draws from its own engine so that
/// adding a draw to one stream never shifts the values seen by another.
enum class Stream : std::uint64_t {
  kEigenvalues = 1,
  kUnitaries = 2,
  kDisguise = 3,
  kDensity = 4,
  kFrameSearch = 5,
  kJointDiagonalization = 6,
  kMatrices = 7,
};

/// SplitMix64 finalizer over (seed, stream, index).
std::uint64_t derive_seed(std::uint64_t seed, Stream stream, std::uint64_t index = 0);

/// mt19937_64 with distribution code written out here rather than taken from
/// <random>, whose distributions are implementation-defined. Output is the same
/// on every conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng for_stream(std::uint64_t seed, Stream stream, std::uint64_t index = 0) {
    return Rng(derive_seed(seed, stream, index));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal (Box-Muller).
  double normal();

  /// Standard complex Gaussian, E|z|^2 = 1.
  Complex complex_normal();

  /// Uniform on the closed disk of the given radius.
  Complex uniform_disk(double radius);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace pptcanon
