#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>

namespace iwf {

/// Seedable random source with portable output.
///
/// The bit stream comes from std::mt19937_64, whose sequence is fixed by the
/// C++ standard. Distributions are implemented here rather than with
/// <random>'s distribution classes, whose algorithms are implementation
/// defined, so a given seed yields the same draws under every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// Uniform integer in [0, n). n must be positive.
  std::size_t below(std::size_t n);

  /// Circularly-symmetric complex Gaussian with E|z|^2 = 1.
  ///
  /// Consumes exactly two uniforms: |z|^2 is Exp(1) by inverse CDF and the
  /// phase is uniform on [0, 2pi).
  std::complex<double> complex_gaussian();

 private:
  std::mt19937_64 engine_;
};

/// Combines two 64-bit values into a well-mixed seed (splitmix64 finalizer).
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace iwf
